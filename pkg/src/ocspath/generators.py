"""Lower-bound families and seeded random instances.

Random instances use SplitMix64 in counter mode: the ``i``-th draw of a
stream with seed ``s`` is ``mix64(s + (i + 1) * 0x9E3779B97F4A7C15)``
(mod 2**64), turned into a float in [0, 1) from its top 53 bits.  Candidate
transitions are visited in a fixed order (source, effect, target, each
ascending), so the same arguments give the same system on any platform.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import Config, Ocs
from .errors import PreconditionError

MASK = (1 << 64) - 1
GOLDEN = 0x9E3779B97F4A7C15


def mix64(z: int) -> int:
    z &= MASK
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK
    return z ^ (z >> 31)


class SplitMix64:
    def __init__(self, seed: int):
        self.seed = seed & MASK
        self.counter = 0

    def next_u64(self) -> int:
        self.counter += 1
        return mix64(self.seed + self.counter * GOLDEN)

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def below(self, k: int) -> int:
        return int(self.random() * k)


@dataclass(frozen=True)
class Instance:
    """A generated system with its documented source and target."""

    ocs: Ocs
    source: Config
    target: Config


def example1(n: int) -> Instance:
    """``2n`` states; the only path from (p_1, 0) to (q_1, 0) has length n^2."""
    if n < 2:
        raise PreconditionError("example1 needs n >= 2")
    names = [f"p_{i}" for i in range(1, n + 1)] + [f"q_{i}" for i in range(1, n + 1)]
    p = lambda i: i - 1  # noqa: E731
    q = lambda i: n + i - 1  # noqa: E731
    t_pos = [(p(i), 1, p(i + 1)) for i in range(2, n)]
    t_pos += [(q(i), 0, q(i + 1)) for i in range(1, n)]
    t_pos += [(q(n), -1, q(1)), (p(n), 0, q(1))]
    ocs = Ocs(2 * n, t_pos, [(p(1), 1, p(2))], names)
    return Instance(ocs, Config(p(1), 0), Config(q(1), 0))


def example2(k: int, m: int) -> Instance:
    """Coprime cycles of sizes k and m; the shortest path has length 2km + 2.

    The source is (p_0, 0): the zero test out of p_0 is the only move
    available at counter zero, so the search starts there.
    """
    if k < 2 or m < 2 or gcd(k, m) != 1:
        raise PreconditionError("example2 needs coprime k, m >= 2")
    names = [f"p_{i}" for i in range(k)] + [f"q_{j}" for j in range(m)] + ["s_1", "s_2"]
    s1, s2 = k + m, k + m + 1
    t_pos = [(i, 1, (i + 1) % k) for i in range(k)]
    t_pos += [(k + j, -1, k + (j + 1) % m) for j in range(m)]
    t_pos += [(0, 0, k), (k + m - 1, -1, s1)]
    t_zero = [(0, 1, 1), (s1, 0, s2)]
    return Instance(Ocs(k + m + 2, t_pos, t_zero, names), Config(0, 0), Config(s2, 0))


def example3(n: int, c_alpha: int = 0, c_beta: int = 0) -> Instance:
    """``4n`` states; every path from (a_1, c_alpha) to (b_n, c_beta)
    has length at least n^2 + n (c_alpha + c_beta + 2)."""
    if n < 2:
        raise PreconditionError("example3 needs n >= 2")
    if c_alpha < 0 or c_beta < 0:
        raise PreconditionError("counter values must be nonnegative")
    core = example1(n).ocs
    names = list(core.names) + [f"a_{i}" for i in range(1, n + 1)] + [f"b_{i}" for i in range(1, n + 1)]
    a = lambda i: 2 * n + i - 1  # noqa: E731
    b = lambda i: 3 * n + i - 1  # noqa: E731
    chains = [(a(i), 0, a(i + 1)) for i in range(1, n)] + [(b(i), 0, b(i + 1)) for i in range(1, n)]
    t_pos = list(core.t_pos) + chains + [(a(n), -1, a(1)), (b(n), 1, b(1))]
    t_zero = list(core.t_zero) + chains + [(b(n), 1, b(1)), (a(n), 0, 0), (n, 0, b(1))]
    return Instance(Ocs(4 * n, t_pos, t_zero, names), Config(a(1), c_alpha), Config(b(n), c_beta))


def random_triples(rng: SplitMix64, n: int, effects, density: float) -> list[tuple[int, int, int]]:
    if not 0.0 <= density <= 1.0:
        raise PreconditionError("densities must lie in [0, 1]")
    out = []
    for src in range(n):
        for eff in effects:
            for dst in range(n):
                if rng.random() < density:
                    out.append((src, eff, dst))
    return out


def random_ocs(n: int, pos_density: float, zero_density: float, seed: int) -> Ocs:
    rng = SplitMix64(seed)
    t_pos = random_triples(rng, n, (-1, 0, 1), pos_density)
    t_zero = random_triples(rng, n, (0, 1), zero_density)
    return Ocs(n, t_pos, t_zero)


def random_oca(
    n: int,
    pos_density: float,
    zero_density: float,
    seed: int,
    alphabet: tuple[str, ...] = ("a", "b"),
    epsilon: float = 0.3,
):
    """Random automaton: each transition is epsilon with probability ``epsilon``."""
    from .words import Oca

    rng = SplitMix64(seed)
    t_pos = random_triples(rng, n, (-1, 0, 1), pos_density)
    t_zero = random_triples(rng, n, (0, 1), zero_density)
    ocs = Ocs(n, t_pos, t_zero)
    labels = []
    for _ in ocs.transitions:
        labels.append(None if rng.random() < epsilon else alphabet[rng.below(len(alphabet))])
    initial = {i for i in range(n) if rng.random() < 0.3} or {0}
    final = {i for i in range(n) if rng.random() < 0.3} or {n - 1}
    return Oca(ocs, tuple(labels), tuple(alphabet), frozenset(initial), frozenset(final))


def random_zocs(n: int, density: float, seed: int, zero_density: float | None = None):
    from .zcounter import ZOcs

    rng = SplitMix64(seed)
    zd = density if zero_density is None else zero_density
    t_pos = random_triples(rng, n, (-1, 0, 1), density)
    t_neg = random_triples(rng, n, (-1, 0, 1), density)
    t_zero = random_triples(rng, n, (-1, 0, 1), zd)
    return ZOcs(n, t_pos, t_neg, t_zero)


def random_shift_zocs(n: int, density: float, seed: int):
    """Random system whose three guard classes share one transition set."""
    from .zcounter import ZOcs

    rng = SplitMix64(seed)
    ts = random_triples(rng, n, (-1, 0, 1), density)
    return ZOcs(n, ts, ts, ts)


def counting_oca(n: int):
    """Unary automaton with ``2n + 1`` states accepting exactly ``a^(n^2 + 1)``.

    The deterministic run of :func:`example1` reaches (q_1, 0) after n^2
    steps; one more zero test then enters the only final state.
    """
    from .words import Oca

    base = example1(n).ocs
    f = 2 * n
    ocs = Ocs(2 * n + 1, base.t_pos, list(base.t_zero) + [(n, 0, f)], list(base.names) + ["f"])
    labels = tuple("a" for _ in ocs.transitions)
    return Oca(ocs, labels, ("a",), frozenset({0}), frozenset({f}))


def _cycle_with_chords(rng, states, effects, modulus, chords):
    """Directed cycle over ``states`` with the given edge effects, plus random
    chords whose effect respects the cycle's potential mod ``modulus``."""
    k = len(states)
    edges = [(states[i], effects[i], states[(i + 1) % k]) for i in range(k)]
    pot = [0] * k
    for i in range(1, k):
        pot[i] = pot[i - 1] + effects[i - 1]
    for _ in range(chords):
        i, j = rng.below(k), rng.below(k)
        for e in (-1, 0, 1):
            if (pot[j] - pot[i] - e) % modulus == 0:
                edges.append((states[i], e, states[j]))
                break
    return edges


def random_tower_ocs(gadgets: int, seed: int, chords: int = 4) -> Instance:
    """Chained gadgets whose crossings force counters far above ``5n``.

    A gadget is an up-cycle with total effect A and a down-cycle with total
    effect -B (gcd(A, B) = g drawn from {1, 2, 3}, a few effect-0 padding
    edges), entered by a zero test at counter 0 and left by a decrement that
    must hit 0 exactly.  Residues force the switch from up to down to happen
    at a positive multiple of lcm(A, B), and parameters are redrawn until
    that is at least ``5n`` for the whole system, so no low arc exists.
    Chords respecting the residues add alternative cycles.  Source: first
    entry at counter 0; target: last exit at counter 0.
    """
    if gadgets < 1:
        raise PreconditionError("at least one gadget is needed")
    rng = SplitMix64(seed)
    lo, hi = (9, 15) if gadgets == 1 else (22, 30)
    while True:
        specs = []
        for _ in range(gadgets):
            g = 1 + rng.below(3 if gadgets == 1 else 2)
            while True:
                a, b = lo + rng.below(hi - lo + 1), lo + rng.below(hi - lo + 1)
                if gcd(a, b) == 1:
                    break
            specs.append((g * a, g * b, rng.below(3), rng.below(3)))
        n = sum(A + B + pa + pb + 2 for A, B, pa, pb in specs)
        if all(A * B // gcd(A, B) >= 5 * n for A, B, _, _ in specs):
            break
    t_pos, t_zero = [], []
    base = 0
    for A, B, pad_a, pad_b in specs:
        k, m = A + pad_a, B + pad_b
        # first up-edge is the +1 doubled by the entry zero test; last
        # down-edge is a decrement so the exit residue is 0 mod B
        mid_up = [1] * (A - 1) + [0] * pad_a
        mid_down = [-1] * (B - 1) + [0] * pad_b
        for seq in (mid_up, mid_down):
            for i in range(len(seq) - 1, 0, -1):
                j = rng.below(i + 1)
                seq[i], seq[j] = seq[j], seq[i]
        up = [1] + mid_up
        down = mid_down + [-1]
        P = list(range(base, base + k))
        Q = list(range(base + k, base + k + m))
        s1, s2 = base + k + m, base + k + m + 1
        t_pos += _cycle_with_chords(rng, P, up, A, chords)
        t_pos += _cycle_with_chords(rng, Q, down, B, chords)
        t_pos += [(P[0], 0, Q[0]), (Q[-1], -1, s1)]
        t_zero += [(P[0], 1, P[1]), (s1, 0, s2)]
        if base:
            t_zero.append((base - 1, 0, P[0]))
        base = s2 + 1
    return Instance(Ocs(base, t_pos, t_zero), Config(0, 0), Config(base - 1, 0))
