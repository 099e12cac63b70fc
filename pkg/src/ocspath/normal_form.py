"""Normal decompositions of arcs and their independent checkers.

Nothing here imports the normalizer: these checks are the yardstick its
output is measured against.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .core import Ocs, Path, is_arc, validate_path
from .scc import SccAnalysis


def lcm(x: int, y: int) -> int:
    return x * y // gcd(x, y)


@dataclass(frozen=True)
class NormalDecomposition:
    """``pref · up · cap · down · suff`` with its pumping parameters.

    ``up`` repeats the positive cycle of SCC ``S`` ``a`` times, ``down`` the
    negative cycle of SCC ``T`` ``b`` times; ``A`` and ``B`` are their
    (absolute) effects, ``K = eff(pref) + eff(cap) + eff(suff)`` and
    ``L = len(cap)``.
    """

    pref: Path
    up: Path
    cap: Path
    down: Path
    suff: Path
    S: int
    T: int
    A: int
    B: int
    a: int
    b: int
    K: int
    L: int

    @property
    def parts(self) -> tuple[Path, ...]:
        return (self.pref, self.up, self.cap, self.down, self.suff)

    @property
    def length(self) -> int:
        return sum(len(p) for p in self.parts)


def cap_cycle_violations(cap: Path, g: int) -> list[tuple[int, int]]:
    """Index pairs ``i < j`` of the cap whose infix is a cycle with effect ≡ 0 mod g."""
    cfgs = cap.configs
    bad = []
    for i in range(len(cfgs)):
        for j in range(i + 1, len(cfgs)):
            if cfgs[i].state == cfgs[j].state and (cfgs[j].counter - cfgs[i].counter) % g == 0:
                bad.append((i, j))
    return bad


def verify_normal(ocs: Ocs, analysis: SccAnalysis, d: NormalDecomposition) -> list[str]:
    """Re-check every condition of a normal decomposition; ``[]`` means ok."""
    n = ocs.n
    problems = []
    for name, part in zip(("pref", "up", "cap", "down", "suff"), d.parts):
        for v in validate_path(part, ocs):
            problems.append(f"validity: {name} step {v.step} breaks {v.rule} ({v.detail})")
    for (n1, p1), (n2, p2) in zip(
        zip(("pref", "up", "cap", "down"), d.parts), zip(("up", "cap", "down", "suff"), d.parts[1:])
    ):
        if p1.targ != p2.src:
            problems.append(f"validity: {n1} ends at {tuple(p1.targ)} but {n2} starts at {tuple(p2.src)}")
    if not problems:
        whole = d.pref + d.up + d.cap + d.down + d.suff
        if not is_arc(whole):
            problems.append("validity: the concatenation is not an arc")

    if d.S not in analysis.sigma_plus:
        problems.append(f"(i): SCC {d.S} is not positively enabled")
    else:
        plus = analysis.sigma_plus[d.S]
        if sum(t.eff for t in plus) != d.A:
            problems.append(f"(i): A={d.A} differs from the effect of the positive cycle")
        if d.up.transitions != plus * d.a:
            problems.append(f"(i): up is not {d.a} copies of the positive cycle")
        if d.cap.src.state != plus[0].src:
            problems.append("cap does not start at the base state of the positive cycle")
    if d.T not in analysis.sigma_minus:
        problems.append(f"(ii): SCC {d.T} is not negatively enabled")
    else:
        minus = analysis.sigma_minus[d.T]
        if -sum(t.eff for t in minus) != d.B:
            problems.append(f"(ii): B={d.B} differs from the effect of the negative cycle")
        if d.down.transitions != minus * d.b:
            problems.append(f"(ii): down is not {d.b} copies of the negative cycle")
        if d.cap.targ.state != minus[0].src:
            problems.append("cap does not end at the base state of the negative cycle")
    if d.A <= 0 or d.B <= 0:
        problems.append("A and B must be positive")
        return problems

    bound = 2 * len(d.cap) + 2 * lcm(d.A, d.B)
    if d.a * d.A > bound:
        problems.append(f"(iii): a*A = {d.a * d.A} exceeds {bound}")
    if d.b * d.B > bound:
        problems.append(f"(iv): b*B = {d.b * d.B} exceeds {bound}")
    bad = cap_cycle_violations(d.cap, gcd(d.A, d.B))
    if bad:
        problems.append(f"(v): cap infix {bad[0]} is a cycle with effect divisible by gcd(A, B)")
    if d.up.targ.counter <= n or d.down.src.counter <= n:
        problems.append("(vi): the cap must start and end above counter value n")
    low = d.pref.configs + d.suff.configs
    if len(set(low)) != len(low):
        problems.append("(vii): a configuration repeats on pref and suff")
    for name, part in (("pref", d.pref), ("suff", d.suff)):
        if any(c.counter >= 5 * n for c in part.configs):
            problems.append(f"{name} is not low")
    if d.L != len(d.cap):
        problems.append("L differs from the cap length")
    if d.K != d.pref.effect + d.cap.effect + d.suff.effect:
        problems.append("K differs from eff(pref) + eff(cap) + eff(suff)")
    return problems


def check_amortization(
    ocs: Ocs,
    analysis: SccAnalysis,
    pieces: list[tuple[Path, NormalDecomposition | None]],
    pairwise: bool = False,
) -> list[str]:
    """Global length accounting over the arcs of one normalized path.

    ``pieces`` lists each arc with its decomposition (None for low arcs).
    ``pairwise`` adds the quadratic cross-arc cap check.
    """
    n = ocs.n
    problems = []
    normal = [d for _, d in pieces if d is not None]
    low_total = sum(len(arc) for arc, d in pieces if d is None)
    low_total += sum(len(d.pref) + len(d.suff) for d in normal)
    if low_total > 5 * n * n:
        problems.append(f"low arcs plus prefixes and suffixes total {low_total} > 5n^2")
    caps = sum(len(d.cap) for d in normal)
    if caps > n * n:
        problems.append(f"caps total {caps} > n^2")
    ups = sum(len(d.up) for d in normal)
    downs = sum(len(d.down) for d in normal)
    if ups > 4 * n * n:
        problems.append(f"up segments total {ups} > 4n^2")
    if downs > 4 * n * n:
        problems.append(f"down segments total {downs} > 4n^2")

    per_pair: dict[tuple[int, int], int] = {}
    per_s: dict[int, int] = {}
    per_t: dict[int, int] = {}
    for d in normal:
        per_pair[(d.S, d.T)] = per_pair.get((d.S, d.T), 0) + 1
        per_s[d.S] = per_s.get(d.S, 0) + len(d.cap)
        per_t[d.T] = per_t.get(d.T, 0) + len(d.cap)
    for (s, t), count in sorted(per_pair.items()):
        g = gcd(analysis.A(s), analysis.B(t))
        if count > g:
            problems.append(f"{count} normal arcs for SCC pair {(s, t)} exceed gcd {g}")
    for s, total in sorted(per_s.items()):
        if total > analysis.A(s) * n:
            problems.append(f"caps pumped up from SCC {s} total {total} > A_S * n")
    for t, total in sorted(per_t.items()):
        if total > analysis.B(t) * n:
            problems.append(f"caps pumped down into SCC {t} total {total} > n * B_T")

    if pairwise:
        for i, di in enumerate(normal):
            for dj in normal[i + 1 :]:
                g = gcd(analysis.A(di.S), analysis.B(dj.T))
                keys = {(c.state, c.counter % g) for c in di.cap.configs}
                if any((c.state, c.counter % g) in keys for c in dj.cap.configs):
                    problems.append(
                        f"caps of two arcs share a state with counters congruent mod {g}"
                    )
    return problems
