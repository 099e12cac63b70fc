"""Constructive normalization of arcs and of whole zero-to-zero paths.

An arc is rebuilt either as the shortest low arc between its endpoints or
as a normal arc ``pref · up · cap · down · suff``; a path is normalized
arc by arc after first switching to a path with the fewest intermediate
zero configurations.  Every output is re-checked by the independent
verifiers in :mod:`ocspath.normal_form`.
"""

from __future__ import annotations

from math import gcd

from .core import (
    Config,
    Ocs,
    Path,
    Transition,
    effect,
    empty_path,
    fasten,
    is_arc,
    remove_repeats,
    split_arcs,
    validate_path,
)
from .errors import InvariantError, PreconditionError, ResourceError, Unreachable
from .normal_form import NormalDecomposition, check_amortization, lcm, verify_normal
from .reachability import ArcGraph, _arcs_from
from .scc import SccAnalysis, analyze, connective

MAX_STATES = 20_000


def egcd(a: int, b: int) -> tuple[int, int, int]:
    """``(g, x, y)`` with ``a*x + b*y == g == gcd(a, b)``."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def _ceil_div(x: int, y: int) -> int:
    return -((-x) // y)


def choose_ab(A: int, B: int, K: int, L: int) -> tuple[int, int]:
    """Repeat counts with ``a*A - b*B == -K`` and ``L <= a*A, b*B <= 2L + 2 lcm(A, B)``."""
    if A <= 0 or B <= 0 or L < 0:
        raise PreconditionError("choose_ab needs A, B > 0 and L >= 0")
    g, x0, y1 = egcd(A, B)
    if K % g:
        raise PreconditionError(f"gcd({A}, {B}) = {g} does not divide K = {K}")
    # x0*A - y0*B == g
    scale = -K // g
    x, y = x0 * scale, -y1 * scale
    step_a, step_b = B // g, A // g
    # Shift to the least nonnegative solution, then climb until both
    # products reach L.
    m = max(_ceil_div(-x, step_a), _ceil_div(-y, step_b))
    x, y = x + m * step_a, y + m * step_b
    span = lcm(A, B)
    i = max(0, _ceil_div(L - x * A, span), _ceil_div(L - y * B, span))
    a, b = x + i * step_a, y + i * step_b
    if max(a * A, b * B) > 2 * L + 2 * span:
        raise PreconditionError(f"no admissible (a, b) for A={A}, B={B}, K={K}, L={L}")
    return a, b


def unpump_mod_gcd(sigma, g: int) -> tuple[Transition, ...]:
    """Cut every infix cycle whose effect is divisible by ``g``.

    Two positions clash when they sit in the same state with prefix effects
    congruent mod g.  Excising an infix shifts later prefix effects by a
    multiple of g, so jumping straight to the last clashing position keeps
    every surviving key intact and one pass reaches the fixpoint.
    """
    sigma = tuple(Transition(*t) for t in sigma)
    if g <= 0:
        raise PreconditionError("g must be positive")
    if not sigma:
        return ()
    for i in range(len(sigma) - 1):
        if sigma[i].dst != sigma[i + 1].src:
            raise PreconditionError(f"sequence is inconsistent at step {i}")
    keys = [(sigma[0].src, 0)]
    total = 0
    for t in sigma:
        total += t.eff
        keys.append((t.dst, total % g))
    last = {k: i for i, k in enumerate(keys)}
    out = []
    i = 0
    while True:
        i = last[keys[i]]
        if i == len(sigma):
            return tuple(out)
        out.append(sigma[i])
        i += 1


def _first_repeat(states: list[int]) -> tuple[int, int]:
    seen = {}
    for pos, s in enumerate(states):
        if s in seen:
            return seen[s], pos
        seen[s] = pos
    raise InvariantError("pigeonhole failed: no repeated state among n + 1 levels")


class Normalizer:
    """Normalizes arcs and paths of one system.

    One instance shares a single SCC analysis, so every normal arc pumps with
    the same distinguished cycles, and caches arc searches across queries.
    """

    def __init__(self, ocs: Ocs, analysis: SccAnalysis | None = None):
        if ocs.n > MAX_STATES:
            raise ResourceError(f"normalization supports at most {MAX_STATES} states")
        self.ocs = ocs
        self.analysis = analysis if analysis is not None else analyze(ocs)
        self.arc_graph = ArcGraph(ocs)
        self._low: dict[int, dict[int, Path]] = {}

    def low_arc(self, p: int, q: int) -> Path | None:
        if p == q:
            return empty_path(Config(p, 0))
        if p not in self._low:
            self._low[p] = _arcs_from(self.ocs, p, 5 * self.ocs.n - 1, None)
        return self._low[p].get(q)

    def normalize_arc(self, arc: Path) -> tuple[Path, NormalDecomposition | None]:
        ocs = self.ocs
        if validate_path(arc, ocs):
            raise PreconditionError("input is not a valid path of the system")
        if not is_arc(arc):
            raise PreconditionError("input is not an arc")
        low = self.low_arc(arc.src.state, arc.targ.state)
        if low is not None:
            return low, None
        d = self._normal(remove_repeats(arc))
        problems = verify_normal(ocs, self.analysis, d)
        if problems:
            raise InvariantError("normal decomposition is broken: " + "; ".join(problems))
        return d.pref + d.up + d.cap + d.down + d.suff, d

    def _normal(self, rho: Path) -> NormalDecomposition:
        n = self.ocs.n
        an = self.analysis
        cfgs, ts = rho.configs, rho.transitions
        first: dict[int, int] = {}
        last: dict[int, int] = {}
        for i, c in enumerate(cfgs):
            if 2 * n <= c.counter <= 3 * n:
                first.setdefault(c.counter, i)
                last[c.counter] = i
        levels = range(2 * n, 3 * n + 1)
        if len(first) != len(levels):
            raise InvariantError("an arc that is not low must cross every level in [2n, 3n]")

        # Positive side: two levels entered first in the same state p.
        k, _ = _first_repeat([cfgs[first[lv]].state for lv in levels])
        ik = first[levels[k]]
        p = cfgs[ik].state
        S = an.component_of[p]
        if S not in an.sigma_plus:
            raise InvariantError(f"SCC {S} holds a positive cycle but is not positively enabled")
        up_cycle = an.sigma_plus[S]
        q = up_cycle[0].src
        s_pq = connective(an, S, p, q)
        s_qp = connective(an, S, q, p)
        pref = Path(cfgs[: ik + 1], ts[:ik]) + fasten(cfgs[ik], s_pq)

        # Negative side: two levels left last in the same state pb.
        # the higher level of the pair is left earlier on the arc
        _, kb = _first_repeat([cfgs[last[lv]].state for lv in levels])
        jk = last[levels[kb]]
        pb = cfgs[jk].state
        T = an.component_of[pb]
        if T not in an.sigma_minus:
            raise InvariantError(f"SCC {T} holds a negative cycle but is not negatively enabled")
        down_cycle = an.sigma_minus[T]
        qb = down_cycle[0].src
        s_pbqb = connective(an, T, pb, qb)
        s_qbpb = connective(an, T, qb, pb)
        suff = fasten(Config(qb, cfgs[jk].counter - effect(s_qbpb)), s_qbpb) + Path(cfgs[jk:], ts[jk:])

        A = an.A(S)
        B = an.B(T)
        x, y = pref.targ.counter, suff.src.counter
        if x <= y - A:
            reps = (y - A - x) // A + 1
            pref = pref + fasten(pref.targ, up_cycle * reps)
        elif x >= y + B:
            reps = (x - B - y) // B + 1
            suff = fasten(Config(qb, y + reps * B), down_cycle * reps) + suff
        pref = remove_repeats(pref)
        suff = remove_repeats(suff)

        g = gcd(A, B)
        c = g - 1
        pre = s_qp + (s_pq + s_qp) * c
        post = (s_pbqb + s_qbpb) * c + s_pbqb
        cap_seq = unpump_mod_gcd(pre + ts[ik:jk] + post, g)
        if not cap_seq and q != qb:
            raise InvariantError("empty cap between distinct base states")
        K = pref.effect + effect(cap_seq) + suff.effect
        L = len(cap_seq)
        a, b = choose_ab(A, B, K, L)
        up = fasten(pref.targ, up_cycle * a)
        cap = fasten(up.targ, cap_seq)
        down = fasten(cap.targ, down_cycle * b)
        if down.targ != suff.src:
            raise InvariantError(f"down ends at {tuple(down.targ)} but suff starts at {tuple(suff.src)}")
        return NormalDecomposition(pref, up, cap, down, suff, S, T, A, B, a, b, K, L)

    def normalize_path_detailed(
        self, alpha: Config, beta: Config
    ) -> tuple[Path, list[tuple[Path, NormalDecomposition | None]]]:
        alpha, beta = Config(*alpha), Config(*beta)
        if alpha.counter != 0 or beta.counter != 0:
            raise PreconditionError("normalize_path needs counter value zero at both ends")
        base = self.arc_graph.min_zero_path(alpha, beta)
        if base is None:
            raise Unreachable(f"{tuple(beta)} is not reachable from {tuple(alpha)}")
        pieces = [self.normalize_arc(arc) for arc in split_arcs(base)]
        out = empty_path(alpha)
        for arc, _ in pieces:
            out = out + arc
        n = self.ocs.n
        if len(out) > 14 * n * n:
            raise InvariantError(f"normalized path of length {len(out)} exceeds 14n^2 = {14 * n * n}")
        problems = check_amortization(self.ocs, self.analysis, pieces)
        if problems:
            raise InvariantError("length accounting failed: " + "; ".join(problems))
        return out, pieces

    def normalize_path(self, alpha: Config, beta: Config) -> Path:
        return self.normalize_path_detailed(alpha, beta)[0]


def normalize_arc(ocs: Ocs, analysis: SccAnalysis, arc: Path) -> tuple[Path, NormalDecomposition | None]:
    return Normalizer(ocs, analysis).normalize_arc(arc)


def normalize_path(ocs: Ocs, alpha: Config, beta: Config) -> Path:
    """A zero-to-zero path of length at most ``14 n^2``, built arc by arc."""
    return Normalizer(ocs).normalize_path(alpha, beta)


def normalize_path_detailed(ocs: Ocs, alpha: Config, beta: Config):
    return Normalizer(ocs).normalize_path_detailed(alpha, beta)
