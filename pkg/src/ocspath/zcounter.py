"""One-Z-counter systems: integer counters with sign-guarded transitions.

``t_pos`` fires at positive counters, ``t_neg`` at negative ones and
``t_zero`` at zero; every class allows effects -1, 0 and +1.  The helpers
here relate such a system to ordinary one-counter systems: negation, the
signed projections O+ / O- and their augmented versions O'+ / O'-.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import NamedTuple

from .core import NEG, POS, ZERO, Ocs, Path, Transition
from .errors import InvariantError, PreconditionError, ResourceError
from .reachability import ArcGraph, memory_budget

PLUS = "plus"
MINUS = "minus"


class ZConfig(NamedTuple):
    state: int
    counter: int


def _triples(items, n, what):
    out = set()
    for item in items:
        src, eff, dst = (int(x) for x in item)
        if not (0 <= src < n and 0 <= dst < n):
            raise ValueError(f"{what} transition {(src, eff, dst)} references a state outside 0..{n - 1}")
        if eff not in (-1, 0, 1):
            raise ValueError(f"{what} transition {(src, eff, dst)} has effect outside (-1, 0, 1)")
        out.add((src, eff, dst))
    return tuple(sorted(out))


@dataclass(frozen=True)
class ZOcs:
    n: int
    t_pos: tuple = ()
    t_neg: tuple = ()
    t_zero: tuple = ()
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("a system needs at least one state")
        for attr, what in (("t_pos", "positive"), ("t_neg", "negative"), ("t_zero", "zero-test")):
            object.__setattr__(self, attr, _triples(getattr(self, attr), self.n, what))
        names = tuple(self.names) if self.names else tuple(f"q{i}" for i in range(self.n))
        if len(names) != self.n or len(set(names)) != self.n:
            raise ValueError("state names must be distinct and one per state")
        object.__setattr__(self, "names", names)

    @cached_property
    def transitions(self) -> tuple[Transition, ...]:
        return (
            tuple(Transition(s, e, d, POS) for s, e, d in self.t_pos)
            + tuple(Transition(s, e, d, NEG) for s, e, d in self.t_neg)
            + tuple(Transition(s, e, d, ZERO) for s, e, d in self.t_zero)
        )

    @cached_property
    def transition_index(self) -> dict[Transition, int]:
        return {t: i for i, t in enumerate(self.transitions)}

    @cached_property
    def out(self) -> dict[str, tuple]:
        """Per guard, per state: ``(eff, dst, transition index)``."""
        tables = {g: [[] for _ in range(self.n)] for g in (POS, NEG, ZERO)}
        for i, t in enumerate(self.transitions):
            tables[t.guard][t.src].append((t.eff, t.dst, i))
        return {g: tuple(tuple(x) for x in rows) for g, rows in tables.items()}

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(f"unknown state {name!r}") from None


def guard_of(counter: int) -> str:
    return POS if counter > 0 else NEG if counter < 0 else ZERO


def embed(ocs: Ocs) -> ZOcs:
    """The same system read with integer counters (no negative moves)."""
    return ZOcs(ocs.n, ocs.t_pos, (), ocs.t_zero, ocs.names)


def negate(z: ZOcs) -> ZOcs:
    """Swap the signs: ``(q, c, q')`` becomes ``(q, -c, q')`` and T>0 / T<0 trade places."""
    flip = lambda ts: tuple((s, -e, d) for s, e, d in ts)  # noqa: E731
    return ZOcs(z.n, flip(z.t_neg), flip(z.t_pos), flip(z.t_zero), z.names)


def negate_path(rho: Path) -> Path:
    swap = {POS: NEG, NEG: POS, ZERO: ZERO}
    return Path(
        tuple((c.state, -c.counter) for c in rho.configs),
        tuple(Transition(t.src, -t.eff, t.dst, swap[t.guard]) for t in rho.transitions),
    )


def z_validate_path(z: ZOcs, rho: Path) -> list[str]:
    problems = []
    for i, (gamma, t) in enumerate(zip(rho.configs, rho.transitions)):
        nxt = rho.configs[i + 1]
        if t not in z.transition_index:
            problems.append(f"step {i}: {t} is not a transition of the system")
        if t.src != gamma.state or t.guard != guard_of(gamma.counter):
            problems.append(f"step {i}: {t} cannot fire at {tuple(gamma)}")
        if nxt != (t.dst, gamma.counter + t.eff):
            problems.append(f"step {i}: {t} at {tuple(gamma)} does not yield {tuple(nxt)}")
    return problems


def signed_projection(z: ZOcs, sign: str) -> Ocs:
    """O+ keeps T>0 and the zero tests that do not decrement; O- is O+ of the negation."""
    if sign == MINUS:
        return signed_projection(negate(z), PLUS)
    if sign != PLUS:
        raise PreconditionError(f"sign must be {PLUS!r} or {MINUS!r}")
    return Ocs(z.n, z.t_pos, [t for t in z.t_zero if t[1] >= 0], z.names)


def augmented(z: ZOcs, sign: str) -> Ocs:
    """O'+ adds ``(q, 0, q')`` whenever z has a path (q, 0) -> (q', 0) with a negative interior.

    Such excursions are exactly the arcs of O- (through the negation), and an
    arc that exists has one of length at most 14 n^2, so the capped arc search
    of :class:`ArcGraph` decides them exactly.
    """
    if sign == MINUS:
        return augmented(negate(z), PLUS)
    base = signed_projection(z, PLUS)
    graph = ArcGraph(signed_projection(z, MINUS))
    extra = set()
    for q in range(z.n):
        for q2, arc in graph.arcs_from(q).items():
            if len(arc) >= 2:
                extra.add((q, 0, q2))
    return Ocs(z.n, base.t_pos, set(base.t_zero) | extra, z.names)


def z_bound(n: int, c_alpha: int, c_beta: int) -> int:
    return 56 * n * n + n * (abs(c_alpha) + abs(c_beta))


def z_shortest_path(z: ZOcs, alpha: ZConfig, beta: ZConfig) -> Path | None:
    """Breadth-first search over counters in ``[c_alpha - D, c_alpha + D]``, depth <= D."""
    alpha, beta = ZConfig(*alpha), ZConfig(*beta)
    for c in (alpha, beta):
        if not 0 <= c.state < z.n:
            raise PreconditionError(f"invalid configuration {tuple(c)}")
    if alpha == beta:
        return Path((alpha,), ())
    n = z.n
    D = z_bound(n, alpha.counter, beta.counter)
    low = alpha.counter - D
    width = 2 * D + 1
    if n * width > memory_budget():
        raise ResourceError(f"visited bitmap of {n * width} bits exceeds budget (OCSPATH_MEM_BUDGET)")
    seen = bytearray(n * width)
    out = z.out
    start = (alpha.counter - low) * n + alpha.state
    goal = (beta.counter - low) * n + beta.state
    if not 0 <= goal < n * width:
        return None
    seen[start] = 1
    parent = {}
    frontier = [start]
    depth = 0
    while frontier and depth < D:
        depth += 1
        slack = D - depth
        nxt = []
        for key in frontier:
            off, q = divmod(key, n)
            c = off + low
            for eff, dst, ti in out[guard_of(c)][q]:
                c2 = c + eff
                if abs(c2 - beta.counter) > slack or not 0 <= c2 - low < width:
                    continue
                k2 = (c2 - low) * n + dst
                if seen[k2]:
                    continue
                seen[k2] = 1
                parent[k2] = (key, ti)
                if k2 == goal:
                    rho = _rebuild(z, parent, goal, start, low)
                    if len(rho) > D:
                        raise InvariantError(f"path of length {len(rho)} exceeds {D}")
                    return rho
                nxt.append(k2)
        frontier = nxt
    return None


def _rebuild(z: ZOcs, parent: dict, key: int, start: int, low: int) -> Path:
    n = z.n
    keys, trans = [key], []
    while key != start:
        key, ti = parent[key]
        keys.append(key)
        trans.append(z.transitions[ti])
    keys.reverse()
    trans.reverse()
    return Path(tuple(ZConfig(k % n, k // n + low) for k in keys), tuple(trans))
