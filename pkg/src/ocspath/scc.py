"""Strongly connected components of the transition multigraph.

The multigraph has one edge per non-zero transition; zero tests are ignored.
For every SCC containing a positive (negative) cycle we fix one simple
positive (negative) cycle once and for all, so that every normalized arc pumps
with the very same cycle.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Ocs, Transition
from .errors import PreconditionError


def tarjan_scc(n: int, succ) -> list[list[int]]:
    """Iterative Tarjan over vertices ``0..n-1``; ``succ[v]`` lists successors.

    Components come out in reverse topological order.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack: list[int] = []
    comps: list[list[int]] = []
    counter = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, i = work[-1]
            if i < len(succ[v]):
                work[-1] = (v, i + 1)
                w = succ[v][i]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
    return comps


def _best_cycle(vertices: list[int], edges: list[Transition], sign: int) -> tuple[Transition, ...] | None:
    # Longest-path relaxation on weights sign*eff from a virtual source.  A
    # relaxation in round |S| means a cycle of positive weight exists, and the
    # predecessor graph then holds a simple one.
    if not edges:
        return None
    dist = {v: 0 for v in vertices}
    pred: dict[int, Transition] = {}
    last = None
    for _ in range(len(vertices)):
        last = None
        for t in edges:
            w = dist[t.src] + sign * t.eff
            if w > dist[t.dst]:
                dist[t.dst] = w
                pred[t.dst] = t
                last = t.dst
        if last is None:
            return None
    x = last
    for _ in range(len(vertices)):
        x = pred[x].src
    cycle = []
    cur = x
    while True:
        t = pred[cur]
        cycle.append(t)
        cur = t.src
        if cur == x:
            break
    cycle.reverse()
    base = min(t.src for t in cycle)
    k = next(i for i, t in enumerate(cycle) if t.src == base)
    return tuple(cycle[k:] + cycle[:k])


@dataclass(frozen=True)
class SccAnalysis:
    """SCC partition plus the distinguished simple cycles per component.

    SCC ids are numbered by the smallest state they contain.
    """

    ocs: Ocs
    component_of: tuple[int, ...]
    members: tuple[tuple[int, ...], ...]
    sigma_plus: dict
    sigma_minus: dict

    @property
    def n_S(self) -> dict[int, int]:
        return {s: len(m) for s, m in enumerate(self.members)}

    @property
    def count(self) -> int:
        return len(self.members)

    def pos_enabled(self, s: int) -> bool:
        return s in self.sigma_plus

    def neg_enabled(self, s: int) -> bool:
        return s in self.sigma_minus

    def base_plus(self, s: int) -> int:
        return self.sigma_plus[s][0].src

    def base_minus(self, s: int) -> int:
        return self.sigma_minus[s][0].src

    def A(self, s: int) -> int:
        return sum(t.eff for t in self.sigma_plus[s])

    def B(self, s: int) -> int:
        return -sum(t.eff for t in self.sigma_minus[s])

    def internal_edges(self, s: int) -> list[Transition]:
        comp = self.component_of
        return [
            Transition(*t)
            for t in self.ocs.transitions
            if t.guard == "pos" and comp[t.src] == s and comp[t.dst] == s
        ]


def analyze(ocs: Ocs) -> SccAnalysis:
    succ = [[] for _ in range(ocs.n)]
    for s, _, d in ocs.t_pos:
        if d not in succ[s]:
            succ[s].append(d)
    comps = sorted(tarjan_scc(ocs.n, succ), key=lambda c: c[0])
    component_of = [0] * ocs.n
    for sid, comp in enumerate(comps):
        for v in comp:
            component_of[v] = sid
    internal: dict[int, list[Transition]] = {sid: [] for sid in range(len(comps))}
    for t in ocs.transitions:
        if t.guard == "pos" and component_of[t.src] == component_of[t.dst]:
            internal[component_of[t.src]].append(t)
    plus, minus = {}, {}
    for sid, comp in enumerate(comps):
        cyc = _best_cycle(comp, internal[sid], +1)
        if cyc is not None:
            plus[sid] = cyc
        cyc = _best_cycle(comp, internal[sid], -1)
        if cyc is not None:
            minus[sid] = cyc
    return SccAnalysis(ocs, tuple(component_of), tuple(tuple(c) for c in comps), plus, minus)


def connective(analysis: SccAnalysis, s: int, p: int, q: int) -> tuple[Transition, ...]:
    """Shortest sequence of non-zero transitions inside SCC ``s`` from p to q.

    Visits pairwise distinct states, so it is shorter than the SCC and every
    prefix has effect above ``-n_S``.
    """
    comp = analysis.component_of
    if comp[p] != s or comp[q] != s:
        raise PreconditionError(f"states {p} and {q} are not both in SCC {s}")
    if p == q:
        return ()
    ocs = analysis.ocs
    parent: dict[int, Transition] = {p: None}
    queue = deque([p])
    while queue:
        v = queue.popleft()
        for eff, dst, ti in ocs.pos_out[v]:
            if comp[dst] != s or dst in parent:
                continue
            parent[dst] = ocs.transitions[ti]
            if dst == q:
                seq = []
                while dst != p:
                    t = parent[dst]
                    seq.append(t)
                    dst = t.src
                return tuple(reversed(seq))
            queue.append(dst)
    raise AssertionError("states of one SCC must be mutually reachable")
