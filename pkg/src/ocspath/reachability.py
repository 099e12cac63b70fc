"""Exact searches over the configuration graph of a one-counter system.

Every cap used here comes from a proven length bound, so truncating the
search never loses a witness:

* any reachable pair is connected by a path of length at most
  ``14 n^2 + n * max(c_alpha, c_beta)``;
* any arc (zero-to-zero path with positive interior) can be replaced by one
  of length at most ``14 n^2``.

Configurations ``(q, c)`` are encoded as the integer ``c * n + q``.
"""

from __future__ import annotations

import heapq
import os
from collections import deque
from dataclasses import dataclass

from .core import Config, Ocs, Path
from .errors import InvariantError, PreconditionError, ResourceError

DEFAULT_MEM_BUDGET = 2**30


def memory_budget() -> int:
    """Entries allowed for one visited table (``OCSPATH_MEM_BUDGET``)."""
    raw = os.environ.get("OCSPATH_MEM_BUDGET")
    return int(raw) if raw else DEFAULT_MEM_BUDGET


@dataclass(frozen=True)
class SearchCaps:
    depth_cap: int
    counter_cap: int

    def __post_init__(self):
        if self.depth_cap < 0 or self.counter_cap < 0:
            raise ValueError("search caps must be nonnegative")


def length_bound(n: int, c_alpha: int = 0, c_beta: int = 0) -> int:
    return 14 * n * n + n * max(c_alpha, c_beta)


def default_caps(ocs: Ocs, alpha: Config, beta: Config) -> SearchCaps:
    depth = length_bound(ocs.n, alpha.counter, beta.counter)
    return SearchCaps(depth, alpha.counter + depth)


def _visited(n: int, counter_cap: int) -> bytearray:
    size = n * (counter_cap + 1)
    if size > memory_budget():
        raise ResourceError(
            f"visited bitmap of {size} bits exceeds budget {memory_budget()} (OCSPATH_MEM_BUDGET)"
        )
    return bytearray(size)


def _rebuild(ocs: Ocs, parent: dict, key: int, start: int) -> Path:
    n = ocs.n
    keys, trans = [key], []
    while key != start:
        key, ti = parent[key]
        keys.append(key)
        trans.append(ocs.transitions[ti])
    keys.reverse()
    trans.reverse()
    return Path(tuple(Config(k % n, k // n) for k in keys), tuple(trans))


def capped_shortest_path(ocs: Ocs, alpha: Config, beta: Config, caps: SearchCaps) -> Path | None:
    """Breadth-first search restricted to ``caps``; None if nothing fits."""
    alpha, beta = Config(*alpha), Config(*beta)
    for c in (alpha, beta):
        if c.counter < 0 or not 0 <= c.state < ocs.n:
            raise PreconditionError(f"invalid configuration {tuple(c)}")
    if alpha == beta:
        return Path((alpha,), ())
    if alpha.counter > caps.counter_cap or beta.counter > caps.counter_cap:
        return None
    n = ocs.n
    ccap, dcap, cb = caps.counter_cap, caps.depth_cap, beta.counter
    pos_out, zero_out = ocs.pos_out, ocs.zero_out
    seen = _visited(n, ccap)
    start = alpha.counter * n + alpha.state
    goal = beta.counter * n + beta.state
    seen[start] = 1
    parent = {}
    frontier = [start]
    depth = 0
    while frontier and depth < dcap:
        depth += 1
        slack = dcap - depth
        nxt = []
        for key in frontier:
            c, q = divmod(key, n)
            for eff, dst, ti in (pos_out[q] if c else zero_out[q]):
                c2 = c + eff
                if c2 > ccap or abs(c2 - cb) > slack:
                    continue
                k2 = c2 * n + dst
                if seen[k2]:
                    continue
                seen[k2] = 1
                parent[k2] = (key, ti)
                if k2 == goal:
                    return _rebuild(ocs, parent, goal, start)
                nxt.append(k2)
        frontier = nxt
    return None


def distances_from(ocs: Ocs, alpha: Config, caps: SearchCaps) -> dict[Config, int]:
    """Shortest distances from ``alpha`` to everything reachable within ``caps``."""
    alpha = Config(*alpha)
    n = ocs.n
    ccap, dcap = caps.counter_cap, caps.depth_cap
    if alpha.counter > ccap:
        return {}
    pos_out, zero_out = ocs.pos_out, ocs.zero_out
    seen = _visited(n, ccap)
    start = alpha.counter * n + alpha.state
    seen[start] = 1
    dist = {alpha: 0}
    frontier = [start]
    depth = 0
    while frontier and depth < dcap:
        depth += 1
        nxt = []
        for key in frontier:
            c, q = divmod(key, n)
            for eff, dst, _ in (pos_out[q] if c else zero_out[q]):
                c2 = c + eff
                if c2 > ccap:
                    continue
                k2 = c2 * n + dst
                if seen[k2]:
                    continue
                seen[k2] = 1
                dist[Config(dst, c2)] = depth
                nxt.append(k2)
        frontier = nxt
    return dist


def shortest_path(ocs: Ocs, alpha: Config, beta: Config) -> Path | None:
    """A globally shortest path from ``alpha`` to ``beta``, or None."""
    alpha, beta = Config(*alpha), Config(*beta)
    caps = default_caps(ocs, alpha, beta)
    rho = capped_shortest_path(ocs, alpha, beta, caps)
    if rho is not None and len(rho) > caps.depth_cap:
        raise InvariantError(f"shortest path of length {len(rho)} exceeds bound {caps.depth_cap}")
    return rho


def shortest_low_arc(ocs: Ocs, alpha: Config, beta: Config) -> Path | None:
    """Shortest arc whose configurations all have counter below ``5n``."""
    return _arc_search(ocs, Config(*alpha), Config(*beta), 5 * ocs.n - 1, None)


def _arc_search(ocs: Ocs, alpha: Config, beta: Config, ccap: int, dcap: int | None) -> Path | None:
    if alpha.counter != 0 or beta.counter != 0:
        raise PreconditionError("arcs start and end at counter value zero")
    if alpha == beta:
        return Path((alpha,), ())
    arcs = _arcs_from(ocs, alpha.state, ccap, dcap)
    return arcs.get(beta.state)


def _arcs_from(ocs: Ocs, p: int, ccap: int, dcap: int | None) -> dict[int, Path]:
    """Shortest arcs from ``(p, 0)`` to every reachable ``(q, 0)``."""
    n = ocs.n
    pos_out = ocs.pos_out
    seen = _visited(n, ccap)
    seen[p] = 1
    parent = {}
    last_step = {}
    frontier = []
    for eff, dst, ti in ocs.zero_out[p]:
        if eff == 0:
            last_step.setdefault(dst, (p, ti))
            continue
        k2 = n + dst
        if ccap < 1 or seen[k2]:
            continue
        seen[k2] = 1
        parent[k2] = (p, ti)
        frontier.append(k2)
    depth = 1
    limit = dcap if dcap is not None else float("inf")
    while frontier and depth < limit and len(last_step) < n:
        depth += 1
        slack = limit - depth
        nxt = []
        for key in frontier:
            c, q = divmod(key, n)
            for eff, dst, ti in pos_out[q]:
                c2 = c + eff
                if c2 == 0:
                    if dst not in last_step:
                        last_step[dst] = (key, ti)
                    continue
                if c2 > ccap or c2 > slack:
                    continue
                k2 = c2 * n + dst
                if seen[k2]:
                    continue
                seen[k2] = 1
                parent[k2] = (key, ti)
                nxt.append(k2)
        frontier = nxt
    out = {}
    for q, (key, ti) in last_step.items():
        head = _rebuild(ocs, parent, key, p)
        out[q] = Path(head.configs + (Config(q, 0),), head.transitions + (ocs.transitions[ti],))
    return out


class ArcGraph:
    """Shortest arcs between zero-counter configurations, computed lazily.

    A path minimising (intermediate zeros, length) lexicographically is a
    chain of shortest arcs, and shortest arcs are no longer than ``14 n^2``,
    so both the counter and the depth of each arc search are capped there.
    """

    def __init__(self, ocs: Ocs):
        self.ocs = ocs
        self.cap = 14 * ocs.n * ocs.n
        self._cache: dict[int, dict[int, Path]] = {}

    def arcs_from(self, p: int) -> dict[int, Path]:
        if p not in self._cache:
            self._cache[p] = _arcs_from(self.ocs, p, self.cap, self.cap)
        return self._cache[p]

    def min_zero_path(self, alpha: Config, beta: Config) -> Path | None:
        alpha, beta = Config(*alpha), Config(*beta)
        if alpha.counter != 0 or beta.counter != 0:
            raise PreconditionError("min_zero_path needs counter value zero at both ends")
        if alpha == beta:
            return Path((alpha,), ())
        best = {alpha.state: (0, 0)}
        prev: dict[int, int] = {}
        heap = [(0, 0, alpha.state)]
        done = set()
        while heap:
            arcs, length, p = heapq.heappop(heap)
            if p in done:
                continue
            done.add(p)
            if p == beta.state:
                break
            for q, arc in self.arcs_from(p).items():
                cand = (arcs + 1, length + len(arc))
                if q not in best or cand < best[q]:
                    best[q] = cand
                    prev[q] = p
                    heapq.heappush(heap, (*cand, q))
        if beta.state not in done:
            return None
        chain = [beta.state]
        while chain[-1] != alpha.state:
            chain.append(prev[chain[-1]])
        chain.reverse()
        out = Path((alpha,), ())
        for p, q in zip(chain, chain[1:]):
            out = out + self.arcs_from(p)[q]
        return out


def min_zero_path(ocs: Ocs, alpha: Config, beta: Config) -> Path | None:
    """Path with fewest intermediate zero configurations, then shortest."""
    rho = ArcGraph(ocs).min_zero_path(alpha, beta)
    if rho is not None and len(rho) > 14 * ocs.n ** 2 * (rho.zeros + 1):
        raise InvariantError("an arc of the minimal-zero path exceeds 14n^2")
    return rho


def _below_level(ocs: Ocs, q: int, a: int) -> set[int]:
    """States q' with a path ``(q, a) -> (q', a)`` whose interior stays below a."""
    n = ocs.n
    out = set()
    first = ocs.pos_out[q] if a > 0 else ocs.zero_out[q]
    frontier = []
    seen = set()
    for eff, dst, _ in first:
        if eff == 0:
            out.add(dst)
        elif eff == -1:
            key = (a - 1) * n + dst
            if key not in seen:
                seen.add(key)
                frontier.append(key)
    queue = deque(frontier)
    while queue:
        key = queue.popleft()
        c, r = divmod(key, n)
        for eff, dst, _ in (ocs.pos_out[r] if c else ocs.zero_out[r]):
            c2 = c + eff
            if c2 == a:
                out.add(dst)
                continue
            k2 = c2 * n + dst
            if k2 not in seen:
                seen.add(k2)
                queue.append(k2)
    return out


def build_lifted(ocs: Ocs, a: int) -> Ocs:
    """The lifted system whose zero level stands for level ``a`` of ``ocs``.

    Same states and non-zero transitions.  Zero tests are ``(q, 0, q')`` for
    every excursion ``(q, a) -> (q', a)`` staying strictly below ``a`` in
    between (single steps with effect 0 count), plus ``(q, +1, q')`` for
    every increment fireable at counter ``a``.
    """
    if a < 0:
        raise PreconditionError("the lifting level must be nonnegative")
    zero = set()
    for q in range(ocs.n):
        for q2 in _below_level(ocs, q, a):
            zero.add((q, 0, q2))
        for eff, dst, _ in (ocs.pos_out[q] if a > 0 else ocs.zero_out[q]):
            if eff == 1:
                zero.add((q, 1, dst))
    return Ocs(ocs.n, ocs.t_pos, tuple(zero), ocs.names)
