"""Brute-force reference solvers.

Deliberately naive and self-contained: configurations are plain tuples,
transitions are scanned from the raw triple sets, and nothing is imported
from the search or normalization modules.  Every answer is exact within the
caps it is given.
"""

from __future__ import annotations

import heapq


def _moves(ocs, state, counter):
    if counter > 0:
        for src, eff, dst in ocs.t_pos:
            if src == state:
                yield dst, counter + eff
    else:
        for src, eff, dst in ocs.t_zero:
            if src == state:
                yield dst, counter + eff


def oracle_distances(ocs, alpha, counter_cap: int, depth_cap: int) -> dict:
    """Minimal length to every configuration reachable within the caps."""
    alpha = tuple(alpha)
    dist = {alpha: 0}
    layer = [alpha]
    for depth in range(1, depth_cap + 1):
        nxt = []
        for state, counter in layer:
            for cfg in _moves(ocs, state, counter):
                if cfg[1] <= counter_cap and cfg not in dist:
                    dist[cfg] = depth
                    nxt.append(cfg)
        if not nxt:
            break
        layer = nxt
    return dist


def oracle_shortest_path(ocs, alpha, beta, counter_cap: int, depth_cap: int) -> int | None:
    """Length of a shortest path within the caps, or None."""
    return oracle_distances(ocs, alpha, counter_cap, depth_cap).get(tuple(beta))


def oracle_min_zero(ocs, alpha, beta, counter_cap: int) -> tuple[int, int] | None:
    """Least ``(intermediate zeros, length)`` over paths with counters <= cap.

    Dijkstra on pair costs; entering a configuration with counter 0 costs
    one zero, and the target's own zero is discounted at the end.
    """
    alpha, beta = tuple(alpha), tuple(beta)
    if alpha[1] != 0 or beta[1] != 0:
        raise ValueError("oracle_min_zero needs counter value zero at both ends")
    if alpha == beta:
        return (0, 0)
    best = {alpha: (0, 0)}
    heap = [(0, 0, alpha)]
    while heap:
        zeros, length, cfg = heapq.heappop(heap)
        if best.get(cfg) != (zeros, length):
            continue
        if cfg == beta:
            return (zeros - 1, length)
        for nxt in _moves(ocs, *cfg):
            if nxt[1] > counter_cap:
                continue
            cost = (zeros + (nxt[1] == 0), length + 1)
            if nxt not in best or cost < best[nxt]:
                best[nxt] = cost
                heapq.heappush(heap, (*cost, nxt))
    return None


def oracle_min_word(oca, max_len: int, counter_cap: int) -> int | None:
    """Shortest accepted word of length <= max_len, by layered closure.

    Layer j holds every configuration reachable with exactly j letters read
    (counters capped); a layer is closed under epsilon moves before letters
    are read from it.
    """
    ocs = oca.ocs
    labels = {}
    for t, lab in zip(ocs.transitions, oca.labels):
        labels[(t.src, t.eff, t.dst, t.guard)] = lab

    def closure(front):
        seen = set(front)
        stack = list(front)
        while stack:
            state, counter = stack.pop()
            guard = "pos" if counter > 0 else "zero"
            table = ocs.t_pos if counter > 0 else ocs.t_zero
            for src, eff, dst in table:
                if src != state or labels[(src, eff, dst, guard)] is not None:
                    continue
                cfg = (dst, counter + eff)
                if cfg[1] <= counter_cap and cfg not in seen:
                    seen.add(cfg)
                    stack.append(cfg)
        return seen

    layer = closure({(i, 0) for i in oca.initial})
    for j in range(max_len + 1):
        if any(state in oca.final for state, _ in layer):
            return j
        if j == max_len:
            break
        nxt = set()
        for state, counter in layer:
            guard = "pos" if counter > 0 else "zero"
            table = ocs.t_pos if counter > 0 else ocs.t_zero
            for src, eff, dst in table:
                if src == state and labels[(src, eff, dst, guard)] is not None:
                    if counter + eff <= counter_cap:
                        nxt.add((dst, counter + eff))
        if not nxt:
            return None
        layer = closure(nxt)
    return None


def oracle_z_distances(z, alpha, counter_bound: int, depth_cap: int) -> dict:
    """Z-counter analogue of :func:`oracle_distances`; ``|counter| <= bound``."""
    alpha = tuple(alpha)
    dist = {alpha: 0}
    layer = [alpha]
    for depth in range(1, depth_cap + 1):
        nxt = []
        for state, counter in layer:
            table = z.t_pos if counter > 0 else z.t_neg if counter < 0 else z.t_zero
            for src, eff, dst in table:
                if src != state:
                    continue
                cfg = (dst, counter + eff)
                if abs(cfg[1]) <= counter_bound and cfg not in dist:
                    dist[cfg] = depth
                    nxt.append(cfg)
        if not nxt:
            break
        layer = nxt
    return dist


def oracle_remove_repeats(configs: list) -> list[int]:
    """Indices kept by excising one loop at a time, leftmost first, to a fixpoint."""
    idx = list(range(len(configs)))
    while True:
        cut = None
        for i in range(len(idx)):
            for j in range(len(idx) - 1, i, -1):
                if configs[idx[i]] == configs[idx[j]]:
                    cut = (i, j)
                    break
            if cut:
                break
        if cut is None:
            return idx
        i, j = cut
        idx = idx[: i + 1] + idx[j + 1 :]


def oracle_simple_cycle_signs(n: int, edges) -> tuple[bool, bool]:
    """Whether some simple cycle over ``(src, eff, dst)`` edges is positive / negative.

    Exhaustive DFS over simple paths; only for small graphs.
    """
    out = {}
    for s, e, d in edges:
        out.setdefault(s, []).append((e, d))
    pos = neg = False

    def dfs(start, v, total, visited):
        nonlocal pos, neg
        for e, d in out.get(v, ()):
            if pos and neg:
                return
            if d == start:
                pos |= total + e > 0
                neg |= total + e < 0
            elif d > start and d not in visited:
                visited.add(d)
                dfs(start, d, total + e, visited)
                visited.discard(d)

    for start in range(n):
        dfs(start, start, 0, {start})
    return pos, neg
