"""One-counter automata: a labelled OCS with initial and final states.

A word is accepted when it labels a path from some ``(i, 0)``, ``i`` initial,
to any configuration whose state is final.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from .core import Config, Ocs, Path
from .errors import InvariantError


@dataclass(frozen=True)
class Oca:
    """``labels[i]`` labels ``ocs.transitions[i]``; None stands for epsilon."""

    ocs: Ocs
    labels: tuple
    alphabet: tuple = ()
    initial: frozenset = frozenset()
    final: frozenset = frozenset()

    def __post_init__(self):
        labels = tuple(self.labels)
        if len(labels) != len(self.ocs.transitions):
            raise ValueError("one label per transition is required")
        alphabet = tuple(self.alphabet) or tuple(sorted({x for x in labels if x is not None}))
        for x in labels:
            if x is not None and x not in alphabet:
                raise ValueError(f"label {x!r} is not in the alphabet")
        for s in (*self.initial, *self.final):
            if not 0 <= s < self.ocs.n:
                raise ValueError(f"state {s} is outside 0..{self.ocs.n - 1}")
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "initial", frozenset(self.initial))
        object.__setattr__(self, "final", frozenset(self.final))

    def label_of(self, rho: Path) -> tuple:
        idx = self.ocs.transition_index
        return tuple(x for x in (self.labels[idx[t]] for t in rho.transitions) if x is not None)


@dataclass(frozen=True)
class WordResult:
    word: tuple
    path: Path


def _search(oca: Oca, counter_cap: int):
    """0-1 BFS from ``I x {0}``: letters cost 1, epsilon moves cost 0.

    Returns ``(result, pruned)`` where ``pruned`` is the smallest cost at
    which an edge was cut by the counter cap (None if never).
    """
    ocs = oca.ocs
    n = ocs.n
    labels = oca.labels
    dist: dict[int, int] = {}
    parent: dict[int, tuple[int, int]] = {}
    dq = deque()
    for i in sorted(oca.initial):
        dist[i] = 0
        dq.append(i)
    done = set()
    pruned = None
    while dq:
        key = dq.popleft()
        if key in done:
            continue
        done.add(key)
        d = dist[key]
        c, q = divmod(key, n)
        if q in oca.final:
            return (d, key, parent), pruned
        for eff, dst, ti in (ocs.pos_out[q] if c else ocs.zero_out[q]):
            c2 = c + eff
            cost = d + (labels[ti] is not None)
            if c2 > counter_cap:
                if pruned is None or cost < pruned:
                    pruned = cost
                continue
            k2 = c2 * n + dst
            if k2 in done or dist.get(k2, cost + 1) <= cost:
                continue
            dist[k2] = cost
            parent[k2] = (key, ti)
            if cost == d:
                dq.appendleft(k2)
            else:
                dq.append(k2)
    return None, pruned


def shortest_word(oca: Oca) -> WordResult | None:
    """A shortest accepted word with a path witnessing it, or None.

    A first search caps counters at ``14 n^2``.  It is already exact when no
    edge was cut below the cost it found.  Otherwise a second search runs
    with the cap ``14 (n (w + 1))^2``, w the first answer: a shortest word of
    length w' <= w labels a path of the product with a letter counter
    ``0..w'``, and the quadratic bound on that product keeps its counters
    under the cap.
    """
    n = oca.ocs.n
    bound = 14 * n * n
    found, pruned = _search(oca, bound)
    if found is None:
        # a nonempty language has a witness of length (so counter) <= 14 n^2
        return None
    if pruned is not None and pruned < found[0]:
        found, _ = _search(oca, 14 * (n * (found[0] + 1)) ** 2)
    d, key, parent = found
    if d > bound:
        raise InvariantError(f"shortest word of length {d} exceeds 14n^2 = {bound}")
    path = _rebuild(oca.ocs, parent, key)
    word = oca.label_of(path)
    if len(word) != d:
        raise InvariantError("reconstructed path does not carry the shortest word")
    return WordResult(word, path)


def _rebuild(ocs: Ocs, parent: dict, key: int) -> Path:
    n = ocs.n
    keys, trans = [key], []
    while key in parent:
        key, ti = parent[key]
        keys.append(key)
        trans.append(ocs.transitions[ti])
    keys.reverse()
    trans.reverse()
    return Path(tuple(Config(k % n, k // n) for k in keys), tuple(trans))
