from __future__ import annotations

import os
import random

import pytest
from hypothesis import HealthCheck, settings

from ocspath.core import Config, Ocs, Path, Transition, fire

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.register_profile("thorough", max_examples=500, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# (criterion, title, passed, detail) rows printed after the run
ACCEPTANCE: list[tuple[int, str, bool, str]] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for num, title, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {num:2d}. {title}: {detail}")


def enabled(ocs: Ocs, gamma: Config) -> list[Transition]:
    return [t for t in ocs.transitions if t.src == gamma.state and ((t.guard == "pos") == (gamma.counter > 0))]


def random_walk(ocs: Ocs, gamma: Config, steps: int, rng: random.Random) -> Path:
    """Uniform random walk of at most ``steps`` steps, stopping when stuck."""
    configs, trans = [Config(*gamma)], []
    for _ in range(steps):
        options = enabled(ocs, configs[-1])
        if not options:
            break
        t = rng.choice(options)
        trans.append(t)
        configs.append(fire(configs[-1], t))
    return Path(tuple(configs), tuple(trans))


@pytest.fixture
def rng():
    return random.Random(20240611)


def _moves(ocs: Ocs, state: int, counter: int):
    table = ocs.t_pos if counter > 0 else ocs.t_zero
    return [(d, counter + e) for s, e, d in table if s == state]


def lifted_mismatches(ocs: Ocs, lifted: Ocs, a: int, kmax: int) -> list[tuple]:
    """Compare exact-length reachability in the lifted system with level-``a`` paths.

    For every pair (p, q) and K <= kmax: ``lifted`` has a (p,0)->(q,0) path
    of length exactly K iff ``ocs`` has a (p,a)->(q,a) path with exactly
    K + 1 configurations at counter >= a.  Returns the disagreeing
    ``(p, q, K)`` triples.
    """
    n = ocs.n
    below_cache: dict[tuple, set] = {}

    def after_dip(cfg):
        # high configurations reachable through configurations below a only
        if cfg not in below_cache:
            seen, stack, out = {cfg}, [cfg], set()
            while stack:
                for nxt in _moves(ocs, *stack.pop()):
                    if nxt[1] >= a:
                        out.add(nxt)
                    elif nxt not in seen:
                        seen.add(nxt)
                        stack.append(nxt)
            below_cache[cfg] = out
        return below_cache[cfg]

    bad = []
    for p in range(n):
        lifted_layer = {(p, 0)}
        high_layer = {(p, a)}
        for k in range(kmax + 1):
            shifted = {(q, c + a) for q, c in lifted_layer}
            for q in range(n):
                if ((q, a) in shifted) != ((q, a) in high_layer):
                    bad.append((p, q, k))
            if shifted != high_layer:
                # the correspondence holds at every level, not only at a
                bad.append((p, None, k))
            lifted_layer = {nxt for cfg in lifted_layer for nxt in _moves(lifted, *cfg)}
            nxt_high = set()
            for cfg in high_layer:
                for nxt in _moves(ocs, *cfg):
                    if nxt[1] >= a:
                        nxt_high.add(nxt)
                    else:
                        nxt_high |= after_dip(nxt)
            high_layer = nxt_high
    return bad
