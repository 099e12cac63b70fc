from __future__ import annotations

import dataclasses
import random
from math import gcd

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ocspath.core import Config, Ocs, Path, Transition, effect, fasten, is_arc, split_arcs, validate_path
from ocspath.errors import PreconditionError, ResourceError, Unreachable
from ocspath.generators import example1, example2, random_ocs, random_tower_ocs
from ocspath.normal_form import cap_cycle_violations, check_amortization, lcm, verify_normal
from ocspath.normalizer import MAX_STATES, Normalizer, choose_ab, egcd, unpump_mod_gcd
from ocspath.oracle import oracle_shortest_path
from ocspath.reachability import min_zero_path, shortest_low_arc

# --- arithmetic ---------------------------------------------------------------


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_egcd(a, b):
    g, x, y = egcd(a, b)
    assert g == gcd(a, b) and a * x + b * y == g


def _admissible(A, B, K, L, a, b):
    span = lcm(A, B)
    return a >= 0 and b >= 0 and a * A - b * B == -K and L <= a * A <= 2 * L + 2 * span and L <= b * B <= 2 * L + 2 * span


def test_choose_ab_trivial():
    assert choose_ab(1, 1, 0, 0) == (0, 0)


def test_choose_ab_small_example():
    a, b = choose_ab(4, 6, -2, 5)
    assert _admissible(4, 6, -2, 5, a, b)
    brute = {(x, y) for x in range(11) for y in range(11) if _admissible(4, 6, -2, 5, x, y)}
    assert (2, 1) in brute and (a, b) in brute


def test_choose_ab_rejects_indivisible_k():
    with pytest.raises(PreconditionError):
        choose_ab(4, 6, 3, 5)
    with pytest.raises(PreconditionError):
        choose_ab(0, 6, 0, 5)


def test_choose_ab_random_against_brute_force():
    rng = random.Random(5)
    for _ in range(2000):
        A, B = rng.randint(1, 30), rng.randint(1, 30)
        g = gcd(A, B)
        L = rng.randint(0, 200)
        top = (L + max(A, B)) // g
        K = g * rng.randint(-top, top)
        a, b = choose_ab(A, B, K, L)
        assert _admissible(A, B, K, L, a, b), (A, B, K, L, a, b)


def test_choose_ab_succeeds_whenever_a_solution_exists():
    for A in range(1, 9):
        for B in range(1, 9):
            g = gcd(A, B)
            for L in range(0, 12):
                for K in range(-20, 21, g):
                    span = lcm(A, B)
                    exists = any(
                        _admissible(A, B, K, L, x, (x * A + K) // B)
                        for x in range((2 * L + 2 * span) // A + 1)
                        if (x * A + K) % B == 0
                    )
                    if exists:
                        assert _admissible(A, B, K, L, *choose_ab(A, B, K, L))


# --- unpump_mod_gcd -----------------------------------------------------------


def _infix_clashes(sigma, g):
    keys = [(sigma[0].src, 0)] if sigma else []
    total = 0
    for t in sigma:
        total += t.eff
        keys.append((t.dst, total % g))
    return len(keys) != len(set(keys))


def _random_sequence(rng, n, length):
    succ = {v: [Transition(v, rng.choice((-1, 0, 1)), rng.randrange(n)) for _ in range(3)] for v in range(n)}
    v, seq = rng.randrange(n), []
    for _ in range(length):
        t = rng.choice(succ[v])
        seq.append(t)
        v = t.dst
    return seq


def test_unpump_without_clash_is_identity():
    seq = (Transition(0, 1, 1), Transition(1, 1, 2), Transition(2, -1, 0))
    assert unpump_mod_gcd(seq, 2) == seq


def test_unpump_forced_removal():
    seq = (Transition(0, 1, 1), Transition(1, 1, 0), Transition(0, -1, 2))
    assert unpump_mod_gcd(seq, 2) == (Transition(0, -1, 2),)
    assert unpump_mod_gcd(seq, 3) == seq


def test_unpump_rejects_inconsistent_input():
    with pytest.raises(PreconditionError):
        unpump_mod_gcd((Transition(0, 1, 1), Transition(2, 1, 0)), 2)


def test_unpump_random_sequences():
    rng = random.Random(9)
    for trial in range(100):
        n = rng.randint(1, 8)
        g = 1 + trial % 5
        seq = _random_sequence(rng, n, 300)
        out = unpump_mod_gcd(seq, g)
        assert not _infix_clashes(out, g)
        assert len(out) <= g * n
        if out:
            assert out[0].src == seq[0].src and out[-1].dst == seq[-1].dst
            assert all(out[i].dst == out[i + 1].src for i in range(len(out) - 1))
        else:
            assert seq[0].src == seq[-1].dst
        assert (effect(seq) - effect(out)) % g == 0


def test_cap_scan_finds_planted_cycle():
    cap = fasten(Config(0, 10), [Transition(0, 1, 1), Transition(1, 1, 0), Transition(0, 0, 1)])
    assert cap_cycle_violations(cap, 2) == [(0, 2)]
    assert cap_cycle_violations(cap, 3) == []


# --- single arcs --------------------------------------------------------------


def _example2_arc(k, m, rounds):
    """An arc of example2 from (p_0,0) to (s_1,0) that climbs to rounds*lcm(k, m)."""
    inst = example2(k, m)
    ocs = inst.ocs
    p = lambda i: ocs.index(f"p_{i % k}")  # noqa: E731
    q = lambda j: ocs.index(f"q_{j % m}")  # noqa: E731
    peak = rounds * k * m
    seq = [Transition(p(0), 1, p(1), "zero")]
    seq += [Transition(p(i), 1, p(i + 1)) for i in range(1, peak)]
    seq.append(Transition(p(0), 0, q(0)))
    seq += [Transition(q(j), -1, q(j + 1)) for j in range(peak - 1)]
    seq.append(Transition(q(m - 1), -1, ocs.index("s_1")))
    return ocs, fasten(inst.source, seq)


def test_low_arc_short_circuits():
    inst = example1(4)
    rho = min_zero_path(inst.ocs, inst.source, inst.target)
    out, d = Normalizer(inst.ocs).normalize_arc(rho)
    assert d is None
    assert out == shortest_low_arc(inst.ocs, inst.source, inst.target)


def test_normal_arc_of_scaled_example2():
    ocs, arc = _example2_arc(26, 25, 1)
    assert arc.max_counter == 650 >= 5 * ocs.n
    norm = Normalizer(ocs)
    out, d = norm.normalize_arc(arc)
    assert d is not None
    assert verify_normal(ocs, norm.analysis, d) == []
    assert is_arc(out) and out.src == arc.src and out.targ == arc.targ
    assert validate_path(out, ocs) == []
    assert len(out) == len(arc)  # the only arc shape there is


def test_pumped_arcs_normalize_back_down():
    ocs, arc = _example2_arc(26, 25, 3)
    norm = Normalizer(ocs)
    out, d = norm.normalize_arc(arc)
    assert verify_normal(ocs, norm.analysis, d) == []
    assert len(out) < len(arc)
    assert len(out) <= 14 * ocs.n ** 2


def test_tower_arcs_normalize_even_when_pumped():
    for seed in range(6):
        inst = random_tower_ocs(1, seed)
        norm = Normalizer(inst.ocs)
        an = norm.analysis
        base = min_zero_path(inst.ocs, inst.source, inst.target)
        for arc in split_arcs(base):
            out, d = norm.normalize_arc(arc)
            if d is None:
                continue
            assert verify_normal(inst.ocs, an, d) == []
            g = gcd(d.A, d.B)
            seq = (
                d.pref.transitions
                + an.sigma_plus[d.S] * (d.a + 2 * d.B // g)
                + d.cap.transitions
                + an.sigma_minus[d.T] * (d.b + 2 * d.A // g)
                + d.suff.transitions
            )
            big = fasten(arc.src, seq)
            assert is_arc(big) and len(big) > len(out)
            again, d2 = norm.normalize_arc(big)
            assert d2 is not None
            assert verify_normal(inst.ocs, an, d2) == []
            assert again.src == arc.src and again.targ == arc.targ
            assert len(again) <= 14 * inst.ocs.n ** 2


def test_normalize_arc_rejects_non_arcs():
    inst = example2(3, 2)
    rho = min_zero_path(inst.ocs, inst.source, inst.target)
    norm = Normalizer(inst.ocs)
    with pytest.raises(PreconditionError):
        norm.normalize_arc(rho)
    forged = Path(((0, 0), (1, 5)), ((0, 1, 1, "zero"),))
    with pytest.raises(PreconditionError):
        norm.normalize_arc(forged)


def test_non_low_input_with_a_low_alternative_returns_the_low_arc():
    # 0 -> 1 directly, or a detour climbing to 5n and back
    n = 3
    ocs = Ocs(n, [(1, -1, 1), (2, 1, 2), (2, 0, 1)], [(0, 1, 1), (0, 1, 2)])
    seq = [Transition(0, 1, 2, "zero")] + [Transition(2, 1, 2)] * 20 + [Transition(2, 0, 1)]
    seq += [Transition(1, -1, 1)] * 21
    arc = fasten(Config(0, 0), seq)
    assert is_arc(arc) and arc.max_counter >= 5 * n
    out, d = Normalizer(ocs).normalize_arc(arc)
    assert d is None and out.max_counter < 5 * n and len(out) == 2


# --- the checker itself -------------------------------------------------------


def _scaled_example2_decomposition():
    ocs, arc = _example2_arc(26, 25, 1)
    norm = Normalizer(ocs)
    return ocs, norm.analysis, norm.normalize_arc(arc)[1]


def test_verify_normal_catches_an_extra_up_cycle():
    ocs, an, d = _scaled_example2_decomposition()
    plus = an.sigma_plus[d.S]
    up = fasten(d.up.src, plus * (d.a + 1))
    bad = dataclasses.replace(d, up=up, a=d.a + 1)
    problems = verify_normal(ocs, an, bad)
    assert any(p.startswith("(iii)") or p.startswith("validity") for p in problems)


def test_verify_normal_catches_a_cycle_in_the_cap():
    ocs, an, d = _scaled_example2_decomposition()
    # splice a full positive cycle (effect 26, divisible by gcd = 1) into the cap
    plus = an.sigma_plus[d.S]
    seq = plus + d.cap.transitions
    cap = fasten(d.cap.src, seq)
    bad = dataclasses.replace(d, cap=cap, L=len(cap), K=d.K + effect(plus))
    problems = verify_normal(ocs, an, bad)
    assert any(p.startswith("(v)") for p in problems)


def test_verify_normal_catches_a_high_prefix_and_wrong_parameters():
    ocs, an, d = _scaled_example2_decomposition()
    assert any("K differs" in p for p in verify_normal(ocs, an, dataclasses.replace(d, K=d.K + 1)))
    assert any("L differs" in p for p in verify_normal(ocs, an, dataclasses.replace(d, L=d.L + 1)))
    assert any(p.startswith("(ii)") for p in verify_normal(ocs, an, dataclasses.replace(d, b=d.b + 1)))


def test_amortization_catches_too_many_normal_arcs():
    ocs, an, d = _scaled_example2_decomposition()
    arc = d.pref + d.up + d.cap + d.down + d.suff
    assert check_amortization(ocs, an, [(arc, d)], pairwise=True) == []
    problems = check_amortization(ocs, an, [(arc, d), (arc, d)], pairwise=True)
    assert any("exceed gcd" in p for p in problems)
    assert any("share a state" in p for p in problems)


# --- whole paths --------------------------------------------------------------


def test_normalize_path_example1_is_exact():
    inst = example1(5)
    rho = Normalizer(inst.ocs).normalize_path(inst.source, inst.target)
    assert len(rho) == 25 <= 14 * 100
    assert validate_path(rho, inst.ocs) == []


def test_normalize_path_trivial_and_unreachable():
    ocs = Ocs(2, [], [])
    norm = Normalizer(ocs)
    assert len(norm.normalize_path(Config(0, 0), Config(0, 0))) == 0
    with pytest.raises(Unreachable):
        norm.normalize_path(Config(0, 0), Config(1, 0))
    with pytest.raises(PreconditionError):
        norm.normalize_path(Config(0, 1), Config(1, 0))


def test_normalize_path_random_pairs():
    rng = random.Random(12)
    hits = 0
    for seed in range(120):
        n = 1 + seed % 10
        ocs = random_ocs(n, rng.choice((0.1, 0.3, 0.6)), rng.choice((0.1, 0.3, 0.6)), seed)
        norm = Normalizer(ocs)
        p, q = rng.randrange(n), rng.randrange(n)
        bound = 14 * n * n
        shortest = oracle_shortest_path(ocs, (p, 0), (q, 0), 2 * bound, 2 * bound)
        if shortest is None:
            with pytest.raises(Unreachable):
                norm.normalize_path(Config(p, 0), Config(q, 0))
            continue
        rho, pieces = norm.normalize_path_detailed(Config(p, 0), Config(q, 0))
        hits += 1
        assert validate_path(rho, ocs) == []
        assert rho.src == (p, 0) and rho.targ == (q, 0)
        assert shortest <= len(rho) <= bound
        assert rho.zeros == min_zero_path(ocs, Config(p, 0), Config(q, 0)).zeros
        assert check_amortization(ocs, norm.analysis, pieces, pairwise=True) == []
    assert hits > 40


def test_normalize_path_on_towers_builds_normal_arcs():
    normal = 0
    for seed in range(8):
        inst = random_tower_ocs(1, seed)
        norm = Normalizer(inst.ocs)
        rho, pieces = norm.normalize_path_detailed(inst.source, inst.target)
        assert validate_path(rho, inst.ocs) == []
        assert len(rho) <= 14 * inst.ocs.n ** 2
        for _, d in pieces:
            if d is not None:
                normal += 1
                assert verify_normal(inst.ocs, norm.analysis, d) == []
        assert check_amortization(inst.ocs, norm.analysis, pieces, pairwise=True) == []
    assert normal == 8


def test_too_many_states_is_a_resource_error():
    with pytest.raises(ResourceError):
        Normalizer(Ocs(MAX_STATES + 1, [], []))
