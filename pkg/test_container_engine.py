#!/usr/bin/env python3
"""
Container Engine Test - structural guarantees, accounting and determinism
"""

from fractions import Fraction

import numpy as np
import pytest

from container_engine import (ContainerOutput, container_census, container_count_bound,
                              middle_antichain_family, phase_one_heavy, phase_two_heavy,
                              random_vee_free_family, run_container, verify_container)
from embedding_engine import find_induced_vee
from errors import BadParam, GroundTooLarge, InvariantViolation, NotVeeFree, TooLarge
from subset_lattice import SetFamily, level_family

EPS = Fraction(1, 8)
WIDE = Fraction(1, 2)


def check_run(F, t, r, eps):
    out = run_container(F, t, r, eps)
    report = verify_container(out, F, t, r, eps)
    assert report.structural and report.accounting and report.termination
    assert not len(out.H1.intersection(out.H2))
    assert out.H2.issubfamily(out.f_H1)
    assert F.issubfamily(out.H1.union(out.H2).union(out.g_H1H2))
    return out


def test_thresholds():
    assert phase_one_heavy(60, 8, 1)
    assert not phase_one_heavy(40, 8, 1)
    assert phase_two_heavy(1, 8, 1, EPS)
    assert phase_two_heavy(2, 4, 1, Fraction(1, 2))
    assert not phase_two_heavy(1, 4, 1, Fraction(1, 2))


def test_middle_level_run():
    F = level_family(8, [4])
    out = check_run(F, 1, 1, EPS)
    assert len(out.H1) == 0
    assert out.H2 == F
    assert len(out.g_H1H2) == 0
    assert out.exhausted
    assert out.phase_boundary == 2
    # only the empty set (weight 70 > 8^1.9) is heavy; the singleton {0} ends Phase I
    assert out.f_H1 == level_family(8, range(1, 9))
    assert not out.eps_warning


def test_phase_one_ends_on_the_first_light_pick():
    out = run_container(level_family(8, [4]), 1, 1, EPS)
    branches = [entry.branch for entry in out.trace]
    first_end = branches.index("end")
    assert branches[:first_end] == ["skip"]
    assert out.trace[first_end].code == 1
    assert out.trace[first_end].phase == 1
    assert out.trace[first_end + 1].phase == 2
    assert out.trace[first_end + 1].code == out.trace[first_end].code


def test_empty_family_ends_phase_one_then_is_exhausted():
    out = check_run(SetFamily.empty(4), 1, 1, EPS)
    assert [entry.branch for entry in out.trace] == ["end", "exhausted"]
    assert out.exhausted
    assert out.f_H1 == SetFamily.full(4)
    assert len(out.H1) == len(out.H2) == len(out.g_H1H2) == 0


def test_same_h1_gives_the_same_f():
    # ∅ and {[n]} share H1 = ∅; Phase I ends on the first light pick for both
    empty = run_container(SetFamily.empty(4), 1, 1, EPS)
    top = run_container(SetFamily.from_codes(4, [15]), 1, 1, EPS)
    assert empty.H1 == top.H1
    assert empty.f_H1 == top.f_H1

    # the two families differ only in a set outside H1
    one = run_container(SetFamily.from_codes(8, [0b11110000]), 1, 1, EPS)
    two = run_container(SetFamily.from_codes(8, [0b00001111, 0b11110000]), 1, 1, EPS)
    assert one.H1 == two.H1
    assert one.f_H1 == two.f_H1


@pytest.mark.parametrize("r", [1, 2, 3])
def test_dropping_members_outside_h1_keeps_f(r):
    rng = np.random.default_rng(40 + r)
    for _ in range(4):
        F = random_vee_free_family(8, r, rng, levels=[0, 1, 4, 5])
        out = run_container(F, 1, r, WIDE)
        assert out.phase_boundary is not None
        spare = F.difference(out.H1).codes
        dropped = spare[rng.random(len(spare)) < 0.5]
        smaller = run_container(F.without_codes(dropped), 1, r, WIDE)
        assert smaller.H1 == out.H1
        assert smaller.f_H1 == out.f_H1
        if not len(out.g_H1H2):
            continue
        # dropping only members that ended in g keeps H2 and g as well
        inside_g = F.intersection(out.g_H1H2)
        kept = run_container(F.difference(inside_g), 1, r, WIDE)
        assert (kept.H1, kept.H2) == (out.H1, out.H2)
        assert kept.g_H1H2 == out.g_H1H2


def test_trace_weights_follow_the_phase_thresholds():
    n, t, r = 8, 1, 2
    F = random_vee_free_family(n, r, np.random.default_rng(9), levels=[0, 4, 5])
    out = run_container(F, t, r, EPS)
    picked = [entry for entry in out.trace if entry.code is not None]
    weights = [entry.weight for entry in picked]
    assert weights == sorted(weights, reverse=True)
    for entry in picked:
        heavy = (phase_one_heavy(entry.weight, n, t) if entry.phase == 1
                 else phase_two_heavy(entry.weight, n, t, EPS))
        assert heavy == (entry.branch != "end")
    assert [entry.branch for entry in picked].count("end") >= 1


@pytest.mark.parametrize("r", [1, 2, 3])
@pytest.mark.parametrize("seed", range(4))
def test_structural_suite_at_eight(seed, r):
    rng = np.random.default_rng(100 * r + seed)
    F = random_vee_free_family(8, r, rng)
    assert find_induced_vee(F, r + 1) is None
    first = check_run(F, 1, r, EPS)
    again = run_container(F, 1, r, EPS)
    assert first.fingerprint() == again.fingerprint()
    assert first.g_H1H2 == again.g_H1H2
    assert first.to_json() == again.to_json()


@pytest.mark.slow
@pytest.mark.parametrize("n", [8, 10, 12])
@pytest.mark.parametrize("r", [1, 2, 3])
def test_structural_suite_two_hundred_families(n, r):
    rng = np.random.default_rng(n * 10 + r)
    for _ in range(200):
        F = random_vee_free_family(n, r, rng)
        out = check_run(F, 1, r, EPS)
        assert run_container(F, 1, r, EPS).fingerprint() == out.fingerprint()


def test_large_eps_runs_with_warning():
    F = middle_antichain_family(8, np.random.default_rng(1))
    out = check_run(F, 2, 1, EPS)
    assert out.eps_warning


def test_input_validation():
    with pytest.raises(NotVeeFree) as caught:
        run_container(SetFamily.full(3), 1, 1, EPS)
    assert caught.value.bottom == 0
    with pytest.raises(BadParam):
        run_container(level_family(4, [2]), 0, 1, EPS)
    with pytest.raises(BadParam):
        run_container(level_family(4, [2]), 1, 1, Fraction(0))
    with pytest.raises(GroundTooLarge):
        run_container(SetFamily.empty(17), 1, 1, EPS)


def test_verify_catches_tampering():
    F = level_family(8, [4])
    data = run_container(F, 1, 1, EPS).to_json()
    data["H2"]["codes"] = data["H2"]["codes"][1:]
    with pytest.raises(InvariantViolation):
        verify_container(ContainerOutput.from_json(data), F, 1, 1, EPS)

    data = run_container(F, 1, 1, EPS).to_json()
    data["f_H1"]["codes"] = []
    with pytest.raises(InvariantViolation):
        verify_container(ContainerOutput.from_json(data), F, 1, 1, EPS)


def test_output_json_restores_the_fingerprint():
    F = random_vee_free_family(8, 2, np.random.default_rng(5))
    out = run_container(F, 1, 2, EPS)
    restored = ContainerOutput.from_json(out.to_json())
    assert restored.fingerprint() == out.fingerprint()
    assert restored.eps == EPS
    verify_container(restored, F, 1, 2, EPS)


def test_census():
    table = container_census(8, 1, 1, EPS, "greedy", trials=3, seed=1)
    assert len(table) == 3
    assert 1 <= table.attrs["distinct_containers"] <= 3
    assert table.attrs["fingerprint_bits"] == 8 * table.attrs["max_H1_H2"]
    with pytest.raises(TooLarge):
        container_census(13, 1, 1, EPS)
    with pytest.raises(BadParam):
        container_census(8, 1, 1, EPS, "spiral")


def test_count_bound():
    bound = container_count_bound(10, 1, EPS)
    assert bound.fingerprint_size <= 1 << 10
    assert bound.exponent > 0
