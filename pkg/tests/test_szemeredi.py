"""Cyclic-group harness: pattern sets, solutions, progressions, measures."""

from __future__ import annotations

import random
from fractions import Fraction
from itertools import product

import numpy as np
import pytest

from amalgam.budget import BudgetExceeded
from amalgam.szemeredi import (
    CubeSet,
    CyclicInstance,
    build_E,
    extract_progression,
    fubini_counting_check,
    is_solution,
    lemma26_checks,
    projection_inequalities,
    solve_amalgamation,
    survey_solutions,
    verify_main_hypotheses,
)

INST7 = CyclicInstance.of(7, 3, {0, 1, 2})
E7 = build_E(INST7)


# ---------------------------------------------------------------------------
# instance and cube plumbing


def test_instance_validation():
    with pytest.raises(ValueError):
        CyclicInstance.of(1, 3, {0})
    with pytest.raises(ValueError):
        CyclicInstance.of(7, 2, {0})
    with pytest.raises(ValueError):
        CyclicInstance.of(7, 3, {7})
    assert INST7.is_prime
    assert not CyclicInstance.of(6, 3, {0}).is_prime


def test_cube_codes_are_lexicographic():
    cube = CubeSet.from_tuples(5, 3, [(4, 0, 1), (0, 2, 3), (0, 2, 1)])
    assert cube.to_list() == [(0, 2, 1), (0, 2, 3), (4, 0, 1)]
    assert (0, 2, 3) in cube and (1, 2, 3) not in cube
    assert cube.decode(cube.encode((4, 0, 1))) == (4, 0, 1)
    with pytest.raises(ValueError):
        cube.encode((5, 0, 0))
    with pytest.raises(ValueError):
        CubeSet(5, 3, [125])


def test_cube_budget():
    with pytest.raises(BudgetExceeded):
        CubeSet.full(101, 4)  # 104 million tuples over the default cap
    assert len(CubeSet.full(2, 3)) == 8


# ---------------------------------------------------------------------------
# the worked instance: modulus 7, length 3, members {0,1,2}


def test_pattern_set_worked_example():
    assert len(E7) == 21
    assert (1, 0, 1) in E7  # weighted sum 1*1 + 2*0 = 1 is a member
    assert (0, 0, 1) not in E7  # last coordinate must equal the plain sum
    for t0, t1, t2 in E7.iter_tuples():
        assert (t0 + t1) % 7 == t2
        assert (1 * t0 + 2 * t1) % 7 in INST7.members


def test_main_hypotheses_worked_example():
    report = verify_main_hypotheses(INST7, E7, samples=25, seed=0)
    assert report.projection_measure == Fraction(3, 7)
    assert report.positive
    assert report.fibre_bound == 1
    assert report.injective
    assert report.c_constant == 1
    assert report.max_ratio <= 1
    assert report.prime_modulus
    assert report.all_hold


def test_solutions_worked_example():
    sols = solve_amalgamation(INST7, E7)
    total, valid, nondeg = survey_solutions(INST7, sols)
    assert (total, valid, nondeg) == (35, 35, 14)
    assert (0, 0, 1) in sols  # a solution that is not itself a pattern tuple


def test_progression_extraction():
    prog = extract_progression(INST7, (0, 0, 1))
    assert (prog.start, prog.step) == (0, 1)
    assert prog.terms == (0, 1, 2)
    assert prog.nondegenerate and prog.valid

    flat = extract_progression(INST7, (1, 0, 1))
    assert flat.step == 0 and not flat.nondegenerate
    assert flat.terms == (1, 1, 1) and flat.valid

    with pytest.raises(ValueError):
        extract_progression(INST7, (0, 0))


def test_every_solution_encodes_a_progression_in_the_set():
    sols = solve_amalgamation(INST7, E7)
    for tup in sols.iter_tuples():
        prog = extract_progression(INST7, tup)
        assert prog.valid
        assert all(t in INST7.members for t in prog.terms)


def test_solver_matches_direct_check_exhaustively():
    sols = solve_amalgamation(INST7, E7)
    for tup in product(range(7), repeat=3):
        assert is_solution(INST7, E7, tup) == (tup in sols)


def test_solver_matches_direct_check_random_instance():
    rng = random.Random(50)
    for _ in range(3):
        members = {a for a in range(5) if rng.random() < 0.5}
        inst = CyclicInstance.of(5, 3, members)
        e_set = build_E(inst)
        sols = solve_amalgamation(inst, e_set)
        for tup in product(range(5), repeat=3):
            assert is_solution(inst, e_set, tup) == (tup in sols)


def test_full_cube_fibres_and_solutions():
    inst = CyclicInstance.of(2, 3, {0, 1})
    cube = CubeSet.full(2, 3)
    report = verify_main_hypotheses(inst, cube, samples=10, seed=1)
    assert report.fibre_bound == 2  # every drop-one fibre has both points
    assert not report.injective
    assert report.c_constant == 2
    assert report.all_hold
    sols = solve_amalgamation(inst, cube)
    assert len(sols) == 8  # every tuple of the full cube is a solution


def test_translation_covariance():
    shift = 3
    shifted = CyclicInstance.of(7, 3, {(a + shift) % 7 for a in INST7.members})
    direct = build_E(shifted)
    # shifting both the first and last coordinate by s moves the weighted sum
    # and the plain sum together
    moved = E7.translate((shift, 0, shift))
    assert np.array_equal(direct.codes, moved.codes)


# ---------------------------------------------------------------------------
# exact projection-measure inequalities


def test_projection_inequalities_trivial_equalities():
    space = np.arange(49, dtype=np.int64)
    checks = projection_inequalities(
        INST7,
        E7.codes,
        drop_index=0,
        k=1,
        c_codes=np.empty(0, dtype=np.int64),
        b_codes=space,
    )
    named = {c.name: c for c in checks}
    assert named["projection_comparison"].lhs == named["projection_comparison"].rhs
    assert named["removal_lower_bound"].lhs == named["removal_lower_bound"].rhs
    assert named["restriction_lower_bound"].lhs == named["restriction_lower_bound"].rhs
    assert all(c.holds for c in checks)


def test_lemma26_sampled_checks_hold():
    report = lemma26_checks(INST7, E7, samples=100, seed=0)
    assert report.samples == 100
    assert report.k == 1
    assert report.checks_run == 300
    assert report.violations == ()
    assert report.all_hold

    other = lemma26_checks(INST7, E7, samples=50, seed=99)
    assert other.all_hold and other.checks_run == 150


def test_lemma26_on_full_cube():
    inst = CyclicInstance.of(3, 3, {0, 1, 2})
    report = lemma26_checks(inst, CubeSet.full(3, 3), samples=40, seed=2)
    assert report.k == 3
    assert report.all_hold


# ---------------------------------------------------------------------------
# counting-measure consistency


def test_fubini_random_subsets():
    rng = np.random.default_rng(51)
    space = 7**3
    for _ in range(100):
        codes = np.flatnonzero(rng.random(space) < rng.uniform(0.05, 0.6))
        keep = [j for j in range(3) if rng.random() < 0.5]
        check = fubini_counting_check(7, 3, codes, keep)
        assert check.holds
        assert check.direct == Fraction(int(codes.size), space)


def test_fubini_edge_splits():
    codes = np.arange(10, dtype=np.int64)
    assert fubini_counting_check(7, 3, codes, ()).holds
    assert fubini_counting_check(7, 3, codes, (0, 1, 2)).holds
    with pytest.raises(ValueError):
        fubini_counting_check(7, 3, codes, (0, 0))
    with pytest.raises(ValueError):
        fubini_counting_check(7, 3, codes, (3,))


def test_build_e_budget():
    with pytest.raises(BudgetExceeded):
        build_E(CyclicInstance.of(101, 5, {0}))  # 104 million prefixes
    inst = CyclicInstance.of(101, 4, {0, 1})
    with pytest.raises(BudgetExceeded):
        solve_amalgamation(inst, build_E(inst))  # solutions need 101^4
    assert len(build_E(inst)) > 0  # prefix space 101^3 fits the default cap
