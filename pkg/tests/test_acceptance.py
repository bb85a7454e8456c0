"""Acceptance gate: one test per exit criterion, at full sample counts.

Each test prints a PASS/FAIL line so a plain pytest run doubles as the
acceptance record.
"""

import pytest

from grassmoment import acceptance

SEED = acceptance.DEFAULT_SEED
SAMPLES = acceptance.DEFAULT_SAMPLES


def _run(func):
    result = func(SEED, SAMPLES)
    status = "PASS" if result.passed else "FAIL"
    print(f"{status}  criterion {result.number}: {result.name} "
          f"({result.seconds:.2f}s) {result.details}")
    return result


def test_criterion_01_chambers_and_orbits():
    result = _run(acceptance.check_chambers)
    assert result.passed


def test_criterion_02_solution_triangle():
    result = _run(acceptance.check_triangle)
    assert result.passed


def test_criterion_03_curve_points():
    result = _run(acceptance.check_curve_points)
    assert result.passed


def test_criterion_04_fiber7_parametrization():
    result = _run(acceptance.check_fiber7)
    assert result.passed
    assert result.details["max_moment_residual"] <= 1e-10
    assert result.details["min_tail_modulus"] >= 0.33
    assert result.details["max_roundtrip_error"] <= 1e-10


def test_criterion_05_regular_dichotomy():
    result = _run(acceptance.check_regular_dichotomy)
    assert result.passed
    assert result.details["grid_points"] == 4579
    assert result.details["mismatches"] == 0
    assert result.seconds < 30.0


def test_criterion_06_oracle_equivalence():
    result = _run(acceptance.check_oracle_equivalence)
    assert result.passed
    assert result.details["points"] == 200


def test_criterion_07_fiber5_certificates():
    result = _run(acceptance.check_fiber5)
    assert result.passed
    assert result.details["max_plucker_residual"] <= 1e-10
    assert result.details["max_moment_residual"] <= 1e-10
    assert result.details["max_surface_roundtrip"] <= 1e-10
    assert result.details["max_sphere_roundtrip"] <= 1e-10


def test_criterion_08_complete_intersection():
    result = _run(acceptance.check_complete_intersection)
    assert result.passed
    assert result.details["max_f_deviation"] <= 1e-9
    assert result.details["all_ranks_3"]
    assert result.details["max_fd_deviation"] <= 1e-6


def test_criterion_09_bundle_structure():
    result = _run(acceptance.check_bundle_structure)
    assert result.passed
    assert result.details["determinant"] == -1
    assert result.details["max_cocycle_error"] <= 1e-12


def test_criterion_10_center_parity():
    result = _run(acceptance.check_center_parity)
    assert result.passed


def test_criterion_11_dimension_counts():
    result = _run(acceptance.check_dimension_counts)
    assert result.passed
    assert result.details["dims7"] == [7]
    assert result.details["dims5"] == [5]


def test_criterion_12_second_orbit():
    result = _run(acceptance.check_second_orbit)
    assert result.passed
    for key in ("criterion4", "criterion7", "criterion8"):
        assert result.details[key]["passed"]


def test_full_suite_wall_time_budget():
    import time

    start = time.time()
    results = acceptance.run_all(SEED, SAMPLES)
    elapsed = time.time() - start
    assert all(r.passed for r in results)
    assert len(results) == 12
    assert elapsed < 60.0
