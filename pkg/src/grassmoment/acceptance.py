"""Acceptance suite: every exit criterion as a runnable check.

Each criterion returns a CriterionResult with a hard pass/fail verdict at
its pinned tolerance.  The CLI ``report`` command and the test suite both
drive these functions, so the shipped verdicts and the tested verdicts
are the same code path.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import fibers4 as fb
from .exactgeom import format_vector, vector
from .moment import simplex_moment, weight_map
from .plucker import normalize_projective, plucker_relation_residual, projective_distance
from .regularity import (
    CHAMBER_POINT_MINUS,
    CHAMBER_POINT_PLUS,
    center_point_regular,
    chamber_orbits,
    enumerate_chambers,
    hypersimplex_grid,
    is_regular_grassmann,
    is_regular_projective,
    is_regular_projective_bruteforce,
)

F = Fraction

DEFAULT_SEED = fb.DEFAULT_SEED
DEFAULT_SAMPLES = 1000


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    seconds: float
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "number": self.number,
            "name": self.name,
            "passed": self.passed,
            "seconds": round(self.seconds, 3),
            "details": self.details,
        }


def _result(number: int, name: str, started: float, passed: bool, details: dict) -> CriterionResult:
    return CriterionResult(number=number, name=name, passed=bool(passed),
                           seconds=time.time() - started, details=details)


def check_chambers(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 1: eight maximal chambers in two orbits of four."""
    started = time.time()
    chambers = enumerate_chambers(4)
    orbits = chamber_orbits()
    minus, plus = orbits
    reps_ok = (minus.representative.representative == CHAMBER_POINT_MINUS
               and plus.representative.representative == CHAMBER_POINT_PLUS)
    passed = (len(chambers) == 8
              and len(orbits) == 2
              and {len(minus.chambers), len(plus.chambers)} == {4}
              and minus.representative.id == (-1, -1, -1)
              and plus.representative.id == (1, 1, 1)
              and reps_ok)
    details = {
        "chamber_count": len(chambers),
        "orbit_sizes": [len(minus.chambers), len(plus.chambers)],
        "representatives": {
            "C-": format_vector(minus.representative.representative),
            "C+": format_vector(plus.representative.representative),
        },
    }
    return _result(1, "chamber count and orbits", started, passed, details)


def check_triangle(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 2: exact triangle vertices and their exact moment image."""
    started = time.time()
    triangle = fb.solve_moment_triangle()
    expected = {
        "X01": vector(["0", "0", "1/3", "4/9", "1/9", "1/9"]),
        "X02": vector(["0", "1/3", "0", "1/9", "4/9", "1/9"]),
        "X12": vector(["1/3", "0", "0", "1/9", "1/9", "4/9"]),
    }
    vertices = triangle.vertices
    vertices_ok = all(vertices[k] == expected[k] for k in expected)
    probe_points = list(vertices.values())
    probe_points += [triangle.edge_point(e, F(1, 7)) for e in range(3)]
    probe_points += [triangle.point(F(2, 9), F(2, 9)), triangle.point_from_head(F(1, 10), F(1, 10))]
    images_ok = all(weight_map(p, 4) == CHAMBER_POINT_MINUS for p in probe_points)
    passed = vertices_ok and images_ok
    details = {
        "vertices": {k: format_vector(v) for k, v in vertices.items()},
        "vertices_exact": vertices_ok,
        "probe_points_map_to_chamber_point": images_ok,
    }
    return _result(2, "exact solution triangle", started, passed, details)


def check_curve_points(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 3: lifted sphere points hit the three edge images; curve residuals."""
    started = time.time()
    s6 = 1.0 / np.sqrt(6.0)
    lifted = [
        fb.lift_to_fiber(0.0, s6, s6),
        fb.lift_to_fiber(s6, 0.0, s6),
        fb.lift_to_fiber(s6, s6, 0.0),
    ]
    image_err = 0.0
    for point, target in zip(lifted, fb.EDGE_IMAGES):
        expected = np.array([float(v) for v in target])
        image_err = max(image_err, float(np.max(np.abs(simplex_moment(point) - expected))))
    residuals = {
        "(0,1/6)": fb.curve_residual(0.0, 1.0 / 6.0),
        "(1/6,1/6)": fb.curve_residual(1.0 / 6.0, 1.0 / 6.0),
    }
    passed = image_err <= 1e-12 and all(r <= 1e-12 for r in residuals.values())
    details = {"max_image_error": image_err, "curve_residuals": residuals}
    return _result(3, "edge curve points", started, passed, details)


def check_fiber7(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                 second_orbit: bool = False) -> CriterionResult:
    """Criterion 4: seeded 7-fiber samples close the moment equation and round trip."""
    started = time.time()
    rng = np.random.default_rng(seed)
    max_moment = max_round = 0.0
    min_tail = float("inf")
    for _ in range(samples):
        z0, z1, z2 = fb.random_sphere_triple(rng)
        t4, t5 = fb.random_phases(rng, 2)
        point = fb.fiber7_param(z0, z1, z2, t4, t5, second_orbit=second_orbit)
        res = fb.fiber7_residuals(point, second_orbit=second_orbit)
        max_moment = max(max_moment, res["moment"])
        min_tail = min(min_tail, res["min_tail"])
        max_round = max(max_round, fb.fiber7_roundtrip_error(z0, z1, z2, t4, t5,
                                                             second_orbit=second_orbit))
    passed = max_moment <= 1e-10 and min_tail >= 0.33 and max_round <= 1e-10
    details = {
        "samples": samples,
        "max_moment_residual": max_moment,
        "min_tail_modulus": min_tail,
        "max_roundtrip_error": max_round,
        "second_orbit": second_orbit,
    }
    return _result(4, "7-fiber parametrization", started, passed, details)


def check_regular_dichotomy(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 5: the two regularity notions coincide on the full n=4 grid
    and split at the reference n=5 point."""
    started = time.time()
    mismatches = 0
    total = 0
    for x in hypersimplex_grid(4, 18):
        total += 1
        if is_regular_grassmann(x, 4) != is_regular_projective(x, 4):
            mismatches += 1
    gap_point = vector(["7/10", "6/10", "5/10", "1/10", "1/10"])
    gap_ok = is_regular_grassmann(gap_point, 5) and not is_regular_projective(gap_point, 5)
    passed = mismatches == 0 and gap_ok
    details = {
        "grid_points": total,
        "mismatches": mismatches,
        "n5_point_grassmann_regular_projective_nonregular": gap_ok,
    }
    return _result(5, "regular value dichotomy", started, passed, details)


def check_oracle_equivalence(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 6: bounded enumeration agrees with the all-support scan."""
    started = time.time()
    grid = list(hypersimplex_grid(4, 18))
    stride = max(1, len(grid) // 200)
    chosen = grid[::stride][:200]
    disagreements = sum(
        is_regular_projective(x, 4) != is_regular_projective_bruteforce(x, 4)
        for x in chosen)
    passed = disagreements == 0 and len(chosen) == 200
    details = {"points": len(chosen), "disagreements": disagreements}
    return _result(6, "brute-force oracle equivalence", started, passed, details)


def check_fiber5(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                 second_orbit: bool = False) -> CriterionResult:
    """Criterion 7: 5-fiber certificates, both parametrizations, projection facts."""
    started = time.time()
    rng = np.random.default_rng(seed)
    max_plucker = max_moment = max_f_round = max_g_round = 0.0
    for _ in range(samples):
        section = fb.sample_surface_section(rng)
        phases = fb.random_phases(rng, 3)
        point = fb.surface_torus_param(section, phases, second_orbit=second_orbit)
        max_plucker = max(max_plucker, plucker_relation_residual(normalize_projective(point)))
        max_moment = max(max_moment, fb.moment_residual(point, second_orbit=second_orbit))
        max_f_round = max(max_f_round, fb.surface_roundtrip_error(section, phases,
                                                                  second_orbit=second_orbit))
    for _ in range(samples):
        section = fb.sample_sphere_section(rng)
        t1, t2 = fb.random_phases(rng, 2)
        point = fb.sphere_torus_param(section, t1, t2, second_orbit=second_orbit)
        max_plucker = max(max_plucker, plucker_relation_residual(normalize_projective(point)))
        max_moment = max(max_moment, fb.moment_residual(point, second_orbit=second_orbit))
        max_g_round = max(max_g_round, fb.sphere_roundtrip_error(section, t1, t2,
                                                                 second_orbit=second_orbit))
    target = normalize_projective([1.0, 1.0])
    max_circle = 0.0
    for psi in np.linspace(0.0, 2.0 * np.pi, 64, endpoint=False):
        image = fb.base_projection(fb.surface_circle(psi))
        max_circle = max(max_circle, projective_distance(image, target))
    min_pair_distance = float("inf")
    for _ in range(samples):
        first = fb.sample_surface_section(rng)
        second = fb.sample_surface_section(rng)
        if abs(first.z0 - second.z0) + abs(first.z1 - second.z1) < 1e-8:
            continue
        dist = projective_distance(fb.base_projection(first), fb.base_projection(second))
        min_pair_distance = min(min_pair_distance, dist)
    passed = (max_plucker <= 1e-10 and max_moment <= 1e-10
              and max_f_round <= 1e-10 and max_g_round <= 1e-10
              and max_circle <= 1e-10 and min_pair_distance > 1e-12)
    details = {
        "samples_per_parametrization": samples,
        "max_plucker_residual": max_plucker,
        "max_moment_residual": max_moment,
        "max_surface_roundtrip": max_f_round,
        "max_sphere_roundtrip": max_g_round,
        "max_circle_collapse_distance": max_circle,
        "min_offcircle_pair_distance": min_pair_distance,
        "second_orbit": second_orbit,
    }
    return _result(7, "5-fiber certificates", started, passed, details)


def check_complete_intersection(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                                second_orbit: bool = False) -> CriterionResult:
    """Criterion 8: equipotential values (0, -1, 0), Jacobian rank 3, FD cross-check."""
    started = time.time()
    rng = np.random.default_rng(seed)
    points = []
    for fiber in fb.edge_fibers():
        base = fiber.sample(np.ones(3, dtype=complex))
        points.append(fb.orbit_swap(base) if second_orbit else base)
    for k in range(samples):
        method = "surface" if k % 2 == 0 else "sphere"
        points.append(fb.sample_fiber5(rng, method=method, second_orbit=second_orbit))
    max_f_dev = 0.0
    ranks_ok = True
    max_fd_dev = 0.0
    for index, point in enumerate(points):
        chart = fb.fiber5_chart(point, second_orbit=second_orbit)
        f1, f2, f3 = fb.complete_intersection_f(chart)
        max_f_dev = max(max_f_dev, abs(f1), abs(f2 + 1.0), abs(f3))
        u, v = chart.as_uv()
        if fb.jacobian_rank(u, v, tol=1e-6) != 3:
            ranks_ok = False
        if index % 50 == 0:
            max_fd_dev = max(max_fd_dev, float(np.max(np.abs(
                fb.ci_jacobian(u, v) - fb.ci_jacobian_fd(u, v)))))
    passed = max_f_dev <= 1e-9 and ranks_ok and max_fd_dev <= 1e-6
    details = {
        "points": len(points),
        "max_f_deviation": max_f_dev,
        "all_ranks_3": ranks_ok,
        "max_fd_deviation": max_fd_dev,
        "second_orbit": second_orbit,
    }
    return _result(8, "complete intersection", started, passed, details)


def check_bundle_structure(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 9: unimodular transition, cocycle identity, chart coverage."""
    started = time.time()
    rng = np.random.default_rng(seed)
    determinant = fb.transition_determinant()
    max_cocycle = 0.0
    for _ in range(max(samples // 10, 10)):
        t = fb.random_phases(rng, 3)
        forward = fb.bundle_transition(fb.bundle_transition(t, "01"), "10")
        backward = fb.bundle_transition(fb.bundle_transition(t, "10"), "01")
        max_cocycle = max(max_cocycle,
                          max(abs(a - b) for a, b in zip(forward, t)),
                          max(abs(a - b) for a, b in zip(backward, t)))
    coverage_ok = True
    for _ in range(samples // 2):
        cov = fb.chart_coverage(fb.sample_fiber5(rng))
        if not cov.ok:
            coverage_ok = False
    fibers = fb.edge_fibers()
    cov0 = fb.chart_coverage(fibers[0].base)
    cov1 = fb.chart_coverage(fibers[1].base)
    classification_ok = (cov0.in_chart_m0 and not cov0.in_chart_m1
                         and cov1.in_chart_m1 and not cov1.in_chart_m0)
    passed = (determinant == -1 and max_cocycle <= 1e-12
              and coverage_ok and classification_ok)
    details = {
        "determinant": determinant,
        "max_cocycle_error": max_cocycle,
        "coverage_ok": coverage_ok,
        "edge_classification_ok": classification_ok,
    }
    return _result(9, "bundle structure", started, passed, details)


def check_center_parity(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 10: the center point is regular exactly for odd n, n = 4..10."""
    started = time.time()
    verdicts = {n: center_point_regular(n) for n in range(4, 11)}
    passed = all(verdicts[n] == (n % 2 == 1) for n in verdicts)
    details = {"verdicts": {str(n): v for n, v in verdicts.items()}}
    return _result(10, "center point parity", started, passed, details)


def check_dimension_counts(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 11: SVD tangent dimensions 7 and 5 at random fiber points."""
    started = time.time()
    rng = np.random.default_rng(seed)
    count = max(samples // 10, 100)
    dims7 = {fb.tangent_fiber_dimension(fb.sample_fiber7(rng)) for _ in range(count)}
    dims5 = {fb.tangent_fiber_dimension(fb.sample_fiber5(rng), include_quadric=True)
             for _ in range(count)}
    passed = dims7 == {7} and dims5 == {5}
    details = {"points_each": count, "dims7": sorted(dims7), "dims5": sorted(dims5)}
    return _result(11, "tangent dimension counts", started, passed, details)


def check_second_orbit(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES) -> CriterionResult:
    """Criterion 12: criteria 4, 7 and 8 rerun under the coordinate swap."""
    started = time.time()
    sub4 = check_fiber7(seed, samples, second_orbit=True)
    sub7 = check_fiber5(seed, samples, second_orbit=True)
    sub8 = check_complete_intersection(seed, samples, second_orbit=True)
    passed = sub4.passed and sub7.passed and sub8.passed
    details = {
        "criterion4": sub4.details | {"passed": sub4.passed},
        "criterion7": sub7.details | {"passed": sub7.passed},
        "criterion8": sub8.details | {"passed": sub8.passed},
    }
    return _result(12, "second orbit rerun", started, passed, details)


CRITERIA = (
    ("chambers", check_chambers),
    ("triangle", check_triangle),
    ("curve", check_curve_points),
    ("fiber7", check_fiber7),
    ("dichotomy", check_regular_dichotomy),
    ("oracle", check_oracle_equivalence),
    ("fiber5", check_fiber5),
    ("intersection", check_complete_intersection),
    ("transition", check_bundle_structure),
    ("parity", check_center_parity),
    ("dimensions", check_dimension_counts),
    ("secondorbit", check_second_orbit),
)


def run_all(seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
            only: str | None = None) -> list[CriterionResult]:
    """Run the acceptance criteria, optionally filtered by short name substring."""
    results = []
    for name, func in CRITERIA:
        if only is not None and only not in name:
            continue
        results.append(func(seed, samples))
    return results
