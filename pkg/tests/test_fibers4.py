import math
from fractions import Fraction as F

import numpy as np
import pytest

from grassmoment import fibers4 as fb
from grassmoment.moment import hypersimplex_moment, simplex_moment
from grassmoment.plucker import (
    normalize_projective,
    plucker_relation_residual,
    projective_distance,
)

S6 = 1.0 / math.sqrt(6.0)
S518 = math.sqrt(5.0 / 18.0)
Q_MINUS = np.array([1 / 3, 5 / 9, 5 / 9, 5 / 9])
Q_PLUS = np.array([2 / 3, 4 / 9, 4 / 9, 4 / 9])


@pytest.fixture
def rng():
    return np.random.default_rng(0xC0FFEE)


# -- tail magnitudes and the 7-fiber ---------------------------------------

def test_tail_magnitudes_examples():
    m3, m4, m5 = fb.tail_magnitudes(0.0, S6, S6)
    assert (m3, m4, m5) == pytest.approx((S518, S518, 1 / 3), abs=1e-14)
    m3, m4, m5 = fb.tail_magnitudes(S6, S6, 0.0)
    assert (m3, m4, m5) == pytest.approx((1 / 3, S518, S518), abs=1e-14)
    # both closed forms give (1/9, 1/9, 4/9) for the squared tail here
    m3, m4, m5 = fb.tail_magnitudes(1.0 / math.sqrt(3.0), 0.0, 0.0)
    assert (m3, m4, m5) == pytest.approx((1 / 3, 1 / 3, 2 / 3), abs=1e-14)


def test_tail_magnitudes_two_forms_agree(rng):
    for _ in range(100):
        z0, z1, z2 = fb.random_sphere_triple(rng)
        m3, m4, m5 = fb.tail_magnitudes(z0, z1, z2)
        s0, s1 = abs(z0) ** 2, abs(z1) ** 2
        assert m3 == pytest.approx(math.sqrt(4 / 9 - s0 - s1), abs=1e-13)
        assert m4 == pytest.approx(math.sqrt(s1 + 1 / 9), abs=1e-13)
        assert m5 == pytest.approx(math.sqrt(s0 + 1 / 9), abs=1e-13)


def test_tail_magnitudes_rejects_off_sphere():
    with pytest.raises(ValueError):
        fb.tail_magnitudes(1.0, 0.0, 0.0)


def test_lift_hits_edge_images():
    triples = [(0.0, S6, S6), (S6, 0.0, S6), (S6, S6, 0.0)]
    for triple, image in zip(triples, fb.EDGE_IMAGES):
        point = fb.lift_to_fiber(*triple)
        expected = np.array([float(v) for v in image])
        assert np.max(np.abs(simplex_moment(point) - expected)) < 1e-12


def test_fiber7_param_reduces_to_lift():
    z0, z1, z2 = 0.1 + 0.2j, 0.3 - 0.1j, None
    s2 = math.sqrt(max(0.0, 1 / 3 - abs(z0) ** 2 - abs(z1) ** 2))
    z2 = s2 * np.exp(0.7j)
    assert np.allclose(fb.fiber7_param(z0, z1, z2, 1.0, 1.0),
                       fb.lift_to_fiber(z0, z1, z2))


def test_fiber7_moment_and_roundtrip(rng):
    for _ in range(300):
        z0, z1, z2 = fb.random_sphere_triple(rng)
        t4, t5 = fb.random_phases(rng, 2)
        point = fb.fiber7_param(z0, z1, z2, t4, t5)
        res = fb.fiber7_residuals(point)
        assert res["moment"] <= 1e-10
        assert res["magnitudes"] <= 1e-10
        assert res["min_tail"] >= 1 / 3 - 1e-12
        assert fb.fiber7_roundtrip_error(z0, z1, z2, t4, t5) <= 1e-10


def test_fiber7_torus_equivariance(rng):
    # Scaling the inputs by (tau0..tau2, tau4, tau5) multiplies the image
    # coordinates by (tau0, tau1, tau2, 1, tau4, tau5).
    for _ in range(50):
        z0, z1, z2 = fb.random_sphere_triple(rng)
        t4, t5 = fb.random_phases(rng, 2)
        tau = fb.random_phases(rng, 5)
        left = fb.fiber7_param(tau[0] * z0, tau[1] * z1, tau[2] * z2,
                               tau[3] * t4, tau[4] * t5)
        action = np.array([tau[0], tau[1], tau[2], 1.0, tau[3], tau[4]])
        right = action * fb.fiber7_param(z0, z1, z2, t4, t5)
        assert np.max(np.abs(left - right)) < 1e-10


def test_fiber7_rejects_nonunit_phase():
    with pytest.raises(ValueError):
        fb.fiber7_param(0.0, S6, S6, 2.0, 1.0)


# -- the exact triangle ------------------------------------------------------

def test_triangle_solution_coefficients():
    tri = fb.solve_moment_triangle()
    assert tri.constant == (F(-1, 9), F(-1, 9), F(5, 9), F(2, 3))
    assert tri.direction_x4 == (F(0), F(1), F(-1), F(-1))
    assert tri.direction_x5 == (F(1), F(0), F(-1), F(-1))


def test_triangle_vertices_and_images():
    from grassmoment.moment import weight_map

    tri = fb.solve_moment_triangle()
    assert tri.vertices["X01"] == (F(0), F(0), F(1, 3), F(4, 9), F(1, 9), F(1, 9))
    assert tri.vertices["X02"] == (F(0), F(1, 3), F(0), F(1, 9), F(4, 9), F(1, 9))
    assert tri.vertices["X12"] == (F(1, 3), F(0), F(0), F(1, 9), F(1, 9), F(4, 9))
    q = tuple(fb.CHAMBER_POINT_MINUS)
    for point in list(tri.vertices.values()) + [
            tri.point(F(2, 9), F(2, 9)),
            tri.point_from_head(F(1, 12), F(1, 8)),
            tri.edge_point(0, F(1, 7)),
            tri.edge_point(1, F(2, 9)),
            tri.edge_point(2, F(1, 5))]:
        assert weight_map(point, 4) == q


def test_triangle_edge_zero_coordinates():
    tri = fb.solve_moment_triangle()
    for edge in range(3):
        point = tri.edge_point(edge, F(1, 8))
        assert point[edge] == 0
    with pytest.raises(ValueError):
        tri.edge_point(0, F(1, 2))
    with pytest.raises(ValueError):
        tri.edge_point(3, F(1, 8))


def test_triangle_edge_curve_crossing():
    tri = fb.solve_moment_triangle()
    assert tri.edge_point(0, F(1, 6)) == tuple(fb.EDGE_IMAGES[0])
    assert tri.edge_point(1, F(1, 6)) == tuple(fb.EDGE_IMAGES[1])
    assert tri.edge_point(2, F(1, 6)) == tuple(fb.EDGE_IMAGES[2])


def test_triangle_region_matches_inequalities():
    tri = fb.solve_moment_triangle()
    ninth = F(1, 9)
    for a in range(10):
        for b in range(10):
            x4, x5 = F(a, 12), F(b, 12)
            inside = x4 >= ninth and x5 >= ninth and x4 + x5 <= F(5, 9)
            assert tri.contains(x4, x5) == inside


# -- the edge curve ----------------------------------------------------------

def test_curve_residual_zeros():
    assert fb.curve_residual(0.0, 1 / 6) < 1e-15
    assert fb.curve_residual(1 / 6, 1 / 6) < 1e-15


def test_curve_fixed_sign_branch_fails_where_closure_holds():
    # At (1/6, 0) the fixed sign arrangement is off by a sign flip, so
    # its residual is 2*sqrt(5/108) while the closure residual is 0.
    fixed = fb.curve_residual(1 / 6, 0.0)
    assert fixed == pytest.approx(2.0 * math.sqrt(5.0 / 108.0), abs=1e-12)
    assert fb.curve_closure_residual(1 / 6, 0.0) < 1e-15


def test_curve_domain_errors():
    with pytest.raises(ValueError):
        fb.curve_residual(-0.1, 0.0)
    with pytest.raises(ValueError):
        fb.curve_residual(0.3, 0.3)


# -- surface and sphere sections --------------------------------------------

def test_surface_section_circle_case():
    section = fb.surface_section(S6, S6, 1)
    assert section.z0 == pytest.approx(section.z1)
    assert abs(section.z0 - S6) < 1e-12
    assert section.on_circle


def test_surface_section_branches_conjugate():
    plus = fb.surface_section(0.25, 0.30, 1)
    minus = fb.surface_section(0.25, 0.30, -1)
    assert plus.z0 == pytest.approx(np.conj(minus.z0))
    assert plus.z1 == pytest.approx(np.conj(minus.z1))


def test_surface_section_infeasible():
    with pytest.raises(ValueError):
        fb.surface_section(0.05, 0.55, 1)
    with pytest.raises(ValueError):
        fb.surface_section(0.7, 0.7, 1)


def test_surface_section_vanishing_first_coordinate():
    # Solve middle(r1) = big1(r1) for the edge case r0 = 0; the root is
    # |z1|^2 = 1/6.
    def gap(r1):
        s2 = 1 / 3 - r1 * r1
        return math.sqrt(s2 * (s2 + 1 / 9)) - r1 * math.sqrt(r1 * r1 + 1 / 9)

    lo, hi = 0.3, 0.5
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    r1 = 0.5 * (lo + hi)
    assert r1 ** 2 == pytest.approx(1 / 6, abs=1e-9)
    section = fb.surface_section(0.0, r1, 1)
    expected = np.array([float(v) for v in fb.EDGE_IMAGES[0]])
    assert np.max(np.abs(simplex_moment(section.coords) - expected)) < 1e-9


def test_surface_sampler_residuals(rng):
    for _ in range(200):
        section = fb.sample_surface_section(rng)
        assert section.surface_residual() <= 1e-10
        assert not section.on_circle


def test_surface_circle_structure():
    section = fb.surface_circle(0.8)
    phase = complex(math.cos(0.8), math.sin(0.8))
    assert section.z0 == pytest.approx(phase / math.sqrt(6))
    assert section.z0 == pytest.approx(section.z1)
    m2, m3, m4, m5 = section.magnitudes()
    assert (m2, m3) == pytest.approx((0.0, 1 / 3), abs=1e-12)
    assert m4 == pytest.approx(S518) and m5 == pytest.approx(S518)


def test_sphere_section_rotation_invariance(rng):
    section = fb.sample_surface_section(rng)
    rotated = fb.rotate_section(section, np.exp(1.3j))
    assert rotated.surface_residual() <= 1e-10
    identity = fb.rotate_section(section, 1.0)
    assert np.allclose(identity.coords, section.coords)


def test_sphere_section_circle_point():
    circle = fb.rotate_section(fb.surface_circle(0.7), np.exp(1.3j))
    coords = circle.coords
    phase = np.exp(2.0j)
    assert coords[0] == pytest.approx(phase / math.sqrt(6))
    assert coords[1] == pytest.approx(phase / math.sqrt(6))
    assert abs(coords[2]) < 1e-12
    assert coords[3] == pytest.approx(1 / 3)
    assert coords[4] == pytest.approx(S518) and coords[5] == pytest.approx(S518)


# -- torus parametrizations of the 5-fiber -----------------------------------

def test_surface_param_identity(rng):
    section = fb.sample_surface_section(rng)
    point = fb.surface_torus_param(section, np.ones(3))
    assert np.allclose(point, section.coords)


def test_surface_param_invariants(rng):
    for _ in range(200):
        section = fb.sample_surface_section(rng)
        phases = fb.random_phases(rng, 3)
        point = fb.surface_torus_param(section, phases)
        res = fb.fiber5_residuals(point)
        assert res["plucker"] <= 1e-10
        assert res["surface"] <= 1e-10
        assert res["moment"] <= 1e-10
        assert fb.surface_roundtrip_error(section, phases) <= 1e-10


def test_surface_preimage_on_circle(rng):
    section = fb.surface_circle(1.1)
    phases = fb.random_phases(rng, 3)
    point = fb.surface_torus_param(section, phases)
    recovered, t = fb.surface_torus_preimage(point)
    assert abs(t[2] - 1.0) < 1e-12  # the z2 = 0 branch pins t3 = 1
    rebuilt = fb.surface_torus_param(recovered, t)
    assert np.max(np.abs(rebuilt - point)) < 1e-10


def test_sphere_param_preserves_quadric_for_distinct_phases(rng):
    # Regression guard: the torus weights on z4 and z5 must pair with t2
    # and t1 respectively, otherwise the quadric breaks.
    section = fb.sample_sphere_section(rng)
    point = fb.sphere_torus_param(section, np.exp(0.9j), np.exp(-1.7j))
    assert plucker_relation_residual(point) <= 1e-12


def test_sphere_param_invariants(rng):
    for _ in range(200):
        section = fb.sample_sphere_section(rng)
        t1, t2 = fb.random_phases(rng, 2)
        point = fb.sphere_torus_param(section, t1, t2)
        res = fb.fiber5_residuals(point)
        assert res["plucker"] <= 1e-10
        assert res["moment"] <= 1e-10
        assert fb.sphere_roundtrip_error(section, t1, t2) <= 1e-10


def test_sphere_param_injectivity(rng):
    points = np.array([fb.sample_fiber5(rng, method="sphere") for _ in range(300)])
    flattened = points.reshape(len(points), -1)
    gram = np.abs(flattened.conj() @ flattened.T)
    np.fill_diagonal(gram, 0.0)
    norms = np.linalg.norm(flattened, axis=1)
    # distinct parameters give distinct points: no off-diagonal pair collides
    cosines = gram / np.outer(norms, norms)
    assert np.max(cosines) < 1.0 - 1e-12


# -- projections -------------------------------------------------------------

def test_base_projection_collapses_circle():
    target = normalize_projective([1.0, 1.0])
    for psi in np.linspace(0, 2 * np.pi, 17):
        image = fb.base_projection(fb.surface_circle(psi))
        assert projective_distance(image, target) <= 1e-10


def test_base_projection_vanishing_z1():
    section = fb.surface_section(0.0, math.sqrt(1 / 6), 1)
    # here z0 = 0, so the image is (c : 0) = (1 : 0)
    image = fb.base_projection(section)
    assert projective_distance(image, normalize_projective([1.0, 0.0])) <= 1e-12
    flipped = fb.surface_section(math.sqrt(1 / 6), 0.0, 1)
    image = fb.base_projection(flipped)
    assert projective_distance(image, normalize_projective([0.0, 1.0])) <= 1e-12


def test_base_projection_injective_off_circle(rng):
    for _ in range(300):
        first = fb.sample_surface_section(rng)
        second = fb.sample_surface_section(rng)
        if abs(first.z0 - second.z0) + abs(first.z1 - second.z1) < 1e-8:
            continue
        dist = projective_distance(fb.base_projection(first), fb.base_projection(second))
        assert dist > 1e-12


def test_base_projection_degenerate_error():
    with pytest.raises(ValueError):
        fb.base_projection(np.zeros(6, dtype=complex))


def test_hopf_projection_line(rng):
    for _ in range(100):
        section = fb.sample_sphere_section(rng)
        c = fb.hopf_projection(section)
        assert abs(c[0] - c[1] - c[2]) <= 1e-10


def test_hopf_projection_circle_point():
    circle = fb.rotate_section(fb.surface_circle(0.4), np.exp(0.9j))
    image = fb.hopf_projection(circle)
    assert projective_distance(image, normalize_projective([1.0, 1.0, 0.0])) <= 1e-10


def test_hopf_projection_phase_invariant(rng):
    section = fb.sample_sphere_section(rng)
    lam = np.exp(0.77j)
    rotated = fb.SphereSection(lam * section.z0, lam * section.z1, lam * section.z2)
    assert projective_distance(fb.hopf_projection(section),
                               fb.hopf_projection(rotated)) <= 1e-10


def test_three_sphere_map(rng):
    circle = fb.surface_circle(0.0)
    g = fb.to_three_sphere(circle)
    assert np.allclose(g, [1 / math.sqrt(2), 1 / math.sqrt(2)])
    section = fb.surface_section(math.sqrt(1 / 6), 0.0, 1)
    g = fb.to_three_sphere(section)
    assert abs(g[0]) < 1e-12 and abs(abs(g[1]) - 1.0) < 1e-12
    for _ in range(100):
        s = fb.sample_sphere_section(rng)
        g = fb.to_three_sphere(s)
        assert abs(np.linalg.norm(g) - 1.0) <= 1e-12


def test_three_sphere_equivariance_and_diagram(rng):
    for _ in range(100):
        section = fb.sample_sphere_section(rng)
        lam = np.exp(1j * rng.uniform(0, 2 * np.pi))
        rotated = fb.SphereSection(lam * section.z0, lam * section.z1, lam * section.z2)
        left = fb.to_three_sphere(rotated)
        right = lam * fb.to_three_sphere(section)
        assert np.max(np.abs(left - right)) <= 1e-10
        # the CP^1 class of the 3-sphere image is the truncated Hopf image
        hopf = fb.hopf_projection(section)
        assert projective_distance(fb.to_three_sphere(section), hopf[:2]) <= 1e-10


# -- edge fibers -------------------------------------------------------------

def test_edge_fiber_bases():
    fibers = fb.edge_fibers()
    for fiber in fibers:
        expected = np.array([float(v) for v in fiber.image])
        assert np.max(np.abs(simplex_moment(fiber.base) - expected)) < 1e-12
        assert plucker_relation_residual(fiber.base) <= 1e-12
        assert fb.moment_residual(fiber.base) <= 1e-12


def test_edge_fiber_samples(rng):
    for fiber in fb.edge_fibers():
        for _ in range(25):
            point = fiber.sample(fb.random_phases(rng, 3))
            res = fb.fiber5_residuals(point)
            assert res["plucker"] <= 1e-12
            assert res["moment"] <= 1e-10
            expected = np.array([float(v) for v in fiber.image])
            assert np.max(np.abs(simplex_moment(point) - expected)) < 1e-10


def test_edge_fiber_exponent_structure():
    # The torus weights must cancel on the two nonvanishing quadric
    # monomials so the relation survives along the whole orbit, and the
    # three parameters must act with full rank.
    quadric_pairs = ((0, 5), (2, 3), (1, 4))
    for k, fiber in enumerate(fb.edge_fibers()):
        active = [(a, b) for a, b in quadric_pairs if k not in (a, b)]
        sums = {tuple(fiber.exponents[a] + fiber.exponents[b]) for a, b in active}
        assert sums == {(0, 0, 0)}
        assert np.linalg.matrix_rank(fiber.exponents) == 3


# -- complete intersection ---------------------------------------------------

def test_equipotential_values_symbolic():
    # Independent derivation: with s1 = |a1|^2, s3 = |a3|^2, d = |a1a4 - a2a3|^2,
    # the chart system fixes |a4|^2 and |a2|^2 and forces (f1, f2, f3) = (0, -1, 0).
    import sympy as sp

    s1, s3, d = sp.symbols("s1 s3 d", nonnegative=True)
    s4 = (s3 + 4 * s1 + d) / 3
    s2 = (4 * s3 + s1 + d) / 3
    f1 = s1 + s2 - s3 - s4
    f2 = 5 * s1 + s3 - 4 * s4
    f3 = 4 * s1 + s3 - 3 * s4 + d
    assert sp.simplify(f1) == 0
    assert sp.simplify(f3) == 0
    # f2 needs the chart normalization s3 + s1 + 4d = 3:
    f2_on_surface = sp.simplify(f2.subs(s3, 3 - s1 - 4 * d))
    assert f2_on_surface == -1


def test_complete_intersection_at_edge_bases():
    for fiber in fb.edge_fibers():
        chart = fb.fiber5_chart(fiber.base)
        f1, f2, f3 = fb.complete_intersection_f(chart)
        assert abs(f1) <= 1e-10 and abs(f2 + 1) <= 1e-10 and abs(f3) <= 1e-10
        assert fb.jacobian_rank(*chart.as_uv()) == 3


def test_complete_intersection_origin():
    f1, f2, f3 = fb.complete_intersection_f(np.zeros(4), np.zeros(4))
    assert (f1, f2, f3) == (0.0, 0.0, 0.0)


def test_complete_intersection_on_samples(rng):
    for k in range(300):
        method = "surface" if k % 2 == 0 else "sphere"
        point = fb.sample_fiber5(rng, method=method)
        chart = fb.fiber5_chart(point)
        f1, f2, f3 = fb.complete_intersection_f(chart)
        assert max(abs(f1), abs(f2 + 1), abs(f3)) <= 1e-9
        assert fb.jacobian_rank(*chart.as_uv()) == 3


def test_jacobian_against_finite_differences(rng):
    for _ in range(25):
        point = fb.sample_fiber5(rng)
        u, v = fb.fiber5_chart(point).as_uv()
        dev = np.max(np.abs(fb.ci_jacobian(u, v) - fb.ci_jacobian_fd(u, v)))
        assert dev <= 1e-6


def test_jacobian_rank_precondition():
    with pytest.raises(ValueError):
        fb.jacobian_rank(np.zeros(4), np.zeros(4))


def test_chart_coordinates_never_degenerate(rng):
    # On fiber points a2 and a4 never vanish and no two chart coordinates
    # vanish simultaneously.
    for _ in range(100):
        chart = fb.fiber5_chart(fb.sample_fiber5(rng))
        a = chart.as_tuple()
        assert abs(a[1]) > 1e-6 and abs(a[3]) > 1e-6
        for i in range(4):
            for j in range(i + 1, 4):
                assert abs(a[i]) ** 2 + abs(a[j]) ** 2 > 1e-12


def test_chart_consistency_with_plucker_chart(rng):
    from grassmoment.plucker import chart_coords, from_chart, plucker_embed

    point = fb.sample_fiber5(rng)
    chart = fb.fiber5_chart(point)
    rebuilt = plucker_embed(from_chart(chart)).coords
    assert projective_distance(rebuilt, point) <= 1e-10
    back = chart_coords(from_chart(chart))
    assert max(abs(a - b) for a, b in zip(back.as_tuple(), chart.as_tuple())) <= 1e-10


# -- transition and coverage -------------------------------------------------

def test_transition_examples():
    assert fb.bundle_transition([1, 1, 1], "01") == (1, 1, 1)
    out = fb.bundle_transition([1j, 1, 1], "01")
    assert out[0] == pytest.approx(1j) and out[1] == pytest.approx(1j)
    assert out[2] == pytest.approx(1.0)


def test_transition_determinant_and_cocycle(rng):
    assert fb.transition_determinant() == -1
    for _ in range(100):
        t = fb.random_phases(rng, 3)
        back = fb.bundle_transition(fb.bundle_transition(t, "01"), "10")
        assert max(abs(a - b) for a, b in zip(back, t)) <= 1e-12
    with pytest.raises(ValueError):
        fb.bundle_transition([1, 1, 1], "02")


def test_chart_coverage_classification(rng):
    fibers = fb.edge_fibers()
    cov0 = fb.chart_coverage(fibers[0].base)
    assert cov0.in_chart_m0 and not cov0.in_chart_m1
    assert cov0.vanishing_head == (0,)
    cov1 = fb.chart_coverage(fibers[1].base)
    assert cov1.in_chart_m1 and not cov1.in_chart_m0
    assert cov1.vanishing_head == (1,)
    for _ in range(50):
        cov = fb.chart_coverage(fb.sample_fiber5(rng))
        assert cov.ok and cov.in_chart_m0 and cov.in_chart_m1
        assert cov.min_tail > 1 / 3 - 1e-9


# -- tangent dimensions -------------------------------------------------------

def test_tangent_dimensions(rng):
    for _ in range(20):
        assert fb.tangent_fiber_dimension(fb.sample_fiber7(rng)) == 7
        assert fb.tangent_fiber_dimension(fb.sample_fiber5(rng), include_quadric=True) == 5


# -- the second orbit ---------------------------------------------------------

def test_orbit_swap_is_involution(rng):
    z = fb.sample_fiber7(rng)
    assert np.allclose(fb.orbit_swap(fb.orbit_swap(z)), z)


def test_affine_representative_idempotent(rng):
    point = fb.sample_fiber5(rng)
    skewed = point * np.exp(0.9j) * 1.7
    fixed = fb.affine_representative(skewed)
    assert np.max(np.abs(fixed - point)) <= 1e-12
    assert np.max(np.abs(fb.affine_representative(fixed) - fixed)) <= 1e-15
    swapped = fb.orbit_swap(skewed)
    back = fb.affine_representative(swapped, second_orbit=True)
    assert np.max(np.abs(back - fb.orbit_swap(point))) <= 1e-12


def test_second_orbit_moment_target(rng):
    point = fb.sample_fiber7(rng, second_orbit=True)
    image = hypersimplex_moment(point, 4)
    assert np.max(np.abs(image - Q_PLUS)) <= 1e-10
    res = fb.fiber7_residuals(point, second_orbit=True)
    assert res["moment"] <= 1e-10 and res["magnitudes"] <= 1e-10


def test_second_orbit_satisfies_mirror_system(rng):
    # In its own coordinates the mirror fiber fixes the head moduli in
    # terms of the tail: |z0|^2 = (|z3|^2 + |z4|^2 + 4|z5|^2)/3 and cyclic.
    for _ in range(50):
        z = fb.sample_fiber7(rng, second_orbit=True)
        s = np.abs(z / np.linalg.norm(z)) ** 2
        assert abs(s[0] - (s[3] + s[4] + 4 * s[5]) / 3) <= 1e-10
        assert abs(s[1] - (s[3] + 4 * s[4] + s[5]) / 3) <= 1e-10
        assert abs(s[2] - (4 * s[3] + s[4] + s[5]) / 3) <= 1e-10


def test_second_orbit_fiber5(rng):
    for method in ("surface", "sphere"):
        point = fb.sample_fiber5(rng, method=method, second_orbit=True)
        res = fb.fiber5_residuals(point, second_orbit=True)
        assert res["plucker"] <= 1e-10
        assert res["moment"] <= 1e-10
        chart = fb.fiber5_chart(point, second_orbit=True)
        f1, f2, f3 = fb.complete_intersection_f(chart)
        assert max(abs(f1), abs(f2 + 1), abs(f3)) <= 1e-9


def test_second_orbit_roundtrips(rng):
    section = fb.sample_surface_section(rng)
    phases = fb.random_phases(rng, 3)
    assert fb.surface_roundtrip_error(section, phases, second_orbit=True) <= 1e-10
    sphere = fb.sample_sphere_section(rng)
    t1, t2 = fb.random_phases(rng, 2)
    assert fb.sphere_roundtrip_error(sphere, t1, t2, second_orbit=True) <= 1e-10
    z0, z1, z2 = fb.random_sphere_triple(rng)
    t4, t5 = fb.random_phases(rng, 2)
    assert fb.fiber7_roundtrip_error(z0, z1, z2, t4, t5, second_orbit=True) <= 1e-10


# -- certificates -------------------------------------------------------------

def test_certificate_schema(rng):
    point = fb.sample_fiber5(rng)
    cert, passed = fb.build_certificate("mq5", point)
    assert passed
    assert set(cert) == {"point", "residuals", "jacobian_rank", "f_values"}
    assert set(cert["residuals"]) == {"moment", "plucker", "surface"}
    assert cert["jacobian_rank"] == 3
    cert7, passed7 = fb.build_certificate("mq7", fb.sample_fiber7(rng))
    assert passed7
    assert cert7["residuals"]["plucker"] is None
    assert cert7["jacobian_rank"] is None
    with pytest.raises(ValueError):
        fb.build_certificate("bogus", point)


def test_certificate_tolerance_overrides(rng):
    point = fb.sample_fiber7(rng)
    # the tail moduli share squared norm 2/3, so min_tail can never reach 0.9
    _, passed = fb.build_certificate("mq7", point, tolerances={"min_tail": 0.9})
    assert not passed


def test_sample_for_kind(rng):
    for kind in ("mq7", "mq5", "m2", "m3"):
        point = fb.sample_for_kind(kind, rng)
        assert point.shape == (6,)
    with pytest.raises(ValueError):
        fb.sample_for_kind("mq3", rng)
