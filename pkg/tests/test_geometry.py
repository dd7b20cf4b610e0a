import math

import numpy as np
import pytest

from cpdsurf import jets
from cpdsurf.catalog import (bscroll, lightlike_extremal, lightlike_general,
                             lorentzian_minimal, lorentzian_plane, plane,
                             spacelike_maximal)
from cpdsurf.errors import DegenerateMetric
from cpdsurf.geometry import (ShapeCase, SurfaceType, classify, curvatures, first_form,
                              fundamental_data, shape_operator, unit_normal,
                              weingarten_defect)
from cpdsurf.jets import Immersion, evaluate_surface_jet
from cpdsurf.lorentz import inner
from cpdsurf.presets import PRESETS, build_preset


def geometry_at(immersion, s, t):
    jet = evaluate_surface_jet(immersion, s, t)
    fd = fundamental_data(jet, immersion.orientation)
    return jet, fd, shape_operator(jet, fd)


def test_first_form_planes():
    g = first_form(evaluate_surface_jet(plane(), 0.1, 0.2))
    assert (g.E, g.F, g.G, g.surface_type) == (1, 0, 1, SurfaceType.SPACELIKE)
    g = first_form(evaluate_surface_jet(lorentzian_plane(), 0.1, 0.2))
    assert (g.E, g.F, g.G, g.surface_type) == (1, 0, -1, SurfaceType.TIMELIKE)
    assert g.det_g == g.E * g.G - g.F ** 2


def test_degenerate_metric():
    light = Immersion(lambda s, t: (s, t, t), (-1, 1, -1, 1))
    with pytest.raises(DegenerateMetric):
        first_form(evaluate_surface_jet(light, 0.0, 0.0))


def test_unit_normal_planes():
    N, eps = unit_normal(evaluate_surface_jet(plane(), 0.3, 0.3))
    np.testing.assert_array_equal(np.abs(N), (0, 0, 1))
    assert eps == -1
    N, eps = unit_normal(evaluate_surface_jet(lorentzian_plane(), 0.3, 0.3))
    np.testing.assert_array_equal(np.abs(N), (0, 1, 0))
    assert eps == 1


# S, N and g at fixed points, computed symbolically (sympy, 17 digits)
# with N = orientation * cross(x_s, x_t) / sqrt|<cross, cross>| and S = g^-1 L
FROZEN = [
    ("maximal", lambda: spacelike_maximal(1, (-0.8, 0.8, -1, 1)).immersion, (0.3, 0.2),
     [[-1.0989010989010989, 0], [0, 1.0989010989010989]],
     [0.31448545101657549, -0.21105747855003444, -1.0693205123595999], [1, 0, 0, 0.91]),
    ("minimal-1", lambda: lorentzian_minimal(1, 1, (0.2, 2, -1, 1)).immersion, (0.7, 0.4),
     [[-0.67114093959731544, 0], [0, 0.67114093959731544]],
     [0.57346234436332833, -0.88564899540129157, -0.33650141672510317], [1, 0, 0, -1.49]),
    ("minimal-2", lambda: lorentzian_minimal(2, 1, (1.2, 2.5, -1, 1)).immersion, (1.5, 0.2),
     [[-0.8, 0], [0, 0.8]],
     [1.3416407864998738, -0.18008039519998262, -0.91237544286076767], [-1, 0, 0, 1.25]),
    ("bscroll", lambda: bscroll((0.6, 2, -1, 1)).immersion, (1.0, 0.0),
     [[0, 0], [-1, 0]], [1, -1, 1], [2, 1, 1, 0]),
    ("lightlike-minimal", lambda: lightlike_extremal(0, 3, -1, (0.5, 1.5, -0.4, 1)).immersion,
     (0.8, 0.1), [[1.1048543456039805, 0], [0, -1.1048543456039805]],
     [-0.47729707730091958, 0.96824583655185422, 0.40658639918226483],
     [-1.28, 0, 0, 0.53333333333333333]),
]


@pytest.mark.parametrize("name, make, pt, S, N, g", FROZEN, ids=[f[0] for f in FROZEN])
def test_against_symbolic(name, make, pt, S, N, g):
    jet, fd, sc = geometry_at(make(), *pt)
    np.testing.assert_allclose(sc.S, S, atol=1e-12)
    np.testing.assert_allclose(fd.N, N, atol=1e-12)
    np.testing.assert_allclose(fd.g.matrix.ravel(), g, atol=1e-12)


def test_bscroll_null_case_and_frame():
    _, fd, sc = geometry_at(bscroll((0.6, 2, -1, 1)).immersion, 1.0, 0.0)
    assert sc.case is ShapeCase.NULL
    assert sc.principal["k1"] == pytest.approx(0.0, abs=1e-12)
    e1, e2 = sc.principal["frame"]
    g = fd.g.matrix
    assert e1 @ g @ e1 == pytest.approx(0, abs=1e-12)
    assert e2 @ g @ e2 == pytest.approx(0, abs=1e-12)
    assert e1 @ g @ e2 == pytest.approx(-1, abs=1e-12)
    # S e1 = k1 e1 and S e2 = mu e1 + k1 e2
    np.testing.assert_allclose(sc.S @ e1, 0.0, atol=1e-12)
    np.testing.assert_allclose(sc.S @ e2, sc.principal["mu"] * e1, atol=1e-12)


def test_classify_synthetic():
    g = np.diag([1.0, -1.0])
    assert classify(np.diag([1.0, 2.0]), g).case is ShapeCase.DIAGONALIZABLE
    assert classify(2 * np.eye(2), g).case is ShapeCase.DIAGONALIZABLE
    c3 = classify(np.array([[1.0, 2.0], [-2.0, 1.0]]), g)
    assert c3.case is ShapeCase.COMPLEX
    assert (c3.principal["k1"], c3.principal["nu"]) == pytest.approx((1.0, 2.0))
    c2 = classify(np.array([[3.0, 1.0], [0.0, 3.0]]), g)
    assert c2.case is ShapeCase.NULL and c2.principal["k1"] == pytest.approx(3.0)


def test_case_one_directions_g_orthogonal():
    _, fd, sc = geometry_at(build_preset("spacelike-general").immersion, 0.5, 0.3)
    d1, d2 = sc.principal["directions"]
    assert d1 @ fd.g.matrix @ d2 == pytest.approx(0.0, abs=1e-10)


def test_curvatures_plane_and_names():
    _, fd, sc = geometry_at(plane(), 0.0, 0.0)
    c = curvatures(sc, fd.g.surface_type)
    assert (c.H_trace, c.K, c.flat, c.extremal, c.extremal_name) == (0, 0, True, True, "maximal")
    _, fd, sc = geometry_at(lorentzian_plane(), 0.0, 0.0)
    assert curvatures(sc, fd.g.surface_type).extremal_name == "minimal"
    _, fd, sc = geometry_at(spacelike_maximal(1, (-0.8, 0.8, -1, 1)).immersion, 0.3, 0.2)
    c = curvatures(sc, fd.g.surface_type)
    assert c.H_mean == pytest.approx(c.H_trace / 2)
    assert c.K == pytest.approx(np.linalg.det(sc.S), abs=1e-12)


def _random_points(immersion, n, seed):
    rng = np.random.default_rng(seed)
    s0, s1, t0, t1 = immersion.domain
    ps, pt = 0.05 * (s1 - s0), 0.05 * (t1 - t0)
    return [(rng.uniform(s0 + ps, s1 - ps), rng.uniform(t0 + pt, t1 - pt)) for _ in range(n)]


@pytest.mark.parametrize("name", list(PRESETS))
def test_normal_and_weingarten(name):
    x = build_preset(name).immersion
    for s, t in _random_points(x, 10, 7):
        jet, fd, sc = geometry_at(x, s, t)
        assert abs(abs(inner(fd.N, fd.N)) - 1) <= 1e-10
        assert abs(inner(fd.N, jet.x_s)) <= 1e-10 and abs(inner(fd.N, jet.x_t)) <= 1e-10
        assert fd.eps_N == (1 if fd.g.surface_type is SurfaceType.TIMELIKE else -1)
        assert weingarten_defect(jet, fd, sc, x.orientation) <= 1e-6


@pytest.mark.parametrize("name", ["spacelike-general", "lorentzian-3", "lightlike-general",
                                  "graph-counterexample"])
def test_trace_and_det_do_not_depend_on_coordinates(name):
    # reparametrize by (s, t) = (a u + b v, c u + d v) and compare at matching points
    x = build_preset(name).immersion
    a, b, c, d = 1.3, 0.4, -0.2, 0.9
    inv = np.linalg.inv([[a, b], [c, d]])
    y = Immersion(lambda u, v: x.fn(a * u + b * v, c * u + d * v), (-50, 50, -50, 50),
                  orientation=x.orientation)
    for s, t in _random_points(x, 5, 3):
        _, _, sx = geometry_at(x, s, t)
        u, v = inv @ (s, t)
        _, _, sy = geometry_at(y, float(u), float(v))
        assert np.trace(sy.S) == pytest.approx(np.trace(sx.S), abs=1e-10)
        assert np.linalg.det(sy.S) == pytest.approx(np.linalg.det(sx.S), abs=1e-10)


@pytest.mark.parametrize("name", ["spacelike-general", "spacelike-flat", "maximal-c1",
                                  "lightlike-maximal"])
def test_spacelike_surfaces_diagonalizable(name):
    x = build_preset(name).immersion
    for s, t in _random_points(x, 20, 11):
        _, fd, sc = geometry_at(x, s, t)
        assert fd.g.surface_type is SurfaceType.SPACELIKE
        assert sc.case is ShapeCase.DIAGONALIZABLE


@pytest.mark.parametrize("eps", [-1, 1])
def test_lightlike_normal_matches_closed_form(eps):
    spec = lightlike_general("s+2", "t/4", "1", eps, (0, 1, -1, 1))
    for s, t in [(0.5, 0.1), (0.2, -0.7), (0.9, 0.8)]:
        _, fd, _ = geometry_at(spec.immersion, s, t)
        np.testing.assert_allclose(fd.N, spec.normal(s, t), atol=1e-8)


def test_lightlike_shape_operator_closed_form():
    spec = lightlike_general("s+2", "t/4", "1", -1, (0, 1, -1, 1))
    _, _, sc = geometry_at(spec.immersion, 0.5, 0.1)
    # diag(eps phi', eps phi g0' / (sqrt(1 - 2 eps g0) b + s g0')) evaluated by hand
    g0, g0p, phi = 0.025, 0.25, 2.5
    expected = np.diag([-1.0, -phi * g0p / (math.sqrt(1 + 2 * g0) + 0.5 * g0p)])
    np.testing.assert_allclose(sc.S, expected, atol=1e-6)


def test_jets_module_used_for_normals():
    # normal_jet gives the same value as unit_normal
    from cpdsurf.geometry import normal_jet
    x = build_preset("lorentzian-1").immersion
    jet = evaluate_surface_jet(x, 0.6, 0.2)
    Nj = normal_jet(jet, x.orientation)
    N, _ = unit_normal(jet, x.orientation)
    np.testing.assert_allclose([jets.value(c) for c in Nj], N, atol=1e-14)
