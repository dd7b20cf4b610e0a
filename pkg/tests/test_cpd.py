import math

import numpy as np
import pytest

from cpdsurf.catalog import (bscroll, graph_counterexample, lorentzian_minimal,
                             lorentzian_plane, plane, spacelike_general, spacelike_maximal)
from cpdsurf.cpd import (AngleCase, CpdProblem, analyze_point, angle_case, cell_centres,
                         collinearity_residual, cpd_residual, geodesic_check,
                         recover_angle, tangential_projection, verify_grid)
from cpdsurf.errors import (DegenerateU, LeftDomain, LightLikeU, NormalDirection,
                            UnsupportedCausalCombination)
from cpdsurf.geometry import fundamental_data
from cpdsurf.jets import evaluate_surface_jet
from cpdsurf.lorentz import causal_character, inner
from cpdsurf.presets import PRESETS, build_preset

ATANH_HALF = 0.549306144334054845697622618461
ACOTH_1_5 = 0.804718956217050187300379666613


def _setup(immersion, k, s, t):
    prob = CpdProblem(immersion, k)
    jet = evaluate_surface_jet(immersion, s, t)
    return prob, jet, fundamental_data(jet, immersion.orientation)


def test_tangential_projection_plane():
    prob, jet, fd = _setup(plane(), (1, 0, 0), 0.2, 0.1)
    U, uc = tangential_projection(prob.k, fd, jet)
    np.testing.assert_allclose(U, (1, 0, 0), atol=1e-15)
    np.testing.assert_allclose(uc, (1, 0), atol=1e-15)
    U, uc = tangential_projection(np.array([0.0, 0, 1]), fd, jet)
    np.testing.assert_allclose(U, 0, atol=1e-15)
    with pytest.raises(NormalDirection):
        cpd_residual(CpdProblem(plane(), (0, 0, 1)), 0.2, 0.1)


def test_bscroll_tangential_part_of_e1_is_light_like():
    # with k = (1,0,0), U is light-like exactly on the line s = 1
    x = bscroll((0.6, 2, -1, 1)).immersion
    prob, jet, fd = _setup(x, (1, 0, 0), 1.0, 0.0)
    U, _ = tangential_projection(prob.k, fd, jet)
    assert abs(inner(U, U)) <= 1e-10
    with pytest.raises(LightLikeU):
        angle_case(prob.k_character, fd, causal_character(U, 1e-9))


def test_bscroll_preset_direction_light_like_everywhere():
    spec = bscroll((0.6, 2, -1, 1))
    for s, t in [(0.7, -0.5), (1.3, 0.2), (1.9, 0.9)]:
        r = analyze_point(spec.problem(), s, t)
        assert abs(r.U_inner) <= 1e-10 and r.residual <= 1e-12 and r.cas_flag


def test_residual_examples():
    r = cpd_residual(CpdProblem(graph_counterexample((0.5, 1.3, 0.5, 1.3)).immersion, (1, 0, 0)), 1.0, 1.0)
    assert r.residual > 1e-3
    r = cpd_residual(CpdProblem(plane(), (1, 0, 0)), 0.3, -0.4)
    assert r.residual == 0.0 and r.cas_flag


def test_collinearity_residual_formula():
    S = np.array([[2.0, 1.0], [0.0, 3.0]])
    assert collinearity_residual(S, np.array([1.0, 0.0])) == 0.0
    u = np.array([0.0, 1.0])
    assert collinearity_residual(S, u) == pytest.approx(1 / math.sqrt(10))


@pytest.mark.parametrize("make, s, expected, case", [
    (lambda: spacelike_maximal(1, (-0.8, 0.8, -1, 1)), 0.5, -ATANH_HALF, AngleCase.SPACELIKE_SURFACE),
    (lambda: lorentzian_minimal(1, 1, (0.2, 2, -1, 1)), 1.0, math.pi / 4, AngleCase.LORENTZ_A),
    (lambda: lorentzian_minimal(2, 1, (1.2, 2.5, -1, 1)), 1.5, ACOTH_1_5, AngleCase.LORENTZ_B),
    (lambda: build_preset("lightlike-general"), 0.5, 2.5, AngleCase.LIGHTLIKE_K),
])
def test_recover_angle_examples(make, s, expected, case):
    spec = make()
    prob, jet, fd = _setup(spec.immersion, spec.k, s, 0.1)
    val, got = recover_angle(prob, fd, jet)
    assert got is case
    assert val == pytest.approx(expected, abs=1e-8)
    assert abs(analyze_point(prob, s, 0.1).e2_angle) <= 1e-6


def test_unsupported_time_like_direction():
    prob, jet, fd = _setup(lorentzian_plane(), (0, 0, 1), 0.1, 0.1)
    with pytest.raises(UnsupportedCausalCombination):
        recover_angle(prob, fd, jet)
    assert analyze_point(prob, 0.1, 0.1).angle is None


@pytest.mark.parametrize("name", [n for n, p in PRESETS.items() if not p.negative_control])
def test_scale_invariance_and_decomposition(name):
    spec = build_preset(name)
    ss, ts = cell_centres(spec.domain, 4, 4)
    for s in ss:
        for t in ts:
            base = analyze_point(spec.problem(), s, t)
            for lam in (0.5, 2.0, 10.0):
                r = analyze_point(CpdProblem(spec.immersion, lam * spec.k), s, t)
                assert abs(r.residual - base.residual) <= 1e-10
            jet = evaluate_surface_jet(spec.immersion, s, t)
            fd = fundamental_data(jet, spec.immersion.orientation)
            U, _ = tangential_projection(spec.k, fd, jet)
            rebuilt = U + fd.eps_N * inner(spec.k, fd.N) * fd.N
            np.testing.assert_allclose(rebuilt, spec.k, atol=1e-10)


def test_k1_and_second_principal_curvature_space_like_family():
    theta = "s^2/2 + 1"
    spec = spacelike_general(theta, "cos(t) + 2", (0.1, 1.2, -1, 1), s0=0.1)
    for s, t in [(0.3, 0.2), (0.8, -0.6), (1.1, 0.9)]:
        r = analyze_point(spec.problem(), s, t)
        th = s * s / 2 + 1
        assert r.k1_est == pytest.approx(s, abs=1e-6)            # theta'
        m = spec.metric(s, t)[2] ** 0.5                          # G = m^2, m > 0 here
        m_s = math.sinh(th)
        assert r.S[1, 1] == pytest.approx(m_s / (math.tanh(th) * m), abs=1e-6)


def test_geodesic_examples():
    assert geodesic_check(CpdProblem(plane(), (1, 0, 0)), (-0.5, 0.0), 1.0, 1e-2) <= 1e-14
    g = graph_counterexample((-0.6, 1.2, -0.6, 1.2))
    assert geodesic_check(g.problem(), (-0.5, 0.3), 1.0, 1e-3) > 1e-3
    sp = build_preset("spacelike-general")
    assert geodesic_check(sp.problem(), (0.15, 0.0), 1.0, 1e-3) <= 1e-6


def test_geodesic_errors():
    sp = build_preset("spacelike-flat")
    with pytest.raises(LeftDomain):
        geodesic_check(sp.problem(), (0.5, 0.0), 2.0, 1e-2)
    with pytest.raises(DegenerateU):
        geodesic_check(bscroll((0.6, 2, -1, 1)).problem(), (1.0, 0.0), 0.1, 1e-2)


def test_verify_grid_records_errors_without_aborting():
    rep = verify_grid(CpdProblem(plane(), (0, 0, 1)), 3, 4)
    assert rep.case_histogram == {"error:NormalDirection": 12}
    assert rep.n_errors == 12 and math.isnan(rep.max_residual)


def test_verify_grid_examples():
    rep = verify_grid(spacelike_maximal(1, (-0.8, 0.8, -1, 1)).problem(), 21, 21)
    assert rep.max_residual <= 1e-8 and rep.max_abs_H <= 1e-8
    assert len(rep.points) == 441
    rep = verify_grid(build_preset("lightlike-flat").problem())
    assert rep.max_abs_K <= 1e-8
    rep = verify_grid(graph_counterexample((-0.6, 1.2, -0.6, 1.2)).problem())
    assert rep.max_residual > 1e-3


def test_cell_centres_stay_inside():
    ss, ts = cell_centres((0, 1, -1, 1), 4, 3)
    np.testing.assert_allclose(ss, [0.125, 0.375, 0.625, 0.875])
    np.testing.assert_allclose(ts, [-2 / 3, 0, 2 / 3], atol=1e-15)
