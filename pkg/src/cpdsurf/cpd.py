"""Canonical principal direction (CPD) analysis.

A surface has a CPD relative to a constant vector k when the tangential
part U of k is an eigenvector of the shape operator.  This module measures
that property pointwise, recovers the angle function of the decomposition
of k into tangential and normal parts, and checks that integral curves of
e_1 = U / |U| are geodesics.
"""
from __future__ import annotations

import enum
import math
from collections import Counter
from dataclasses import dataclass, field

import numpy as np

from . import jets
from .errors import (CpdError, DegenerateU, LeftDomain, LightLikeU,
                     NormalDirection, UnsupportedCausalCombination)
from .geometry import (FundamentalData, SurfaceType, curvatures,
                       fundamental_data, normal_jet, shape_operator)
from .jets import Immersion, Jet2, SurfaceJet, evaluate_surface_jet
from .lorentz import Causal, CausalCharacter, causal_character, inner

TAU_U = 1e-9
TAU_CAS = 1e-7
TAU_DEN = 1e-300


class AngleCase(enum.Enum):
    SPACELIKE_SURFACE = "spacelike_surface"   # k = cosh(th) e1 + sinh(th) N
    LORENTZ_A = "lorentzian_spacelike_e1"     # k = sin(th) e1 + cos(th) N
    LORENTZ_B = "lorentzian_timelike_e1"      # k = sinh(th) e1 + cosh(th) N
    LIGHTLIKE_K = "lightlike_k"               # k = phi (e1 - N)


@dataclass
class CpdProblem:
    surface: Immersion
    k: np.ndarray
    k_character: CausalCharacter = field(init=False)

    def __post_init__(self):
        self.k = np.asarray(self.k, dtype=float)
        self.k_character = causal_character(self.k)


@dataclass
class CpdPointReport:
    point: tuple[float, float]
    U: np.ndarray | None = None
    U_coords: np.ndarray | None = None
    U_character: CausalCharacter | None = None
    U_inner: float = float("nan")
    residual: float = float("nan")
    k1_est: float = float("nan")
    angle: tuple[float, AngleCase] | None = None
    e2_angle: float = float("nan")
    cas_flag: bool = False
    H_trace: float = float("nan")
    K: float = float("nan")
    S: np.ndarray | None = None
    case: str | None = None
    surface_type: str | None = None
    metric: tuple[float, float, float] | None = None
    error: str | None = None

    @property
    def ok(self) -> bool:
        return self.error is None


def tangential_projection(k, fd: FundamentalData, jet: SurfaceJet) -> tuple[np.ndarray, np.ndarray]:
    """U = k - <N,N><k,N> N, with its coordinates in the basis (x_s, x_t)."""
    k = np.asarray(k, dtype=float)
    U = k - fd.eps_N * inner(k, fd.N) * fd.N
    rhs = np.array([inner(k, jet.x_s), inner(k, jet.x_t)])
    return U, np.linalg.solve(fd.g.matrix, rhs)


def collinearity_residual(S: np.ndarray, u: np.ndarray) -> float:
    """|det[S u, u]| / (|S u| |u|), zero when u is an eigenvector of S."""
    Su = S @ u
    return abs(Su[0] * u[1] - Su[1] * u[0]) / (math.hypot(*Su) * math.hypot(*u) + TAU_DEN)


def _angle_expr(k, N, eps_N: int, case: AngleCase):
    """Angle (or phi) from k and N; works on floats or first-order jets."""
    kN = inner(k, N)
    if case is AngleCase.LIGHTLIKE_K:
        # phi is taken relative to the normal in which the shape operator is
        # diag(eps phi', ...); for space-like surfaces that is minus the normal
        # of the decomposition k = phi (e1 - N)
        return -kN
    if case is AngleCase.SPACELIKE_SURFACE:
        return jets.arcsinh(-kN)
    U = tuple(k[i] - eps_N * kN * N[i] for i in range(3))
    uu = inner(U, U)
    if case is AngleCase.LORENTZ_A:
        return jets.arctan2(jets.sqrt(uu), kN)
    return jets.arcsinh(jets.sqrt(-uu))


def angle_case(k_character: CausalCharacter, fd: FundamentalData,
               U_character: CausalCharacter) -> AngleCase:
    if k_character.tag is Causal.LIGHTLIKE:
        return AngleCase.LIGHTLIKE_K
    if k_character.tag is not Causal.SPACELIKE:
        raise UnsupportedCausalCombination(f"fixed direction is {k_character}")
    if fd.g.surface_type is SurfaceType.SPACELIKE:
        return AngleCase.SPACELIKE_SURFACE
    if U_character.tag is Causal.LIGHTLIKE:
        raise LightLikeU("tangential part of k is light-like (non-diagonalizable branch)")
    if U_character.tag is Causal.SPACELIKE:
        return AngleCase.LORENTZ_A
    return AngleCase.LORENTZ_B


def recover_angle(prob: CpdProblem, fd: FundamentalData, jet: SurfaceJet) -> tuple[float, AngleCase]:
    U, _ = tangential_projection(prob.k, fd, jet)
    case = angle_case(prob.k_character, fd, _u_character(U))
    return float(_angle_expr(prob.k, fd.N, fd.eps_N, case)), case


def angle_along_e2(prob: CpdProblem, fd: FundamentalData, jet: SurfaceJet, case: AngleCase) -> float:
    """Derivative of the recovered angle along the unit direction g-orthogonal to U."""
    N = normal_jet(jet, prob.surface.orientation)
    th = _angle_expr(prob.k, N, fd.eps_N, case)
    b = np.array([inner(prob.k, jet.x_s), inner(prob.k, jet.x_t)])
    w = np.array([-b[1], b[0]])
    w = w / math.sqrt(abs(w @ fd.g.matrix @ w))
    return float(w[0] * th.s + w[1] * th.t)


def _u_character(U: np.ndarray) -> CausalCharacter:
    return causal_character(U, 1e-9)


def analyze_point(prob: CpdProblem, s: float, t: float, jet: SurfaceJet | None = None,
                  tau_cas: float = TAU_CAS) -> CpdPointReport:
    """Full pointwise record; raises on degenerate input."""
    jet = jet if jet is not None else evaluate_surface_jet(prob.surface, s, t)
    fd = fundamental_data(jet, prob.surface.orientation)
    sc = shape_operator(jet, fd)
    curv = curvatures(sc, fd.g.surface_type)
    U, uc = tangential_projection(prob.k, fd, jet)
    rep = CpdPointReport((s, t), U=U, U_coords=uc, S=sc.S, case=sc.case.value,
                         surface_type=fd.g.surface_type.value,
                         metric=(fd.g.E, fd.g.F, fd.g.G),
                         H_trace=curv.H_trace, K=curv.K, U_inner=float(inner(U, U)))
    if math.hypot(*uc) <= TAU_U * max(1.0, float(np.linalg.norm(prob.k))):
        raise NormalDirection(f"k is normal to the surface at ({s}, {t})")
    rep.U_character = _u_character(U)
    rep.residual = collinearity_residual(sc.S, uc)
    rep.k1_est = float((sc.S @ uc) @ uc / (uc @ uc))
    rep.cas_flag = abs(rep.k1_est) <= tau_cas
    try:
        case = angle_case(prob.k_character, fd, rep.U_character)
        rep.angle = (float(_angle_expr(prob.k, fd.N, fd.eps_N, case)), case)
        rep.e2_angle = angle_along_e2(prob, fd, jet, case)
    except CpdError:
        rep.angle = None
    return rep


def cpd_residual(prob: CpdProblem, s: float, t: float) -> CpdPointReport:
    return analyze_point(prob, s, t)


# geodesic characterization ---------------------------------------------

def _e1_coords(prob: CpdProblem, jet: SurfaceJet) -> np.ndarray:
    E, F, G = inner(jet.x_s, jet.x_s), inner(jet.x_s, jet.x_t), inner(jet.x_t, jet.x_t)
    g = np.array([[E, F], [F, G]])
    u = np.linalg.solve(g, [inner(prob.k, jet.x_s), inner(prob.k, jet.x_t)])
    q = u @ g @ u
    if abs(q) <= TAU_U * max(1.0, float(u @ u)):
        raise DegenerateU("tangential part of k is light-like or zero")
    return u / math.sqrt(abs(q))


def tangential_acceleration(prob: CpdProblem, jet: SurfaceJet) -> np.ndarray:
    """Tangential part of D_{e1} e1, i.e. the intrinsic nabla_{e1} e1, as an ambient vector."""
    xs, xt = jet.first_order_frame()
    E, F, G = inner(xs, xs), inner(xs, xt), inner(xt, xt)
    bs, bt = inner(prob.k, xs), inner(prob.k, xt)
    det = E * G - F * F
    us, ut = (G * bs - F * bt) / det, (E * bt - F * bs) / det
    q = E * us * us + 2.0 * F * us * ut + G * ut * ut
    if abs(q.v) <= TAU_U * max(1.0, us.v ** 2 + ut.v ** 2):
        raise DegenerateU("tangential part of k is light-like or zero")
    nrm = jets.sqrt(q if q.v > 0 else -q)
    es, et = us / nrm, ut / nrm
    E1 = [xs[i] * es + xt[i] * et for i in range(3)]
    acc = np.array([es.v * c.s + et.v * c.t for c in E1])
    fd = fundamental_data(jet, prob.surface.orientation)
    return acc - fd.eps_N * inner(acc, fd.N) * fd.N


def geodesic_check(prob: CpdProblem, start: tuple[float, float], arclen: float = 1.0,
                   step: float = 1e-3) -> float:
    """Follow the integral curve of e1 with RK4; return max |nabla_{e1} e1|."""
    surf = prob.surface

    def field_at(p):
        if not surf.contains(p[0], p[1]):
            raise LeftDomain(f"trajectory left the domain at {tuple(p)}")
        return _e1_coords(prob, evaluate_surface_jet(surf, p[0], p[1]))

    def accel_at(p):
        return float(np.linalg.norm(tangential_acceleration(prob, evaluate_surface_jet(surf, p[0], p[1]))))

    p = np.array(start, dtype=float)
    n = max(1, int(round(arclen / step)))
    h = arclen / n
    worst = accel_at(p)
    for _ in range(n):
        k1 = field_at(p)
        k2 = field_at(p + 0.5 * h * k1)
        k3 = field_at(p + 0.5 * h * k2)
        k4 = field_at(p + h * k3)
        p = p + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if not surf.contains(p[0], p[1]):
            raise LeftDomain(f"trajectory left the domain at {tuple(p)}")
        worst = max(worst, accel_at(p))
    return worst


# grid verification --------------------------------------------------------

@dataclass
class CpdReport:
    points: list[CpdPointReport]
    max_residual: float
    max_abs_H: float
    max_abs_K: float
    case_histogram: dict[str, int]
    n_errors: int

    def to_dict(self) -> dict:
        return {
            "max_residual": self.max_residual,
            "max_abs_H": self.max_abs_H,
            "max_abs_K": self.max_abs_K,
            "case_histogram": dict(sorted(self.case_histogram.items())),
            "n_points": len(self.points),
            "n_errors": self.n_errors,
        }


def cell_centres(domain, n_s: int, n_t: int) -> tuple[np.ndarray, np.ndarray]:
    s0, s1, t0, t1 = domain
    us = (np.arange(n_s) + 0.5) / n_s
    ut = (np.arange(n_t) + 0.5) / n_t
    # convex combination keeps the midpoint of a symmetric interval exact
    ss = s0 * (1.0 - us) + s1 * us
    ts = t0 * (1.0 - ut) + t1 * ut
    return ss, ts


def verify_grid(prob: CpdProblem, n_s: int = 21, n_t: int = 21, domain=None) -> CpdReport:
    """Analyze every cell centre; per-point failures are recorded, never raised."""
    ss, ts = cell_centres(domain or prob.surface.domain, n_s, n_t)
    points = []
    for s in ss:
        for t in ts:
            try:
                points.append(analyze_point(prob, float(s), float(t)))
            except CpdError as exc:
                points.append(CpdPointReport((float(s), float(t)), error=type(exc).__name__))
    good = [p for p in points if p.ok]

    def worst(vals):
        vals = [abs(v) for v in vals if not math.isnan(v)]
        return max(vals) if vals else float("nan")

    return CpdReport(points,
                     worst(p.residual for p in good),
                     worst(p.H_trace for p in good),
                     worst(p.K for p in good),
                     dict(Counter(p.case if p.ok else f"error:{p.error}" for p in points)),
                     len(points) - len(good))
