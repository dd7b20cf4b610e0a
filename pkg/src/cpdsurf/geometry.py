"""Pointwise extrinsic geometry of a surface in E^3_1.

Conventions: N is the normalized Lorentzian cross product x_s ^ x_t
(times the immersion's orientation), L_ij = <x_ij, N>, and the shape
operator in the coordinate basis is S = g^{-1} L, which is what the
Weingarten formula dN(X) = -S(X) forces.  Mean curvature is reported both
as trace S and as trace S / 2; K = det S.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMetric, LightLikeNormal
from .jets import Jet2, SurfaceJet, sqrt as jsqrt
from .lorentz import inner, lorentz_cross

TAU_METRIC = 1e-9


class SurfaceType(enum.Enum):
    SPACELIKE = "SpaceLike"
    TIMELIKE = "TimeLike"
    DEGENERATE = "Degenerate"


class ShapeCase(enum.Enum):
    DIAGONALIZABLE = "CaseI_Diagonalizable"
    NULL = "CaseII_Null"
    COMPLEX = "CaseIII_Complex"


@dataclass(frozen=True)
class FirstFundamentalForm:
    E: float
    F: float
    G: float
    det_g: float
    surface_type: SurfaceType

    @property
    def matrix(self) -> np.ndarray:
        return np.array([[self.E, self.F], [self.F, self.G]])


@dataclass(frozen=True)
class FundamentalData:
    g: FirstFundamentalForm
    N: np.ndarray
    eps_N: int
    L11: float
    L12: float
    L22: float

    @property
    def L(self) -> np.ndarray:
        return np.array([[self.L11, self.L12], [self.L12, self.L22]])


@dataclass(frozen=True)
class ShapeClassification:
    S: np.ndarray
    case: ShapeCase
    # CaseI: {"k": (k1, k2), "directions": (d1, d2)}
    # CaseII: {"k1", "null_direction", "mu", "frame"}
    # CaseIII: {"k1", "nu"}
    principal: dict = field(default_factory=dict)


@dataclass(frozen=True)
class CurvatureInvariants:
    H_trace: float
    H_mean: float
    K: float
    flat: bool
    extremal: bool
    extremal_name: str   # "maximal" for space-like, "minimal" for time-like


def _metric_scale(E, F, G) -> float:
    return max(1.0, (abs(E) + 2.0 * abs(F) + abs(G)) ** 2 / 4.0)


def first_form(jet: SurfaceJet, tau_metric: float = TAU_METRIC) -> FirstFundamentalForm:
    E = inner(jet.x_s, jet.x_s)
    F = inner(jet.x_s, jet.x_t)
    G = inner(jet.x_t, jet.x_t)
    det = E * G - F * F
    if abs(det) <= tau_metric * _metric_scale(E, F, G):
        raise DegenerateMetric(f"det g = {det:g}")
    if det < 0:
        kind = SurfaceType.TIMELIKE
    elif E > 0:
        kind = SurfaceType.SPACELIKE
    else:
        raise DegenerateMetric("negative definite induced metric is impossible in E^3_1")
    return FirstFundamentalForm(float(E), float(F), float(G), float(det), kind)


def unit_normal(jet: SurfaceJet, orientation: int = 1,
                tau_metric: float = TAU_METRIC) -> tuple[np.ndarray, int]:
    first_form(jet, tau_metric)
    n = lorentz_cross(jet.x_s, jet.x_t)
    q = inner(n, n)
    # |<n, n>| equals |det g|, so a light-like n means a degenerate metric
    if abs(q) <= tau_metric * max(float(np.dot(n, n)), 1.0):
        raise LightLikeNormal("normal is light-like")
    eps = 1 if q > 0 else -1
    return orientation * n / math.sqrt(abs(q)), eps


def fundamental_data(jet: SurfaceJet, orientation: int = 1,
                     tau_metric: float = TAU_METRIC) -> FundamentalData:
    g = first_form(jet, tau_metric)
    N, eps = unit_normal(jet, orientation, tau_metric)
    return FundamentalData(g, N, eps,
                           float(inner(jet.x_ss, N)),
                           float(inner(jet.x_st, N)),
                           float(inner(jet.x_tt, N)))


def _null_directions(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """The two null coordinate directions of a Lorentzian 2x2 metric."""
    E, F, G = g[0, 0], g[0, 1], g[1, 1]
    root = math.sqrt(F * F - E * G)
    if abs(E) >= abs(G):
        # E a^2 + 2 F a + G = 0 with direction (a, 1)
        return np.array([(-F + root) / E, 1.0]), np.array([(-F - root) / E, 1.0])
    # E + 2 F b + G b^2 = 0 with direction (1, b)
    return np.array([1.0, (-F + root) / G]), np.array([1.0, (-F - root) / G])


def _eigvec(S: np.ndarray, k: float) -> np.ndarray:
    a, b, c, d = S[0, 0], S[0, 1], S[1, 0], S[1, 1]
    cands = [np.array([b, k - a]), np.array([k - d, c])]
    v = max(cands, key=lambda w: float(np.hypot(*w)))
    return v / np.hypot(*v)


def _frame_in(g: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """A g-orthonormal pair of coordinate vectors (Gram-Schmidt)."""
    e1 = np.array([1.0, 0.0]) / math.sqrt(abs(g[0, 0])) if abs(g[0, 0]) > 1e-12 \
        else np.array([1.0, 1.0]) / math.sqrt(abs(g[0, 0] + 2 * g[0, 1] + g[1, 1]))
    q1 = e1 @ g @ e1
    e2 = np.array([0.0, 1.0]) if abs(e1[1]) < abs(e1[0]) else np.array([1.0, 0.0])
    e2 = e2 - (e2 @ g @ e1) / q1 * e1
    return e1, e2 / math.sqrt(abs(e2 @ g @ e2))


def shape_operator(jet: SurfaceJet, fd: FundamentalData,
                   tau_eig: float = 1e-7) -> ShapeClassification:
    g = fd.g.matrix
    S = np.linalg.solve(g, fd.L)
    return classify(S, g, tau_eig)


def classify(S: np.ndarray, g: np.ndarray, tau_eig: float = 1e-7) -> ShapeClassification:
    norm_s = float(np.linalg.norm(S))
    tol = tau_eig * (1.0 + norm_s)
    tr, det = float(np.trace(S)), float(np.linalg.det(S))
    D = tr * tr - 4.0 * det
    half = 0.5 * tr
    scalar = float(np.linalg.norm(S - half * np.eye(2))) <= tol

    if scalar:
        e1, e2 = _frame_in(g)
        return ShapeClassification(S, ShapeCase.DIAGONALIZABLE,
                                   {"k": (half, half), "directions": (e1, e2)})
    if D > tol:
        r = math.sqrt(D)
        k1, k2 = half + 0.5 * r, half - 0.5 * r
        return ShapeClassification(S, ShapeCase.DIAGONALIZABLE,
                                   {"k": (k1, k2), "directions": (_eigvec(S, k1), _eigvec(S, k2))})
    if D < -tol:
        return ShapeClassification(S, ShapeCase.COMPLEX,
                                   {"k1": half, "nu": 0.5 * math.sqrt(-D)})

    # single real eigenvalue, not scalar: (S - k1) is nilpotent of rank one
    nil = S - half * np.eye(2)
    v = _eigvec(S, half)
    principal = {"k1": half, "null_direction": v, "mu": float("nan"), "frame": None}
    if g[0, 0] * g[1, 1] - g[0, 1] ** 2 < 0:
        # pseudo-orthonormal frame: e1 along the eigendirection, e2 the
        # other null direction scaled so that <e1, e2> = -1
        n1, n2 = _null_directions(g)
        w = n2 if abs(n1[0] * v[1] - n1[1] * v[0]) < abs(n2[0] * v[1] - n2[1] * v[0]) else n1
        e1 = v
        e2 = -w / float(e1 @ g @ w)
        Se2 = nil @ e2
        principal["mu"] = float(Se2 @ e1 / (e1 @ e1))
        principal["frame"] = (e1, e2)
    return ShapeClassification(S, ShapeCase.NULL, principal)


def curvatures(sc: ShapeClassification, surface_type: SurfaceType | None = None,
               tau: float = 1e-8) -> CurvatureInvariants:
    tol = tau * (1.0 + float(np.linalg.norm(sc.S)))
    H = float(np.trace(sc.S))
    K = float(np.linalg.det(sc.S))
    name = "maximal" if surface_type is SurfaceType.SPACELIKE else "minimal"
    return CurvatureInvariants(H, 0.5 * H, K, abs(K) <= tol, abs(H) <= tol, name)


def normal_jet(jet: SurfaceJet, orientation: int = 1) -> tuple[Jet2, ...]:
    """Unit normal as first-order jets: value N, partials N_s and N_t."""
    xs, xt = jet.first_order_frame()
    n = lorentz_cross(xs, xt)
    q = inner(n, n)
    scale = jsqrt(q if q.v > 0 else -q)
    return tuple(orientation * c / scale for c in n)


def weingarten_defect(jet: SurfaceJet, fd: FundamentalData, sc: ShapeClassification,
                      orientation: int = 1) -> float:
    """max |dN(d_i) + S(d_i)| over the two coordinate directions."""
    Nj = normal_jet(jet, orientation)
    Ns = np.array([c.s for c in Nj])
    Nt = np.array([c.t for c in Nj])
    S = sc.S
    S_xs = S[0, 0] * jet.x_s + S[1, 0] * jet.x_t
    S_xt = S[0, 1] * jet.x_s + S[1, 1] * jet.x_t
    return float(max(np.max(np.abs(Ns + S_xs)), np.max(np.abs(Nt + S_xt))))
