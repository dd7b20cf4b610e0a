"""Constructors for the classified CPD surface families in E^3_1.

Every constructor returns a :class:`FamilySpec`: the immersion, the fixed
direction it is CPD relative to, and closed-form predictions (angle
function, diagonal of the shape operator in the (s, t) basis, metric
coefficients) used to cross-check the numerics.

Indefinite integrals of the profile functions are anchored at ``s0`` and
``t0`` (default: domain midpoints).  Moving an anchor translates the
surface, which does not change any verified quantity.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import jets
from .cpd import AngleCase, CpdProblem
from .errors import (ConfigError, DegenerateM, DomainViolation, NonpositiveC2,
                     VanishingPhi, VanishingPhiPrime, VanishingThetaPrime, ZeroC)
from .expr import Profile, parse_profile
from .geometry import ShapeCase
from .jets import Immersion
from .quadrature import IntegralTable

MARGIN_FRACTION = 0.05
TAU_NONZERO = 1e-6
N_CHECK = 201


@dataclass
class FamilySpec:
    family_id: str
    params: dict
    immersion: Immersion
    k: np.ndarray
    theorem: str
    angle: Callable[[float], float] | None = None
    angle_case: AngleCase | None = None
    shape_diag: Callable[[float, float], tuple[float, float]] | None = None
    metric: Callable[[float, float], tuple[float, float, float]] | None = None
    normal: Callable[[float, float], np.ndarray] | None = None
    flat: bool = False
    extremal: bool = False
    expected_case: ShapeCase = ShapeCase.DIAGONALIZABLE
    u_lightlike: bool = False
    notes: list[str] = field(default_factory=list)

    @property
    def domain(self) -> tuple[float, float, float, float]:
        return self.immersion.domain

    def problem(self) -> CpdProblem:
        return CpdProblem(self.immersion, self.k)


# helpers ------------------------------------------------------------------

def _profile(p) -> Profile:
    return p if isinstance(p, Profile) else parse_profile(p)


def _grid(lo: float, hi: float, n: int = N_CHECK) -> np.ndarray:
    return np.linspace(lo, hi, n)


def _margin(lo: float, hi: float) -> float:
    return MARGIN_FRACTION * (hi - lo)


def _mid(lo: float, hi: float) -> float:
    return 0.5 * (lo + hi)


def _check_domain(domain) -> tuple[float, float, float, float]:
    try:
        s_lo, s_hi, t_lo, t_hi = (float(v) for v in domain)
    except (TypeError, ValueError):
        raise ConfigError(f"domain must be four numbers, got {domain!r}") from None
    if not (s_lo < s_hi and t_lo < t_hi):
        raise ConfigError(f"empty domain {domain!r}")
    return s_lo, s_hi, t_lo, t_hi


def _anchor(value, lo, hi, name) -> float:
    a = _mid(lo, hi) if value is None else float(value)
    if not lo <= a <= hi:
        raise ConfigError(f"anchor {name}={a} outside [{lo}, {hi}]")
    return a


def _vanishes(values) -> bool:
    """True if sampled values come near zero or change sign."""
    v = np.asarray(values, dtype=float)
    return bool(np.min(np.abs(v)) <= TAU_NONZERO or (v.min() < 0.0 < v.max()))


def _theta_prime_nonvanishing(theta: Profile, lo: float, hi: float) -> None:
    d = np.array([theta.deriv(u) for u in _grid(lo, hi)])
    if _vanishes(d):
        raise VanishingThetaPrime(f"theta' vanishes on [{lo}, {hi}] (constant angle surface)")


def _sign(x: float) -> int:
    return 1 if x > 0 else -1


def _canonical_lorentz_angle(theta: float, circular: bool) -> float:
    """The angle as recovered with e1 = U/|U|: flipping e1 maps theta to -theta,
    so the recovered value lies in [0, pi] (circular) or [0, inf) (hyperbolic)."""
    if circular:
        return math.atan2(abs(math.sin(theta)), math.cos(theta))
    return abs(theta)


def _eval_profile(p: Profile, u: float, what: str) -> float:
    try:
        return jets.value(p(float(u)))
    except (jets.DomainViolation, ZeroDivisionError, ValueError, OverflowError) as exc:
        raise DomainViolation(f"{what} not evaluable at {u}: {exc}") from None


# space-like surfaces, k = (1, 0, 0) ------------------------------------------

def spacelike_general(theta, psi, domain, s0=None, t0=None) -> FamilySpec:
    theta, psi = _profile(theta), _profile(psi)
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    s0, t0 = _anchor(s0, s_lo, s_hi, "s0"), _anchor(t0, t_lo, t_hi, "t0")
    _theta_prime_nonvanishing(theta, s_lo, s_hi)
    A = IntegralTable(lambda u: jets.cosh(theta(u)), s_lo, s_hi, s0)
    B = IntegralTable(lambda u: jets.sinh(theta(u)), s_lo, s_hi, s0)
    g2 = IntegralTable(lambda u: psi(u) * jets.cosh(u), t_lo, t_hi, t0)
    g3 = IntegralTable(lambda u: psi(u) * jets.sinh(u), t_lo, t_hi, t0)

    def m(s, t):
        return B(s) + _eval_profile(psi, t, "psi")

    m_grid = np.array([[m(s, t) for t in _grid(t_lo, t_hi, 41)] for s in _grid(s_lo, s_hi, 41)])
    if _vanishes(m_grid):
        raise DegenerateM("m = int sinh(theta) + psi vanishes on the domain")

    def fn(s, t):
        b = B(s)
        return A(s), b * jets.sinh(t) + g2(t), b * jets.cosh(t) + g3(t)

    def shape_diag(s, t):
        th = theta(s)
        return theta.deriv(s), (1.0 / math.tanh(th)) * math.sinh(th) / m(s, t)

    return FamilySpec(
        "spacelike_general", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "spacelike_general"),
        np.array([1.0, 0.0, 0.0]),
        "space-like CPD surface relative to a space-like direction, general case",
        angle=lambda s: jets.value(theta(s)), angle_case=AngleCase.SPACELIKE_SURFACE,
        shape_diag=shape_diag, metric=lambda s, t: (1.0, 0.0, m(s, t) ** 2))


def spacelike_flat(theta, t_const, domain, s0=None) -> FamilySpec:
    theta = _profile(theta)
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    s0 = _anchor(s0, s_lo, s_hi, "s0")
    c0 = float(t_const)
    _theta_prime_nonvanishing(theta, s_lo, s_hi)
    A = IntegralTable(lambda u: jets.cosh(theta(u)), s_lo, s_hi, s0)
    B = IntegralTable(lambda u: jets.sinh(theta(u)), s_lo, s_hi, s0)
    ch, sh = math.cosh(c0), math.sinh(c0)

    def fn(s, t):
        b = B(s)
        return A(s), b * sh + t * ch, b * ch + t * sh

    return FamilySpec(
        "spacelike_flat", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "spacelike_flat"),
        np.array([1.0, 0.0, 0.0]),
        "flat space-like CPD surface relative to a space-like direction",
        angle=lambda s: jets.value(theta(s)), angle_case=AngleCase.SPACELIKE_SURFACE,
        shape_diag=lambda s, t: (theta.deriv(s), 0.0),
        metric=lambda s, t: (1.0, 0.0, 1.0), flat=True)


def spacelike_maximal(c, domain) -> FamilySpec:
    c = float(c)
    if c == 0.0:
        raise ZeroC("c must be non-zero")
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    if max(abs(s_lo), abs(s_hi)) > 1.0 / abs(c) - _margin(s_lo, s_hi):
        raise DomainViolation("maximal surface needs |s| <= 1/|c| - margin")

    def fn(s, t):
        r = jets.sqrt(1.0 - c * c * s * s)
        return jets.arcsin(c * s) / c, r * jets.sinh(t) / c, r * jets.cosh(t) / c

    def theta(s):
        return math.atanh(-c * s)

    def shape_diag(s, t):
        d = -c / (1.0 - c * c * s * s)
        return d, -d

    return FamilySpec(
        "spacelike_maximal", {},
        # x(s, t; -c) is x(s, t; c) reflected in (x2, x3), which flips the normal
        Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "spacelike_maximal", _sign(c)),
        np.array([1.0, 0.0, 0.0]),
        "maximal space-like CPD surface, theta(s) = arctanh(-c s)",
        angle=theta, angle_case=AngleCase.SPACELIKE_SURFACE, shape_diag=shape_diag,
        metric=lambda s, t: (1.0, 0.0, (1.0 - c * c * s * s) / (c * c)),
        extremal=True)


# Lorentzian surfaces, k space-like -----------------------------------------

def bscroll(domain) -> FamilySpec:
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    if s_lo < 0.5 + _margin(s_lo, s_hi):
        raise DomainViolation("B-scroll needs s > 1/2 + margin")

    def fn(s, t):
        return s * s / 2 + t, (2 * s - 1) ** 1.5 / 3, s * s / 2 - s + t

    # The tangential part of a space-like k is the null ruling x_t only for
    # k orthogonal to (1, 0, 1); (0, 1, 0) is such a direction.
    return FamilySpec(
        "bscroll", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "bscroll"),
        np.array([0.0, 1.0, 0.0]),
        "flat minimal B-scroll: the non-diagonalizable branch (k_1 = 0)",
        metric=lambda s, t: (4.0 * s - 2.0, 1.0, 0.0),
        flat=True, extremal=True, expected_case=ShapeCase.NULL, u_lightlike=True)


def lorentzian_family(variant, theta, psi_or_t0, domain, s0=None, t0=None) -> FamilySpec:
    variant = int(variant)
    if variant not in (1, 2, 3, 4):
        raise ConfigError(f"variant must be 1..4, got {variant}")
    theta = _profile(theta)
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    s0 = _anchor(s0, s_lo, s_hi, "s0")
    _theta_prime_nonvanishing(theta, s_lo, s_hi)
    th = np.array([_eval_profile(theta, u, "theta") for u in _grid(s_lo, s_hi)])
    circular = variant in (1, 2)
    if circular:
        if _vanishes(np.sin(th)) or _vanishes(np.cos(th)):
            raise DomainViolation("sin(theta) and cos(theta) must not vanish")
        P = IntegralTable(lambda u: jets.sin(theta(u)), s_lo, s_hi, s0)   # along k
        Q = IntegralTable(lambda u: jets.cos(theta(u)), s_lo, s_hi, s0)
    else:
        if _vanishes(th):
            raise DomainViolation("theta must not vanish (k would be normal)")
        P = IntegralTable(lambda u: -jets.sinh(theta(u)), s_lo, s_hi, s0)
        Q = IntegralTable(lambda u: jets.cosh(theta(u)), s_lo, s_hi, s0)
    dom = (s_lo, s_hi, t_lo, t_hi)
    name = f"lorentzian_family_{variant}"
    orientation = 1 if circular else -1
    k = np.array([1.0, 0.0, 0.0])

    if variant in (1, 3):
        psi = _profile(psi_or_t0)
        t0 = _anchor(t0, t_lo, t_hi, "t0")
        if variant == 1:
            g2 = IntegralTable(lambda u: psi(u) * jets.sinh(u), t_lo, t_hi, t0)
            g3 = IntegralTable(lambda u: psi(u) * jets.cosh(u), t_lo, t_hi, t0)

            def fn(s, t):
                q = Q(s)
                return P(s), q * jets.cosh(t) + g2(t), q * jets.sinh(t) + g3(t)
        else:
            g2 = IntegralTable(lambda u: psi(u) * jets.cosh(u), t_lo, t_hi, t0)
            g3 = IntegralTable(lambda u: psi(u) * jets.sinh(u), t_lo, t_hi, t0)

            def fn(s, t):
                q = Q(s)
                return P(s), q * jets.sinh(t) + g2(t), q * jets.cosh(t) + g3(t)

        def m(s, t):
            return Q(s) + _eval_profile(psi, t, "psi")

        m_grid = np.array([[m(s, t) for t in _grid(t_lo, t_hi, 41)] for s in _grid(s_lo, s_hi, 41)])
        if _vanishes(m_grid):
            raise DegenerateM("m vanishes on the domain")

        if variant == 1:
            def shape_diag(s, t):
                a = theta(s)
                return theta.deriv(s), math.tan(a) * math.cos(a) / m(s, t)

            def metric(s, t):
                return 1.0, 0.0, -m(s, t) ** 2
        else:
            def shape_diag(s, t):
                a = theta(s)
                return theta.deriv(s), math.tanh(a) * math.cosh(a) / m(s, t)

            def metric(s, t):
                return -1.0, 0.0, m(s, t) ** 2
        flat = False
    else:
        c0 = float(psi_or_t0)
        ch, sh = math.cosh(c0), math.sinh(c0)
        if variant == 2:
            def fn(s, t):
                q = Q(s)
                return P(s), q * ch + t * sh, q * sh + t * ch

            def metric(s, t):
                return 1.0, 0.0, -1.0
        else:
            def fn(s, t):
                q = Q(s)
                return P(s), q * sh + t * ch, q * ch + t * sh

            def metric(s, t):
                return -1.0, 0.0, 1.0

        def shape_diag(s, t):
            return theta.deriv(s), 0.0
        flat = True

    return FamilySpec(
        name, {}, Immersion(fn, dom, name, orientation), k,
        f"Lorentzian CPD surface with diagonalizable shape operator, case ({variant})",
        angle=lambda s: _canonical_lorentz_angle(jets.value(theta(s)), circular),
        angle_case=AngleCase.LORENTZ_A if circular else AngleCase.LORENTZ_B,
        shape_diag=shape_diag, metric=metric, flat=flat)


def lorentzian_minimal(variant, c, domain) -> FamilySpec:
    variant, c = int(variant), float(c)
    if variant not in (1, 2):
        raise ConfigError(f"variant must be 1 or 2, got {variant}")
    if c == 0.0:
        raise ZeroC("c must be non-zero")
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    dom = (s_lo, s_hi, t_lo, t_hi)
    k = np.array([1.0, 0.0, 0.0])
    if variant == 1:
        def fn(s, t):
            r = jets.sqrt(c * c * s * s + 1.0)
            return jets.arcsinh(c * s) / c, r * jets.cosh(t) / c, r * jets.sinh(t) / c

        return FamilySpec(
            "lorentzian_minimal_1", {}, Immersion(fn, dom, "lorentzian_minimal_1", _sign(c)), k,
            "minimal Lorentzian CPD surface, theta(s) = arccot(c s)",
            angle=lambda s: jets.arccot(c * s), angle_case=AngleCase.LORENTZ_A,
            shape_diag=lambda s, t: (-c / (1 + c * c * s * s), c / (1 + c * c * s * s)),
            metric=lambda s, t: (1.0, 0.0, -(c * c * s * s + 1.0) / (c * c)),
            extremal=True)
    if min(c * s_lo, c * s_hi) <= 1.0 or \
            min(abs(s_lo - 1.0 / c), abs(s_hi - 1.0 / c)) < _margin(s_lo, s_hi):
        raise DomainViolation("second minimal surface needs c s > 1, at least a margin away from s = 1/c")

    def fn(s, t):
        r = jets.sqrt(c * c * s * s - 1.0)
        return -jets.log(r + c * s) / c, r * jets.sinh(t) / c, r * jets.cosh(t) / c

    return FamilySpec(
        "lorentzian_minimal_2", {}, Immersion(fn, dom, "lorentzian_minimal_2", -_sign(c)), k,
        "minimal Lorentzian CPD surface, theta(s) = arccoth(c s)",
        angle=lambda s: jets.arccoth(c * s), angle_case=AngleCase.LORENTZ_B,
        shape_diag=lambda s, t: (-c / (c * c * s * s - 1), c / (c * c * s * s - 1)),
        metric=lambda s, t: (-1.0, 0.0, (c * c * s * s - 1.0) / (c * c)),
        extremal=True)


# light-like direction k = (1, 0, 1) ---------------------------------------

def _check_phi(phi: Profile, lo: float, hi: float) -> None:
    vals = np.array([_eval_profile(phi, u, "phi") for u in _grid(lo, hi)])
    if _vanishes(vals):
        raise VanishingPhi("phi vanishes on the domain")
    d = np.array([phi.deriv(u) for u in _grid(lo, hi)])
    if _vanishes(d):
        raise VanishingPhiPrime("phi' vanishes on the domain (constant angle surface)")


def _check_eps(eps) -> int:
    eps = int(eps)
    if eps not in (-1, 1):
        raise ConfigError(f"eps must be -1 or 1, got {eps}")
    return eps


def lightlike_general(phi, gamma0, b, eps, domain, s0=None, t0=None) -> FamilySpec:
    phi, gamma0, b = _profile(phi), _profile(gamma0), _profile(b)
    eps = _check_eps(eps)
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    s0, t0 = _anchor(s0, s_lo, s_hi, "s0"), _anchor(t0, t_lo, t_hi, "t0")
    _check_phi(phi, s_lo, s_hi)
    ts = _grid(t_lo, t_hi)
    rad = 1.0 - 2.0 * eps * np.array([_eval_profile(gamma0, u, "gamma0") for u in ts])
    if np.min(rad) <= _margin(t_lo, t_hi):
        raise DomainViolation("1 - 2 eps gamma0 must stay positive (with margin)")
    bv = np.array([_eval_profile(b, u, "b") for u in ts])
    g0p = np.array([gamma0.deriv(u) for u in ts])
    den = np.sqrt(rad)[None, :] * bv[None, :] + _grid(s_lo, s_hi)[:, None] * g0p[None, :]
    if _vanishes(den):
        raise DegenerateM("sqrt(1 - 2 eps gamma0) b + s gamma0' vanishes on the domain")

    P = IntegralTable(lambda u: 1.0 / (2.0 * phi(u) * phi(u)), s_lo, s_hi, s0)
    R = IntegralTable(lambda u: b(u) * jets.sqrt(1.0 - 2.0 * eps * gamma0(u)), t_lo, t_hi, t0)
    Bt = IntegralTable(lambda u: b(u) * 1.0, t_lo, t_hi, t0)

    def fn(s, t):
        p, g0, r = P(s), gamma0(t), R(t)
        return (p + s * g0 + r,
                s * jets.sqrt(1.0 - 2.0 * eps * g0) - eps * Bt(t),
                p + s * (g0 - eps) + r)

    def shape_diag(s, t):
        g0 = jets.value(gamma0(t))
        g0p = gamma0.deriv(t)
        f = jets.value(phi(s))
        return (eps * phi.deriv(s),
                eps * f * g0p / (math.sqrt(1.0 - 2.0 * eps * g0) * jets.value(b(t)) + s * g0p))

    def metric(s, t):
        g0 = jets.value(gamma0(t))
        root = math.sqrt(1.0 - 2.0 * eps * g0)
        G = (root * jets.value(b(t)) + s * gamma0.deriv(t)) / root
        return eps / jets.value(phi(s)) ** 2, 0.0, G * G

    def normal(s, t):
        f, g0 = jets.value(phi(s)), jets.value(gamma0(t))
        root = math.sqrt(1.0 - 2.0 * eps * g0)
        return np.array([eps / (2 * f) - eps * f * g0,
                         -eps * f * root,
                         -eps * f * g0 + eps / (2 * f) + f])

    return FamilySpec(
        "lightlike_general", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "lightlike_general"),
        np.array([1.0, 0.0, 1.0]),
        "CPD surface relative to a light-like direction, diagonalizable shape operator",
        angle=lambda s: jets.value(phi(s)), angle_case=AngleCase.LIGHTLIKE_K,
        shape_diag=shape_diag, metric=metric, normal=normal)


def lightlike_flat(phi, c, eps, domain, s0=None) -> FamilySpec:
    phi = _profile(phi)
    c, eps = float(c), _check_eps(eps)
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    s0 = _anchor(s0, s_lo, s_hi, "s0")
    _check_phi(phi, s_lo, s_hi)
    if 1.0 - 2.0 * c * eps <= _margin(t_lo, t_hi):
        raise DomainViolation("1 - 2 c eps must be positive (with margin)")
    root = math.sqrt(1.0 - 2.0 * c * eps)
    P = IntegralTable(lambda u: 1.0 / (2.0 * phi(u) * phi(u)), s_lo, s_hi, s0)

    def fn(s, t):
        p = P(s)
        return c * s + root * t + p, -eps * t + s * root, s * (c - eps) + root * t + p

    return FamilySpec(
        "lightlike_flat", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "lightlike_flat"),
        np.array([1.0, 0.0, 1.0]),
        "flat CPD surface relative to a light-like direction",
        angle=lambda s: jets.value(phi(s)), angle_case=AngleCase.LIGHTLIKE_K,
        shape_diag=lambda s, t: (eps * phi.deriv(s), 0.0),
        metric=lambda s, t: (eps / jets.value(phi(s)) ** 2, 0.0, 1.0), flat=True)


def lightlike_extremal(c1, c2, eps, domain) -> FamilySpec:
    """Minimal (eps = -1) or maximal (eps = +1) member of the light-like family.

    Obtained from the general family with gamma0(t) = t,
    b(t) = -c1 / sqrt(1 - 2 eps t) and phi(s) = sqrt(c2 / 6) / (s - c1),
    which makes the shape operator trace-free.
    """
    c1, c2, eps = float(c1), float(c2), _check_eps(eps)
    if c2 <= 0.0:
        raise NonpositiveC2("c2 must be positive")
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)
    # the branch line is t = eps / 2
    if min(1.0 - 2.0 * eps * t_lo, 1.0 - 2.0 * eps * t_hi) <= 0.0 or \
            min(abs(t_lo - eps / 2.0), abs(t_hi - eps / 2.0)) < _margin(t_lo, t_hi):
        raise DomainViolation("1 - 2 eps t must stay positive, a margin away from t = eps/2")
    if s_lo <= c1 <= s_hi or min(abs(s_lo - c1), abs(s_hi - c1)) <= TAU_NONZERO:
        raise VanishingPhi("s = c1 is a singular line of the surface")

    def fn(s, t):
        u = s - c1
        cube = u * u * u / c2
        return cube + u * t, u * jets.sqrt(1.0 - 2.0 * eps * t), cube + u * t - eps * s

    scale = math.sqrt(c2 / 6.0)

    def phi(s):
        return scale / (s - c1)

    def shape_diag(s, t):
        d = -eps * scale / (s - c1) ** 2
        return d, -d

    return FamilySpec(
        "lightlike_extremal", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "lightlike_extremal"),
        np.array([1.0, 0.0, 1.0]),
        "minimal (eps=-1) / maximal (eps=+1) CPD surface relative to a light-like direction",
        angle=phi, angle_case=AngleCase.LIGHTLIKE_K, shape_diag=shape_diag,
        metric=lambda s, t: (eps * (s - c1) ** 2 / scale ** 2, 0.0, (s - c1) ** 2 / (1.0 - 2.0 * eps * t)),
        extremal=True)


# fixtures that are not CPD families ----------------------------------------

def graph_counterexample(domain) -> FamilySpec:
    """The graph (s, t, s t / 2): not CPD relative to (1, 0, 0)."""
    s_lo, s_hi, t_lo, t_hi = _check_domain(domain)

    def fn(s, t):
        return s, t, s * t / 2

    return FamilySpec(
        "graph_counterexample", {}, Immersion(fn, (s_lo, s_hi, t_lo, t_hi), "graph_counterexample"),
        np.array([1.0, 0.0, 0.0]), "negative control: not a CPD surface")


def plane(domain=(-1.0, 1.0, -1.0, 1.0)) -> Immersion:
    return Immersion(lambda s, t: (s, t, 0.0), domain, "plane")


def lorentzian_plane(domain=(-1.0, 1.0, -1.0, 1.0)) -> Immersion:
    return Immersion(lambda s, t: (s, 0.0, t), domain, "lorentzian_plane")
