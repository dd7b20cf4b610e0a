"""Second-order forward-mode differentiation of parametric immersions.

A :class:`Jet2` carries a value together with its first and second partial
derivatives with respect to the two surface parameters ``s`` and ``t``.
Arithmetic on jets is truncated Taylor algebra, so evaluating an immersion
once on seeded jets yields x, x_s, x_t, x_ss, x_st and x_tt exactly (up to
rounding).  :func:`finite_difference_jet` is the independent oracle.

The elementary functions in this module accept either plain floats or
jets, which lets the same immersion code serve both routes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DomainViolation, OutOfDomain

TAU_DOM = 1e-9


class Jet2:
    __slots__ = ("v", "s", "t", "ss", "st", "tt")

    def __init__(self, v, s=0.0, t=0.0, ss=0.0, st=0.0, tt=0.0):
        self.v = float(v)
        self.s = float(s)
        self.t = float(t)
        self.ss = float(ss)
        self.st = float(st)
        self.tt = float(tt)

    @classmethod
    def seed_s(cls, s: float) -> Jet2:
        return cls(s, 1.0)

    @classmethod
    def seed_t(cls, t: float) -> Jet2:
        return cls(t, 0.0, 1.0)

    def astuple(self) -> tuple[float, ...]:
        return (self.v, self.s, self.t, self.ss, self.st, self.tt)

    def __repr__(self) -> str:
        return "Jet2(v={}, s={}, t={}, ss={}, st={}, tt={})".format(*self.astuple())

    def chain(self, f0: float, f1: float, f2: float) -> Jet2:
        """Compose a scalar function with value f0, slope f1, curvature f2."""
        return Jet2(f0,
                    f1 * self.s,
                    f1 * self.t,
                    f2 * self.s * self.s + f1 * self.ss,
                    f2 * self.s * self.t + f1 * self.st,
                    f2 * self.t * self.t + f1 * self.tt)

    # arithmetic -------------------------------------------------------
    def __add__(self, o):
        if isinstance(o, Jet2):
            return Jet2(self.v + o.v, self.s + o.s, self.t + o.t,
                        self.ss + o.ss, self.st + o.st, self.tt + o.tt)
        return Jet2(self.v + o, self.s, self.t, self.ss, self.st, self.tt)

    __radd__ = __add__

    def __neg__(self):
        return Jet2(-self.v, -self.s, -self.t, -self.ss, -self.st, -self.tt)

    def __pos__(self):
        return self

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if isinstance(o, Jet2):
            a, b = self, o
            return Jet2(a.v * b.v,
                        a.v * b.s + a.s * b.v,
                        a.v * b.t + a.t * b.v,
                        a.v * b.ss + 2.0 * a.s * b.s + a.ss * b.v,
                        a.v * b.st + a.s * b.t + a.t * b.s + a.st * b.v,
                        a.v * b.tt + 2.0 * a.t * b.t + a.tt * b.v)
        o = float(o)
        return Jet2(self.v * o, self.s * o, self.t * o,
                    self.ss * o, self.st * o, self.tt * o)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet2:
        if self.v == 0.0:
            raise ZeroDivisionError("jet division by zero")
        r = 1.0 / self.v
        return self.chain(r, -r * r, 2.0 * r * r * r)

    def __truediv__(self, o):
        if isinstance(o, Jet2):
            return self * o.reciprocal()
        return self * (1.0 / float(o))

    def __rtruediv__(self, o):
        return self.reciprocal() * o

    def __pow__(self, p):
        if isinstance(p, Jet2):
            return exp(p * log(self))
        p = float(p)
        if p == int(p):
            n = int(p)
            if n == 0:
                return Jet2(1.0)
            if n == 1:
                return self
            if n < 0 and self.v == 0.0:
                raise ZeroDivisionError("jet division by zero")
            x = self.v
            return self.chain(x ** n, n * x ** (n - 1), n * (n - 1) * x ** (n - 2))
        x = self.v
        if x <= TAU_DOM:
            raise DomainViolation(f"x**{p} needs x > 0, got {x}")
        return self.chain(x ** p, p * x ** (p - 1), p * (p - 1) * x ** (p - 2))

    def __rpow__(self, base):
        return exp(self * math.log(float(base)))

    def __float__(self):
        return self.v


Scalar = float | Jet2


def value(x) -> float:
    return x.v if isinstance(x, Jet2) else float(x)


def _need(ok: bool, msg: str) -> None:
    if not ok:
        raise DomainViolation(msg)


# elementary functions --------------------------------------------------
# Each takes a float or a Jet2.  Jets must stay TAU_DOM inside the domain
# because derivatives blow up at the branch points.

def sin(x):
    if isinstance(x, Jet2):
        sv, cv = math.sin(x.v), math.cos(x.v)
        return x.chain(sv, cv, -sv)
    return math.sin(x)


def cos(x):
    if isinstance(x, Jet2):
        sv, cv = math.sin(x.v), math.cos(x.v)
        return x.chain(cv, -sv, -cv)
    return math.cos(x)


def tan(x):
    if isinstance(x, Jet2):
        tv = math.tan(x.v)
        sec2 = 1.0 + tv * tv
        return x.chain(tv, sec2, 2.0 * tv * sec2)
    return math.tan(x)


def sinh(x):
    if isinstance(x, Jet2):
        sv, cv = math.sinh(x.v), math.cosh(x.v)
        return x.chain(sv, cv, sv)
    return math.sinh(x)


def cosh(x):
    if isinstance(x, Jet2):
        sv, cv = math.sinh(x.v), math.cosh(x.v)
        return x.chain(cv, sv, cv)
    return math.cosh(x)


def tanh(x):
    if isinstance(x, Jet2):
        tv = math.tanh(x.v)
        sech2 = 1.0 - tv * tv
        return x.chain(tv, sech2, -2.0 * tv * sech2)
    return math.tanh(x)


def exp(x):
    if isinstance(x, Jet2):
        e = math.exp(x.v)
        return x.chain(e, e, e)
    return math.exp(x)


def log(x):
    if isinstance(x, Jet2):
        _need(x.v > TAU_DOM, f"log of non-positive {x.v}")
        r = 1.0 / x.v
        return x.chain(math.log(x.v), r, -r * r)
    _need(x > 0, f"log of non-positive {x}")
    return math.log(x)


def sqrt(x):
    if isinstance(x, Jet2):
        _need(x.v > TAU_DOM, f"sqrt of non-positive {x.v}")
        r = math.sqrt(x.v)
        return x.chain(r, 0.5 / r, -0.25 / (r * x.v))
    _need(x >= 0, f"sqrt of negative {x}")
    return math.sqrt(x)


def arcsin(x):
    if isinstance(x, Jet2):
        _need(abs(x.v) < 1.0 - TAU_DOM, f"arcsin outside (-1, 1): {x.v}")
        q = 1.0 - x.v * x.v
        d1 = 1.0 / math.sqrt(q)
        return x.chain(math.asin(x.v), d1, x.v * d1 / q)
    _need(abs(x) <= 1.0, f"arcsin outside [-1, 1]: {x}")
    return math.asin(x)


def arccos(x):
    if isinstance(x, Jet2):
        _need(abs(x.v) < 1.0 - TAU_DOM, f"arccos outside (-1, 1): {x.v}")
        q = 1.0 - x.v * x.v
        d1 = 1.0 / math.sqrt(q)
        return x.chain(math.acos(x.v), -d1, -x.v * d1 / q)
    _need(abs(x) <= 1.0, f"arccos outside [-1, 1]: {x}")
    return math.acos(x)


def arctan(x):
    if isinstance(x, Jet2):
        q = 1.0 + x.v * x.v
        return x.chain(math.atan(x.v), 1.0 / q, -2.0 * x.v / (q * q))
    return math.atan(x)


def arccot(x):
    """Inverse cotangent with range (0, pi), continuous through x = 0."""
    if isinstance(x, Jet2):
        q = 1.0 + x.v * x.v
        return x.chain(0.5 * math.pi - math.atan(x.v), -1.0 / q, 2.0 * x.v / (q * q))
    return 0.5 * math.pi - math.atan(x)


def arcsinh(x):
    if isinstance(x, Jet2):
        q = 1.0 + x.v * x.v
        d1 = 1.0 / math.sqrt(q)
        return x.chain(math.asinh(x.v), d1, -x.v * d1 / q)
    return math.asinh(x)


def arccosh(x):
    if isinstance(x, Jet2):
        _need(x.v > 1.0 + TAU_DOM, f"arccosh needs x > 1, got {x.v}")
        q = x.v * x.v - 1.0
        d1 = 1.0 / math.sqrt(q)
        return x.chain(math.acosh(x.v), d1, -x.v * d1 / q)
    _need(x >= 1.0, f"arccosh needs x >= 1, got {x}")
    return math.acosh(x)


def arctanh(x):
    if isinstance(x, Jet2):
        _need(abs(x.v) < 1.0 - TAU_DOM, f"arctanh outside (-1, 1): {x.v}")
        q = 1.0 - x.v * x.v
        return x.chain(math.atanh(x.v), 1.0 / q, 2.0 * x.v / (q * q))
    _need(abs(x) < 1.0, f"arctanh outside (-1, 1): {x}")
    return math.atanh(x)


def arccoth(x):
    if isinstance(x, Jet2):
        _need(abs(x.v) > 1.0 + TAU_DOM, f"arccoth needs |x| > 1, got {x.v}")
        q = 1.0 - x.v * x.v
        return x.chain(math.atanh(1.0 / x.v), 1.0 / q, 2.0 * x.v / (q * q))
    _need(abs(x) > 1.0, f"arccoth needs |x| > 1, got {x}")
    return math.atanh(1.0 / x)


def power(x, p):
    if isinstance(x, Jet2) or isinstance(p, Jet2):
        if not isinstance(x, Jet2):
            return Jet2(x) ** p
        return x ** p
    if p != int(p):
        _need(x >= 0, f"fractional power of negative {x}")
    return float(x) ** p


ELEMENTARY: dict[str, Callable] = {
    "sin": sin, "cos": cos, "tan": tan,
    "sinh": sinh, "cosh": cosh, "tanh": tanh,
    "exp": exp, "log": log, "sqrt": sqrt,
    "arcsin": arcsin, "arccos": arccos, "arctan": arctan, "arccot": arccot,
    "arcsinh": arcsinh, "arccosh": arccosh, "arctanh": arctanh, "arccoth": arccoth,
}


def jet_elementary(f: Jet2, fn: str, *args) -> Jet2:
    """Apply the elementary function called ``fn`` (or ``power``) to a jet."""
    if fn == "power":
        return power(f, *args)
    try:
        func = ELEMENTARY[fn]
    except KeyError:
        raise ValueError(f"unknown elementary function {fn!r}") from None
    return func(f)


# immersions --------------------------------------------------------------

@dataclass(frozen=True)
class SurfaceJet:
    position: np.ndarray
    x_s: np.ndarray
    x_t: np.ndarray
    x_ss: np.ndarray
    x_st: np.ndarray
    x_tt: np.ndarray

    def first_order_frame(self) -> tuple[tuple[Jet2, ...], tuple[Jet2, ...]]:
        """x_s and x_t as jets whose first partials are the second derivatives.

        Only the first-order parts are meaningful; quantities built from
        these (normal, tangential projection of k, e_1) come out with their
        correct first partials, which is what the Weingarten and geodesic
        checks need.
        """
        xs = tuple(Jet2(self.x_s[i], self.x_ss[i], self.x_st[i]) for i in range(3))
        xt = tuple(Jet2(self.x_t[i], self.x_st[i], self.x_tt[i]) for i in range(3))
        return xs, xt


class Immersion:
    """A map (s, t) -> E^3_1 on a parameter rectangle.

    ``fn`` must accept floats or :class:`Jet2` arguments and return three
    scalars of either kind.  ``orientation`` (+1 or -1) multiplies the
    cross-product normal.
    """

    def __init__(self, fn: Callable, domain: tuple[float, float, float, float],
                 name: str = "", orientation: int = 1):
        s0, s1, t0, t1 = map(float, domain)
        if not (s0 < s1 and t0 < t1):
            raise ValueError(f"empty domain {domain}")
        self.fn = fn
        self.domain = (s0, s1, t0, t1)
        self.name = name
        self.orientation = 1 if orientation >= 0 else -1

    def __repr__(self) -> str:
        return f"Immersion({self.name!r}, domain={self.domain})"

    def contains(self, s: float, t: float, pad: float = 0.0) -> bool:
        s0, s1, t0, t1 = self.domain
        return s0 + pad <= s <= s1 - pad and t0 + pad <= t <= t1 - pad

    def position(self, s: float, t: float) -> np.ndarray:
        return np.array([value(c) for c in self.fn(float(s), float(t))], dtype=float)

    __call__ = position


def _components(c) -> tuple[float, ...]:
    if isinstance(c, Jet2):
        return c.astuple()
    return (float(c), 0.0, 0.0, 0.0, 0.0, 0.0)


def evaluate_surface_jet(x: Immersion, s: float, t: float) -> SurfaceJet:
    if not x.contains(s, t):
        raise OutOfDomain(f"({s}, {t}) outside {x.domain}")
    comps = np.array([_components(c) for c in x.fn(Jet2.seed_s(s), Jet2.seed_t(t))])
    return SurfaceJet(*(comps[:, j].copy() for j in range(6)))


_D1 = np.array([1.0, -8.0, 0.0, 8.0, -1.0]) / 12.0
_D2 = np.array([-1.0, 16.0, -30.0, 16.0, -1.0]) / 12.0


def finite_difference_jet(x: Immersion, s: float, t: float, h: float = 1e-4) -> SurfaceJet:
    """Fourth-order central differences on a 5x5 stencil of spacing ``h``."""
    if not x.contains(s, t, pad=2.0 * h):
        raise OutOfDomain(f"stencil around ({s}, {t}) with h={h} leaves {x.domain}")
    offs = np.arange(-2, 3) * h
    vals = np.empty((5, 5, 3))
    for i, ds in enumerate(offs):
        for j, dt in enumerate(offs):
            vals[i, j] = x.position(s + ds, t + dt)
    centre = vals[2, 2]
    x_s = np.tensordot(_D1, vals[:, 2], axes=1) / h
    x_t = np.tensordot(_D1, vals[2, :], axes=1) / h
    x_ss = np.tensordot(_D2, vals[:, 2], axes=1) / h ** 2
    x_tt = np.tensordot(_D2, vals[2, :], axes=1) / h ** 2
    x_st = np.einsum("i,j,ijk->k", _D1, _D1, vals) / h ** 2
    return SurfaceJet(centre, x_s, x_t, x_ss, x_st, x_tt)


def arctan2(y, x):
    """atan2 on floats or jets (value in (-pi, pi])."""
    if not (isinstance(y, Jet2) or isinstance(x, Jet2)):
        return math.atan2(y, x)
    y = y if isinstance(y, Jet2) else Jet2(y)
    x = x if isinstance(x, Jet2) else Jet2(x)
    if x.v == 0.0 and y.v == 0.0:
        raise DomainViolation("arctan2(0, 0)")
    # any branch gives the right derivatives; the value is fixed up below
    j = arctan(y / x) if abs(x.v) >= abs(y.v) else -arctan(x / y)
    j.v = math.atan2(y.v, x.v)
    return j
