"""Adaptive quadrature and memoized antiderivatives for profile integrals."""
from __future__ import annotations

import math
import warnings
from typing import Callable

import numpy as np
from scipy import integrate as _spi
from scipy.interpolate import BPoly

from .errors import NoConvergence, OutOfDomain
from .jets import Jet2, value

MAX_SUBDIVISIONS = 200


def integrate(f: Callable[[float], float], a: float, b: float, tol: float = 1e-12) -> float:
    """Adaptive Gauss-Kronrod estimate of the integral of ``f`` over [a, b]."""
    if a == b:
        return 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("error", _spi.IntegrationWarning)
        try:
            val, err = _spi.quad(f, a, b, epsabs=tol, epsrel=0.0, limit=MAX_SUBDIVISIONS)
        except _spi.IntegrationWarning as exc:
            raise NoConvergence(str(exc)) from None
    if not math.isfinite(val) or err > tol:
        raise NoConvergence(f"estimated error {err:g} exceeds tol {tol:g}")
    return float(val)


class IntegralTable:
    """The antiderivative F(u) = int_{anchor}^{u} f, tabulated on [lo, hi].

    ``f`` must accept floats and :class:`Jet2`.  Node values come from
    :func:`integrate` on consecutive sub-intervals; between nodes F is the
    quintic Hermite interpolant through (F, f, f'), so it is C^2 and the
    interpolation error is O(h^6).  On jets, first and second derivatives
    are exact: F' = f and F'' = f'.
    """

    def __init__(self, f: Callable, lo: float, hi: float, anchor: float,
                 max_step: float = 5e-3, tol: float = 1e-13):
        if not lo <= anchor <= hi:
            raise ValueError(f"anchor {anchor} outside [{lo}, {hi}]")
        self.f = f
        self.lo, self.hi, self.anchor = float(lo), float(hi), float(anchor)
        n = max(16, int(math.ceil((hi - lo) / max_step)))
        nodes = np.unique(np.concatenate([np.linspace(lo, hi, n + 1), [anchor]]))
        pieces = [integrate(lambda u: value(f(u)), a, b, tol) for a, b in zip(nodes[:-1], nodes[1:])]
        F = np.concatenate([[0.0], np.cumsum(pieces)])
        F -= F[int(np.searchsorted(nodes, anchor))]
        derivs = [self._slopes(u) for u in nodes]
        self._poly = BPoly.from_derivatives(
            nodes, [[Fi, d1, d2] for Fi, (d1, d2) in zip(F, derivs)])
        self.nodes = nodes

    def _slopes(self, u: float) -> tuple[float, float]:
        j = self.f(Jet2.seed_s(u))
        if isinstance(j, Jet2):
            return j.v, j.s
        return float(j), 0.0

    def __call__(self, u):
        u0 = value(u)
        if not self.lo - 1e-12 <= u0 <= self.hi + 1e-12:
            raise OutOfDomain(f"{u0} outside table range [{self.lo}, {self.hi}]")
        F = float(self._poly(u0))
        if not isinstance(u, Jet2):
            return F
        f1, f2 = self._slopes(u0)
        return u.chain(F, f1, f2)
