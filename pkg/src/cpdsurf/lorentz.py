"""Linear algebra of Minkowski 3-space E^3_1.

Vectors are plain length-3 sequences (usually ``numpy`` arrays) with x3 the
time coordinate; the metric has signature (+, +, -).  ``inner`` and
``lorentz_cross`` only use indexing and arithmetic, so they also accept
sequences of :class:`cpdsurf.jets.Jet2` scalars.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import (DegenerateSpan, LightLikeInput, MixedTimeOrientation,
                     ZeroVector)

TAU_CAUSAL = 1e-10


def vec(x1, x2, x3) -> np.ndarray:
    return np.array([x1, x2, x3], dtype=float)


def inner(v, w):
    """Lorentzian inner product x1*y1 + x2*y2 - x3*y3."""
    return v[0] * w[0] + v[1] * w[1] - v[2] * w[2]


def lorentz_cross(v, w):
    """The vector u with inner(u, z) == det[z, v, w] for every z."""
    u = (v[1] * w[2] - v[2] * w[1],
         v[2] * w[0] - v[0] * w[2],
         -(v[0] * w[1] - v[1] * w[0]))
    if isinstance(v, np.ndarray) and isinstance(w, np.ndarray):
        return np.array(u, dtype=float)
    return u


class Causal(enum.Enum):
    SPACELIKE = "SpaceLike"
    TIMELIKE = "TimeLike"
    LIGHTLIKE = "LightLike"


class TimeOrientation(enum.Enum):
    FUTURE = "FuturePointing"
    PAST = "PastPointing"


@dataclass(frozen=True)
class CausalCharacter:
    tag: Causal
    orientation: TimeOrientation | None = None

    def __str__(self) -> str:
        if self.orientation is None:
            return self.tag.value
        return f"{self.tag.value}/{self.orientation.value}"


def causal_character(v, tau: float = TAU_CAUSAL) -> CausalCharacter:
    """Classify ``v`` by the sign of inner(v, v).

    The light-cone test is relative to the Euclidean size of ``v`` so the
    answer does not change when ``v`` is rescaled.
    """
    v = np.asarray(v, dtype=float)
    scale = float(np.dot(v, v))
    if math.sqrt(scale) <= tau:
        raise ZeroVector(f"zero vector {v!r}")
    q = inner(v, v)
    if q > tau * scale:
        return CausalCharacter(Causal.SPACELIKE)
    if q < -tau * scale:
        orient = TimeOrientation.FUTURE if v[2] > 0 else TimeOrientation.PAST
        return CausalCharacter(Causal.TIMELIKE, orient)
    return CausalCharacter(Causal.LIGHTLIKE)


def norm(v) -> float:
    return math.sqrt(abs(inner(v, v)))


def normalize(v, tau: float = TAU_CAUSAL) -> tuple[np.ndarray, int]:
    """Return ``(v / sqrt|<v,v>|, sign <v,v>)``."""
    v = np.asarray(v, dtype=float)
    q = inner(v, v)
    if abs(q) <= tau * max(float(np.dot(v, v)), tau):
        raise LightLikeInput(f"cannot normalize light-like vector {v!r}")
    return v / math.sqrt(abs(q)), (1 if q > 0 else -1)


class AngleKind(enum.Enum):
    SPACELIKE_PAIR = "SpacelikePair"    # space-like vectors, space-like span
    TIMELIKE_SPAN = "TimelikeSpan"      # space-like vectors, time-like span
    TIMELIKE_PAIR = "TimelikePair"      # equally oriented time-like vectors
    MIXED = "Mixed"                     # one space-like, one time-like


@dataclass(frozen=True)
class LorentzAngle:
    value: float
    kind: AngleKind


def lorentz_angle(v, w, tau: float = TAU_CAUSAL) -> LorentzAngle:
    """Angle between two non-light-like vectors.

    Uses arccos for a space-like pair spanning a space-like plane, arccosh
    for a space-like pair spanning a time-like plane and for an equally
    oriented time-like pair, and arcsinh for a mixed pair.  A mixed pair
    with a past-pointing time-like member is handled like the
    future-pointing one since only |<v, w>| enters.
    """
    v = np.asarray(v, dtype=float)
    w = np.asarray(w, dtype=float)
    cv, cw = causal_character(v, tau), causal_character(w, tau)
    if Causal.LIGHTLIKE in (cv.tag, cw.tag):
        raise LightLikeInput("angle undefined for light-like vectors")
    nv, nw = norm(v), norm(w)
    ratio = abs(inner(v, w)) / (nv * nw)

    if cv.tag is Causal.TIMELIKE and cw.tag is Causal.TIMELIKE:
        if cv.orientation is not cw.orientation:
            raise MixedTimeOrientation("time-like pair with opposite time orientation")
        return LorentzAngle(math.acosh(max(ratio, 1.0)), AngleKind.TIMELIKE_PAIR)

    if cv.tag is Causal.SPACELIKE and cw.tag is Causal.SPACELIKE:
        # Gram determinant of span{v, w}: > 0 space-like plane, < 0 time-like
        gram = inner(v, v) * inner(w, w) - inner(v, w) ** 2
        if abs(gram) <= tau * (nv * nw) ** 2:
            raise DegenerateSpan("space-like pair spans a light-like plane")
        if gram > 0:
            return LorentzAngle(math.acos(min(ratio, 1.0)), AngleKind.SPACELIKE_PAIR)
        return LorentzAngle(math.acosh(max(ratio, 1.0)), AngleKind.TIMELIKE_SPAN)

    return LorentzAngle(math.asinh(ratio), AngleKind.MIXED)
