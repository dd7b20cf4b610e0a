import math

import pytest

from cpdsurf.expr import ExpressionError, parse_profile
from cpdsurf.jets import Jet2


@pytest.mark.parametrize("text, u, expected", [
    ("s+1", 0.5, 1.5),
    ("2*t^2 - 1", 3.0, 17.0),
    ("2*t**2 - 1", 3.0, 17.0),
    ("-x", 2.0, -2.0),
    ("sinh(u)/cosh(u)", 0.3, math.tanh(0.3)),
    ("arctanh(-s)", 0.5, -0.549306144334054845697622618461),
    ("arccot(s)", 1.0, math.pi / 4),
    ("pow(s, 3)", 2.0, 8.0),
    ("pi*e", 0.0, math.pi * math.e),
    ("sqrt(1 - s^2)", 0.6, 0.8),
    ("3", 9.0, 3.0),
])
def test_values(text, u, expected):
    assert parse_profile(text)(u) == pytest.approx(expected, abs=1e-15)


def test_numbers_give_constants():
    p = parse_profile(2.5)
    assert p(7.0) == 2.5 and p.deriv(7.0) == 0.0


def test_jet_derivatives():
    p = parse_profile("s^3 + sin(s)")
    assert p.deriv(0.5) == pytest.approx(3 * 0.25 + math.cos(0.5), abs=1e-15)
    assert p.deriv2(0.5) == pytest.approx(6 * 0.5 - math.sin(0.5), abs=1e-15)
    j = p(Jet2.seed_s(0.5))
    assert isinstance(j, Jet2)


@pytest.mark.parametrize("text", [
    "", "s +", "s + t", "__import__('os')", "s.real", "gamma(s)", "sin", "[s]",
    "lambda s: s", "sin(s, s)", "s if s else 1", "f(s)",
])
def test_rejected(text):
    with pytest.raises(ExpressionError):
        parse_profile(text)
