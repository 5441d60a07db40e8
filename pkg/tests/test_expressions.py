import math

import numpy as np
import pytest

from foliated_dirac.expressions import Expression, ExpressionError, parse_number


def test_constant_and_pi():
    assert Expression.parse("2*pi")() == pytest.approx(2.0 * math.pi, abs=0.0)
    assert parse_number("pi/2") == pytest.approx(math.pi / 2)
    assert parse_number(3) == 3.0


def test_time_and_space_variables():
    e = Expression.parse("1 + 0.3*sin(t)")
    t = np.linspace(0, 2 * math.pi, 7)
    assert np.allclose(e(t=t), 1 + 0.3 * np.sin(t))
    f = Expression.parse("cos(x1)*exp(x2)")
    x1 = np.array([0.0, 1.0])
    x2 = np.array([0.0, 2.0])
    assert np.allclose(f(x=(x1, x2)), np.cos(x1) * np.exp(x2))


def test_x_aliases_x1():
    assert Expression.parse("cos(x)")(x=(np.array([0.5]),)) == pytest.approx(np.cos(0.5))


def test_broadcasting_of_constants():
    e = Expression.parse("2")
    out = e(t=np.zeros(5))
    assert out.shape == (5,)
    assert np.all(out == 2.0)


def test_pow_both_forms():
    assert Expression.parse("pow(t, 2)")(t=3.0) == pytest.approx(9.0)
    assert Expression.parse("t**2")(t=3.0) == pytest.approx(9.0)


def test_derivatives_are_exact():
    e = Expression.parse("exp(2*t)*cos(x1)")
    t = np.array([0.3])
    x = (np.array([0.7]),)
    assert e.diff("t")(t=t, x=x) == pytest.approx(2 * np.exp(0.6) * np.cos(0.7))
    assert e.diff("x1")(t=t, x=x) == pytest.approx(-np.exp(0.6) * np.sin(0.7))
    assert Expression.parse("1").diff("t").is_constant


@pytest.mark.parametrize("bad", [
    "__import__('os')",
    "open('x')",
    "t.bit_length()",
    "lambda: 1",
    "[1, 2]",
    "t if 1 else 2",
    "y + 1",
    "sin(t, 1)",
    "tan(t)",
    "'str'",
    "t < 1",
])
def test_rejects_outside_grammar(bad):
    with pytest.raises(ExpressionError):
        Expression.parse(bad)


def test_nonconstant_rejected_as_number():
    with pytest.raises(ExpressionError):
        parse_number("2*t")


def test_variables_listing():
    e = Expression.parse("sin(t) + cos(x2)")
    assert e.variables == ("t", "x2")
    assert e.depends_on("t") and e.depends_on("x2") and not e.depends_on("x1")
