import math

import numpy as np
import pytest

from qpfmaps.core.errors import ConfigurationError, ExpressionSyntaxError
from qpfmaps.core.family.expression import parse_expression

ENV = {"theta": 0.25, "x": 0.5, "beta": 0.5, "alpha": 2.0, "omega": 0.1}

EXPRESSION_CASES = {
    "1 + 2*3": 7.0,
    "(1 + 2)*3": 9.0,
    "2^3^2": 512.0,
    "-2^2": -4.0,
    "8/4/2": 1.0,
    "1 - 2 - 3": -4.0,
    "sin(2*pi*theta)": 1.0,
    "arctan(alpha*x)": math.atan(1.0),
    "exp(log(alpha))": 2.0,
    "alpha*x - beta*(1 + cos(2*pi*theta))": 0.5,
    "omega + pi": 0.1 + math.pi,
}


@pytest.mark.parametrize("raw,expected", EXPRESSION_CASES.items(), ids=list(EXPRESSION_CASES))
def test_evaluate(raw, expected):
    assert parse_expression(raw).evaluate(ENV) == pytest.approx(expected, abs=1e-12)


def test_vectorised():
    expr = parse_expression("arctan(alpha*x) - 2*beta")
    xs = np.linspace(0, 1, 5)
    out = expr.evaluate(dict(ENV, x=xs))
    assert out == pytest.approx(np.arctan(2 * xs) - 1.0)


def test_names():
    expr = parse_expression("a*x + b*cos(2*pi*theta)", parameters={"a", "b"})
    assert expr.names() == {"a", "b", "x", "theta"}


@pytest.mark.parametrize("raw", ["1 +", "sin(x", "x ** 2", "2*(x"])
def test_syntax_error(raw):
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression(raw)
    # syntax errors are configuration errors for the command line
    assert isinstance(info.value, ConfigurationError)
    assert "ExpressionSyntaxError" in repr(info.value)


def test_unknown_name():
    with pytest.raises(ExpressionSyntaxError) as info:
        parse_expression("gamma*x")
    assert "gamma" in str(info.value)
