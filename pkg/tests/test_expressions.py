import math

import numpy as np
import pytest

from secmeasure import EvaluationFailure, ExprSyntaxError, UnknownFunction
from secmeasure.expressions import evaluate, parse


def test_precedence_and_value():
    e = parse("1+2*3^2")
    assert e.evaluate(0.0) == 19.0


def test_power_right_associative():
    assert parse("2^3^2").evaluate(0.0) == 512.0


def test_unary_minus():
    assert parse("-x^2").evaluate(3.0) == 9.0  # (-x)^2
    assert parse("3--2").evaluate(0.0) == 5.0


def test_functions():
    x = 0.37
    cases = {
        "sqrt(x)": math.sqrt(x),
        "ln(x)": math.log(x),
        "exp(x)": math.exp(x),
        "sin(x)+cos(x)": math.sin(x) + math.cos(x),
        "atan(x)": math.atan(x),
        "abs(-x)": x,
    }
    for src, want in cases.items():
        assert abs(parse(src).evaluate(x) - want) < 1e-15


def test_vectorized_evaluation():
    xs = np.linspace(0.1, 2.0, 7)
    got = parse("x^2/(1+x)").evaluate(xs)
    np.testing.assert_allclose(got, xs ** 2 / (1 + xs), rtol=1e-15)


def test_canonical_round_trip():
    e = parse("2*x - 1/(x+3)")
    again = parse(e.canonical())
    xs = np.linspace(-2, 2, 11)
    np.testing.assert_allclose(e.evaluate(xs), again.evaluate(xs), rtol=0)


def test_equality_ignores_whitespace():
    assert parse("x + 1") == parse("x+1")
    assert hash(parse("x + 1")) == hash(parse("x+1"))
    assert parse("x+1") != parse("x+2")


def test_syntax_error_reports_offset():
    with pytest.raises(ExprSyntaxError) as exc:
        parse("1/(x")
    assert exc.value.offset == 4
    assert ")" in exc.value.expected


def test_unknown_function():
    with pytest.raises(UnknownFunction) as exc:
        parse("foo(x)")
    assert "sqrt" in exc.value.expected


def test_empty_expression():
    with pytest.raises(ExprSyntaxError):
        parse("   ")


def test_trailing_garbage():
    with pytest.raises(ExprSyntaxError):
        parse("x+1 )")


def test_nonfinite_evaluation():
    with pytest.raises(EvaluationFailure):
        parse("1/x").evaluate(0.0)
    with pytest.raises(EvaluationFailure):
        parse("ln(x)").evaluate(-1.0)


def test_evaluate_helper():
    assert evaluate(parse("x*x"), 4.0) == 16.0
