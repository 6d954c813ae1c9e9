"""Potential expression language: parsing, differentiation, evaluation."""

import math

import numpy as np
import pytest

from heatinv.potentials import (DERIVATIVE_CAP, DerivativeCapError,
                                PotentialEvalError, PotentialSyntaxError,
                                differentiate, evaluate, evaluate_array,
                                parse_potential)


class TestParsing:
    def test_precedence_and_associativity(self):
        e = parse_potential("1 + 2 * x1 ^ 2", 1)
        assert evaluate(e, (3.0,)) == 19.0
        e = parse_potential("2 - 1 - 1", 1)
        assert evaluate(e, (0.0,)) == 0.0
        e = parse_potential("-x1^2", 1)
        assert evaluate(e, (2.0,)) == -4.0

    def test_functions_and_pi(self):
        e = parse_potential("exp(-x1^2) + sin(pi * x2)", 2)
        assert evaluate(e, (0.0, 0.5)) == pytest.approx(2.0)

    def test_powr(self):
        e = parse_potential("powr(1 + x1^2, -1, 6)", 1)
        assert evaluate(e, (1.0,)) == pytest.approx(2.0 ** (-1 / 6))

    def test_round_trip(self):
        src = "powr(1 + x1^2, -1, 6) + (1/3) * tanh(x1) - sqrt(2)"
        e = parse_potential(src, 1)
        again = parse_potential(e.to_text(), 1)
        assert again.to_text() == e.to_text()
        for x in (-1.5, 0.0, 0.7):
            assert evaluate(again, (x,)) == pytest.approx(evaluate(e, (x,)))

    def test_syntax_errors_carry_offset(self):
        with pytest.raises(PotentialSyntaxError) as exc:
            parse_potential("x1 + ", 1)
        assert exc.value.offset == 5
        with pytest.raises(PotentialSyntaxError):
            parse_potential("", 1)
        with pytest.raises(PotentialSyntaxError):
            parse_potential("x1 )", 1)
        with pytest.raises(PotentialSyntaxError):
            parse_potential("foo(x1)", 1)

    def test_non_integer_exponent_rejected(self):
        with pytest.raises(PotentialSyntaxError) as exc:
            parse_potential("x1 ^ (1/2)", 1)
        assert "powr" in str(exc.value)
        with pytest.raises(PotentialSyntaxError):
            parse_potential("x1 ^ x1", 1)

    def test_variable_range_checked(self):
        with pytest.raises(PotentialSyntaxError):
            parse_potential("x3", 2)
        e = parse_potential("x2", 2)
        assert evaluate(e, (0.0, 5.0)) == 5.0

    def test_powr_denominator_positive(self):
        with pytest.raises(PotentialSyntaxError):
            parse_potential("powr(x1, 1, 0)", 1)
        with pytest.raises(PotentialSyntaxError):
            parse_potential("powr(x1, 1, -2)", 1)


class TestDifferentiation:
    CASES_1D = [
        "exp(-x1^2)",
        "powr(1 + x1^2, -1, 6)",
        "sin(x1) * cos(2*x1)",
        "tanh(x1) / (2 + x1^2)",
        "sqrt(1 + x1^2)",
    ]

    STENCILS = {
        1: {1: 0.5, -1: -0.5},
        2: {1: 1.0, 0: -2.0, -1: 1.0},
        3: {2: 0.5, 1: -1.0, -1: 1.0, -2: -0.5},
        4: {2: 1.0, 1: -4.0, 0: 6.0, -1: -4.0, -2: 1.0},
    }

    # step sizes balance truncation error against roundoff, which is
    # amplified by h^(-order)
    STEPS = {1: 1e-3, 2: 1e-3, 3: 1e-2, 4: 5e-2}

    @classmethod
    def fd(cls, e, x, order, h):
        """Central finite difference with one Richardson step."""

        def stencil(step):
            return sum(c * evaluate(e, (x + k * step,))
                       for k, c in cls.STENCILS[order].items()) / step ** order

        a, b = stencil(h), stencil(h / 2)
        return (2 ** 2 * b - a) / (2 ** 2 - 1)

    @pytest.mark.parametrize("src", CASES_1D)
    @pytest.mark.parametrize("order", [1, 2, 3, 4])
    def test_matches_finite_differences(self, src, order):
        e = parse_potential(src, 1)
        de = differentiate(e, (order,))
        tol = 1e-6 if order <= 3 else 1e-4
        for x in (-0.8, 0.3, 1.1):
            sym = evaluate(de, (x,))
            num = self.fd(e, x, order, self.STEPS[order])
            assert abs(sym - num) <= tol * (1.0 + abs(sym))

    def test_mixed_partials(self):
        e = parse_potential("exp(-x1^2 - x2^2) * sin(x1 * x2)", 2)
        d12 = differentiate(differentiate(e, (1, 0)), (0, 1))
        d21 = differentiate(differentiate(e, (0, 1)), (1, 0))
        for pt in [(0.3, -0.4), (1.0, 0.5)]:
            assert evaluate(d12, pt) == pytest.approx(evaluate(d21, pt))

    def test_derivative_cap(self):
        e = parse_potential("exp(-x1^2)", 1)
        with pytest.raises(DerivativeCapError):
            differentiate(e, (DERIVATIVE_CAP + 1,))


class TestEvaluation:
    def test_eval_errors(self):
        with pytest.raises(PotentialEvalError):
            evaluate(parse_potential("1 / x1", 1), (0.0,))
        with pytest.raises(PotentialEvalError):
            evaluate(parse_potential("sqrt(x1)", 1), (-1.0,))
        with pytest.raises(PotentialEvalError):
            evaluate(parse_potential("powr(x1, 1, 2)", 1), (-1.0,))

    def test_array_matches_scalar(self):
        e = parse_potential("exp(-x1^2 - x2^2) + tanh(x1 - x2)", 2)
        xs = np.linspace(-2, 2, 9)
        ys = np.linspace(-1, 1, 9)
        arr = evaluate_array(e, [xs, ys])
        for i in range(9):
            assert arr[i] == pytest.approx(evaluate(e, (xs[i], ys[i])))

    def test_array_nonfinite_raises(self):
        e = parse_potential("1 / x1", 1)
        with pytest.raises(PotentialEvalError):
            evaluate_array(e, [np.array([1.0, 0.0])])

    def test_constant_broadcast(self):
        e = parse_potential("2", 1)
        arr = evaluate_array(e, [np.zeros((3, 4))])
        assert arr.shape == (3, 4)
        assert np.all(arr == 2.0)
