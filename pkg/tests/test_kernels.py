"""Kernel chains: 1/y derivatives, Gaussian anti-derivatives, Green's functions."""

import math
from fractions import Fraction

import mpmath
import pytest

from opcalc.exact import ComplexRational, ExactValue, exp_value, log_value
from opcalc.kernels import (GaussianChain, LogChain, eval_kernel,
                            gaussian_chain, green_function, one_over_y_chain)
from opcalc.oracle import quad_interval


def log_chain_equal(a: LogChain, b: LogChain) -> bool:
    return a.terms == b.terms


# ---------------------------------------------------------------------------
# 1/y chains
# ---------------------------------------------------------------------------

def test_one_over_y_base():
    assert one_over_y_chain(0).terms == ((Fraction(1), -1, False),)


def test_one_over_y_first_derivative():
    assert one_over_y_chain(1).terms == ((Fraction(-1), -2, False),)


def test_one_over_y_first_antiderivative_is_log():
    assert one_over_y_chain(-1).terms == ((Fraction(1), 0, True),)
    # differentiate back: d/dy log y = 1/y
    assert log_chain_equal(one_over_y_chain(-1).derivative(), one_over_y_chain(0))


@pytest.mark.parametrize("n", range(-5, 6))
def test_one_over_y_chain_consistency(n):
    assert log_chain_equal(one_over_y_chain(n).derivative(), one_over_y_chain(n + 1))


def test_one_over_y_deep_antiderivative():
    # second anti-derivative: y log y - y
    assert one_over_y_chain(-2).terms == (
        (Fraction(-1), 1, False), (Fraction(1), 1, True))


def test_log_chain_limits():
    assert one_over_y_chain(-2).limit_at_zero_plus() == ExactValue.zero()
    with pytest.raises(ValueError):
        one_over_y_chain(-1).limit_at_zero_plus()
    with pytest.raises(ValueError):
        one_over_y_chain(0).limit_at_zero_plus()


def test_log_chain_values():
    assert one_over_y_chain(-1).value_at(2) == log_value(2)
    assert float(eval_kernel(one_over_y_chain(-1), 2.0)) == \
        pytest.approx(math.log(2), abs=1e-14)
    with pytest.raises(ValueError):
        one_over_y_chain(0).value_at(0)


# ---------------------------------------------------------------------------
# Gaussian chains
# ---------------------------------------------------------------------------

def test_gaussian_chain_order_zero():
    g0 = gaussian_chain(0)
    assert g0 == GaussianChain(p=(Fraction(1),))
    assert float(eval_kernel(g0, 0.0)) == 1.0


def test_gaussian_chain_order_one_is_erf():
    g1 = gaussian_chain(1)
    assert g1 == GaussianChain(q=(Fraction(1),))
    # derivative recovers the Gaussian
    assert g1.derivative() == gaussian_chain(0)


def test_gaussian_chain_order_three_closed_form():
    # (1/2) y e^(-y^2/2) + (1/2) sqrt(pi/2) (1 + y^2) erf(y/sqrt 2)
    g3 = gaussian_chain(3)
    assert g3 == GaussianChain(p=(Fraction(0), Fraction(1, 2)),
                               q=(Fraction(1, 2), Fraction(0), Fraction(1, 2)))


@pytest.mark.parametrize("n", range(1, 9))
def test_gaussian_chain_derivative_consistency(n):
    assert gaussian_chain(n).derivative() == gaussian_chain(n - 1)


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_gaussian_chain_parity(n):
    g = gaussian_chain(n)
    for y in (Fraction(1, 2), Fraction(3, 2), Fraction(3)):
        plus = g.value_at(y)
        minus = g.value_at(-y)
        if n % 2 == 1:
            assert minus == plus * Fraction(-1)
        else:
            assert minus == plus


def test_gaussian_chain_value_matches_quadrature():
    # integral of G2 over [0, 1] equals G3(1) - G3(0)
    g2 = gaussian_chain(2)
    g3 = gaussian_chain(3)
    quad = quad_interval(lambda xs: [float(eval_kernel(g2, float(x))) for x in xs],
                         0.0, 1.0, tol=1e-11)
    expected = float(g3.value_at(1)) - float(g3.value_at(0))
    assert quad.value == pytest.approx(expected, abs=1e-9)


def test_central_difference_annihilates_low_degree():
    # n-th central difference of any polynomial of degree < n is zero
    for n in (1, 2, 3, 4):
        coeffs = [Fraction(7, 3), Fraction(-2), Fraction(1, 5), Fraction(4)][:n]

        def poly(x: Fraction) -> Fraction:
            total = Fraction(0)
            xp = Fraction(1)
            for c in coeffs:
                total += c * xp
                xp *= x
            return total

        from opcalc.exact import binomial
        acc = Fraction(0)
        for k in range(n + 1):
            acc += (-1) ** k * binomial(n, k) * poly(Fraction(n - 2 * k))
        assert acc == 0


# ---------------------------------------------------------------------------
# Green's functions
# ---------------------------------------------------------------------------

def test_green_function_unit_rate():
    g = green_function(1)
    assert g.terms == ((ComplexRational(Fraction(1, 2)), Fraction(1), Fraction(0)),)
    assert float(eval_kernel(g, 1.0)) == pytest.approx(0.5 / math.e, abs=1e-15)


def test_green_function_peak_value():
    assert green_function(2).value_at(0) == ExactValue.rational(Fraction(1, 4))


def test_green_function_rejects_bad_rate():
    with pytest.raises(ValueError):
        green_function(0)
    with pytest.raises(ValueError):
        green_function(Fraction(-3))


def test_green_branches_solve_the_ode():
    # away from the kink, e^(-a|y|)/(2a) solves -G'' + a^2 G = 0, and the
    # slope jumps by -1 across 0
    a = Fraction(3)
    half = Fraction(1, 2) / a
    # right branch: G(y) = half * e^(-a y); G'' = a^2 G exactly
    # left slope a*half, right slope -a*half: jump = -2 a half = -1
    assert -2 * a * half == -1


def test_green_delta_pairing():
    # pairing -G'' + a^2 G against a narrow bump recovers the bump's value
    # at 0; derivatives are moved onto the (smooth) bump by parts
    a = 3.0
    g = green_function(3)
    sigma = 1e-2

    def bump(y):
        import numpy as np
        return np.exp(-(y / sigma) ** 2 / 2)

    def bump_dd(y):
        import numpy as np
        return (y * y / sigma ** 4 - 1 / sigma ** 2) * np.exp(-(y / sigma) ** 2 / 2)

    def integrand(ys):
        import numpy as np
        gv = np.array([float(eval_kernel(g, float(y))) for y in np.atleast_1d(ys)])
        return gv * (-bump_dd(ys) + a * a * bump(ys))

    left = quad_interval(integrand, -2.0, 0.0, tol=1e-9)
    right = quad_interval(integrand, 0.0, 2.0, tol=1e-9)
    assert left.value + right.value == pytest.approx(1.0, abs=1e-6)


def test_piecewise_exp_translation_and_value():
    g = green_function(1).translate(Fraction(1))
    v = g.value_at(0)
    assert v == exp_value(-1, Fraction(1, 2))
    with mpmath.workdps(25):
        assert abs(eval_kernel(g, 0.0) - mpmath.exp(-1) / 2) < mpmath.mpf("1e-24")
