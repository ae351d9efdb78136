"""Closed-form targets the operator words act on, besides ramp sums.

Three families cover the formal routes:

* ``LogChain``    derivatives and anti-derivatives of 1/y, spanned by
                  y^m and y^m log(y) terms (integration constants zero);
* ``GaussianChain``  anti-derivatives of e^(-y^2/2), of the shape
                  p(y) e^(-y^2/2) + q(y) sqrt(pi/2) erf(y/sqrt(2)) + r(y)
                  with rational polynomials, the representative picked
                  with definite parity (odd order -> odd function);
* ``PiecewiseExp``  combinations of e^(-a|y - s|), the Green's functions
                  of the operators -D^2 + a^2.

Chains evaluate exactly at rational points, producing ExactValues whose
transcendental residues are e-powers, erf values and logarithms.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .exact import (ComplexRational, CR_ZERO, ExactValue, Residue,
                    as_fraction, high_precision_erf)


# ---------------------------------------------------------------------------
# 1/y chains
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LogChain:
    """sum coeff * y^power * (log y if log_flag else 1)."""

    terms: tuple  # (coeff: Fraction, power: int, log_flag: bool)

    @staticmethod
    def from_terms(items) -> "LogChain":
        acc: dict = {}
        for c, m, flag in items:
            key = (m, flag)
            acc[key] = acc.get(key, Fraction(0)) + as_fraction(c)
        return LogChain(tuple((c, m, flag)
                              for (m, flag), c in sorted(acc.items()) if c != 0))

    def derivative(self) -> "LogChain":
        out = []
        for c, m, flag in self.terms:
            out.append((c * m, m - 1, flag))
            if flag:
                out.append((c, m - 1, False))
        return LogChain.from_terms(out)

    def antiderivative(self) -> "LogChain":
        """One anti-derivative, integration constant zero."""
        out = []
        for c, m, flag in self.terms:
            if not flag:
                if m == -1:
                    out.append((c, 0, True))
                else:
                    out.append((Fraction(c, m + 1), m + 1, False))
            else:
                if m == -1:
                    raise ValueError("log(y)/y does not arise in 1/y chains")
                out.append((Fraction(c, m + 1), m + 1, True))
                out.append((-Fraction(c, (m + 1) ** 2), m + 1, False))
        return LogChain.from_terms(out)

    def value_at(self, z) -> ExactValue:
        """Exact value at rational z > 0 (log z kept symbolic)."""
        z = as_fraction(z)
        if z <= 0:
            raise ValueError(f"1/y chains live on y > 0, got {z}")
        total = ExactValue.zero()
        for c, m, flag in self.terms:
            power = c * z ** m
            if flag:
                total = total + ExactValue.single(Residue(log_args=(z,)), power)
            else:
                total = total + ExactValue.rational(power)
        return total

    def limit_at_zero_plus(self) -> ExactValue:
        """Limit y -> 0+: finite iff only positive powers (and y^m log y,
        m >= 1) appear."""
        for c, m, flag in self.terms:
            if m < 0 or (m == 0 and flag):
                raise ValueError(
                    f"chain term y^{m}{' log y' if flag else ''} diverges at 0+")
        total = Fraction(0)
        for c, m, flag in self.terms:
            if m == 0 and not flag:
                total += c
        return ExactValue.rational(total)


def one_over_y_chain(n: int) -> LogChain:
    """n-th derivative (n >= 0) or |n|-th anti-derivative (n < 0) of 1/y."""
    chain = LogChain.from_terms([(Fraction(1), -1, False)])
    if n >= 0:
        for _ in range(n):
            chain = chain.derivative()
    else:
        for _ in range(-n):
            chain = chain.antiderivative()
    return chain


# ---------------------------------------------------------------------------
# Gaussian chains
# ---------------------------------------------------------------------------

def _poly_add(a: tuple, b: tuple) -> tuple:
    n = max(len(a), len(b))
    out = [Fraction(0)] * n
    for i, c in enumerate(a):
        out[i] += c
    for i, c in enumerate(b):
        out[i] += c
    while out and out[-1] == 0:
        out.pop()
    return tuple(out)


def _poly_scale(a: tuple, c: Fraction) -> tuple:
    return tuple(x * c for x in a) if c != 0 else ()


def _poly_shift_up(a: tuple) -> tuple:
    return (Fraction(0),) + tuple(a) if a else ()


def _poly_deriv(a: tuple) -> tuple:
    return tuple(c * i for i, c in enumerate(a) if i >= 1)


def _poly_eval(a: tuple, z: Fraction) -> Fraction:
    total = Fraction(0)
    for c in reversed(a):
        total = total * z + c
    return total


@dataclass(frozen=True)
class GaussianChain:
    """p(y) e^(-y^2/2) + q(y) sqrt(pi/2) erf(y/sqrt(2)) + r(y), rational p, q, r."""

    p: tuple = ()
    q: tuple = ()
    r: tuple = ()

    def derivative(self) -> "GaussianChain":
        # d/dy [p e^(-y^2/2)] = (p' - y p) e^(-y^2/2)
        # d/dy [q sqrt(pi/2) erf(y/sqrt 2)] = q' (erf part) + q e^(-y^2/2)
        p = _poly_add(_poly_add(_poly_deriv(self.p),
                                _poly_scale(_poly_shift_up(self.p), Fraction(-1))),
                      self.q)
        return GaussianChain(p, _poly_deriv(self.q), _poly_deriv(self.r))

    def antiderivative(self, odd_target: bool) -> "GaussianChain":
        """Term-wise anti-derivative; when the target order is odd the free
        constant is fixed so the representative is an odd function."""
        p_acc: tuple = ()
        q_acc: tuple = ()
        r_acc: tuple = ()

        def gauss_integral(k: int, coeff: Fraction):
            # integral of coeff * y^k e^(-y^2/2)
            nonlocal p_acc, q_acc
            while k >= 2:
                # -y^(k-1) e^(-y^2/2) + (k-1) * integral y^(k-2) e^(-y^2/2)
                mono = [Fraction(0)] * k
                mono[k - 1] = -coeff
                p_acc = _poly_add(p_acc, tuple(mono))
                coeff = coeff * (k - 1)
                k -= 2
            if k == 1:
                p_acc = _poly_add(p_acc, (-coeff,))
            else:
                q_acc = _poly_add(q_acc, (coeff,))

        for k, c in enumerate(self.p):
            if c:
                gauss_integral(k, c)
        for k, c in enumerate(self.q):
            if c:
                # integral y^k erf-part = y^(k+1)/(k+1) erf-part
                #   - 1/(k+1) integral y^(k+1) e^(-y^2/2)
                mono = [Fraction(0)] * (k + 2)
                mono[k + 1] = Fraction(c, k + 1)
                q_acc = _poly_add(q_acc, tuple(mono))
                gauss_integral(k + 1, -Fraction(c, k + 1))
        for k, c in enumerate(self.r):
            if c:
                mono = [Fraction(0)] * (k + 2)
                mono[k + 1] = Fraction(c, k + 1)
                r_acc = _poly_add(r_acc, tuple(mono))

        chain = GaussianChain(p_acc, q_acc, r_acc)
        if odd_target:
            at_zero = chain.value_at_zero_rational()
            if at_zero != 0:
                chain = GaussianChain(p_acc, q_acc,
                                      _poly_add(r_acc, (-at_zero,)))
        return chain

    def value_at_zero_rational(self) -> Fraction:
        p0 = self.p[0] if self.p else Fraction(0)
        r0 = self.r[0] if self.r else Fraction(0)
        return p0 + r0  # erf(0) = 0

    def value_at(self, z) -> ExactValue:
        """Exact value at rational z: e^(-z^2/2) and erf(z/sqrt 2) residues."""
        z = as_fraction(z)
        total = ExactValue.rational(_poly_eval(self.r, z))
        pv = _poly_eval(self.p, z)
        if pv:
            total = total + ExactValue.single(Residue(e_exp=-z * z / 2), pv)
        qv = _poly_eval(self.q, z)
        if qv:
            # sqrt(pi/2) = sqrt(2*pi)/2
            total = total + ExactValue.single(
                Residue(sqrt_two_pi=1, erf_args=(z,)), Fraction(qv, 2))
        return total


def gaussian_chain(n: int) -> GaussianChain:
    """n-th anti-derivative of e^(-y^2/2), parity-symmetric representative."""
    if n < 0:
        raise ValueError("gaussian_chain is indexed by anti-derivative order n >= 0")
    chain = GaussianChain(p=(Fraction(1),))
    for k in range(1, n + 1):
        chain = chain.antiderivative(odd_target=(k % 2 == 1))
    return chain


# ---------------------------------------------------------------------------
# Piecewise exponentials / Green's functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PiecewiseExp:
    """sum coeff * e^(-rate * |y - shift|) with positive rational rates."""

    terms: tuple  # (coeff: ComplexRational, rate: Fraction, shift: Fraction)

    @staticmethod
    def from_terms(items) -> "PiecewiseExp":
        acc: dict = {}
        for c, a, s in items:
            a = as_fraction(a)
            if a <= 0:
                raise ValueError(f"decay rates must be positive, got {a}")
            key = (a, as_fraction(s))
            if not isinstance(c, ComplexRational):
                c = ComplexRational(as_fraction(c))
            acc[key] = acc.get(key, CR_ZERO) + c
        return PiecewiseExp(tuple((c, a, s)
                                  for (a, s), c in sorted(acc.items())
                                  if not c.is_zero))

    def translate(self, b) -> "PiecewiseExp":
        b = as_fraction(b)
        return PiecewiseExp.from_terms(
            [(c, a, s - b) for c, a, s in self.terms])

    def scale(self, c: ComplexRational) -> "PiecewiseExp":
        return PiecewiseExp.from_terms(
            [(v * c, a, s) for v, a, s in self.terms])

    def __add__(self, other: "PiecewiseExp") -> "PiecewiseExp":
        return PiecewiseExp.from_terms(self.terms + other.terms)

    def value_at(self, z) -> ExactValue:
        """Exact value at rational z; imaginary parts must cancel."""
        z = as_fraction(z)
        acc: dict = {}
        for c, a, s in self.terms:
            expo = -a * abs(z - s)
            acc[expo] = acc.get(expo, CR_ZERO) + c
        total = ExactValue.zero()
        for expo, c in acc.items():
            total = total + ExactValue.single(Residue(e_exp=expo), c.require_real())
        return total


def green_function(a) -> PiecewiseExp:
    """Green's function e^(-a|y|)/(2a) of the operator -D^2 + a^2."""
    a = as_fraction(a)
    if a <= 0:
        raise ValueError(f"green_function needs a positive rate, got {a}")
    return PiecewiseExp.from_terms(
        [(ComplexRational(Fraction(1, 2) / a), a, Fraction(0))])


# ---------------------------------------------------------------------------
# Numeric evaluation
# ---------------------------------------------------------------------------

def eval_kernel(chain, y, precision: int = 30) -> mpmath.mpf:
    """Evaluate any of the kernel chains at a float/rational point with
    *precision* significant digits."""
    with mpmath.workdps(precision + 10):
        yv = mpmath.mpf(y.numerator) / y.denominator if isinstance(y, Fraction) \
            else mpmath.mpf(y)
        if isinstance(chain, LogChain):
            if yv <= 0:
                raise ValueError("1/y chains are evaluated on y > 0 only")
            total = mpmath.mpf(0)
            logy = mpmath.log(yv)
            for c, m, flag in chain.terms:
                t = mpmath.mpf(c.numerator) / c.denominator * yv ** m
                total += t * logy if flag else t
            return +total
        if isinstance(chain, GaussianChain):
            def poly(coeffs):
                acc = mpmath.mpf(0)
                for c in reversed(coeffs):
                    acc = acc * yv + mpmath.mpf(c.numerator) / c.denominator
                return acc
            gauss = mpmath.exp(-yv * yv / 2)
            erf_part = mpmath.sqrt(mpmath.pi / 2) * high_precision_erf(yv / mpmath.sqrt(2))
            return +(poly(chain.p) * gauss + poly(chain.q) * erf_part + poly(chain.r))
        if isinstance(chain, PiecewiseExp):
            total = mpmath.mpf(0)
            for c, a, s in chain.terms:
                if c.im != 0:
                    raise ValueError("numeric evaluation needs real coefficients")
                coeff = mpmath.mpf(c.re.numerator) / c.re.denominator
                rate = mpmath.mpf(a.numerator) / a.denominator
                shift = mpmath.mpf(s.numerator) / s.denominator
                total += coeff * mpmath.exp(-rate * abs(yv - shift))
            return +total
    raise TypeError(f"not a kernel chain: {chain!r}")
