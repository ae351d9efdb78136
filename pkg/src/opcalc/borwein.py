"""Exact machinery for sinc-product integrals of Borwein type.

The integral of sinc(a_1 x)...sinc(a_m x) cos(b_1 x)...cos(b_n x) sinc(c x)
over the real line reduces, through the delta route, to a signed sum of
generalized ramps over all 2^(m+n) sign assignments gamma:

    I = pi / 2^(m+n) * (prod a_i)^-1
        * sum_gamma sign(gamma) [R_m(beta_gamma + 1) - R_m(beta_gamma - 1)]

with beta_gamma the signed frequency sum and sign(gamma) the product of
the sinc entries only.  Everything here is exact rational arithmetic; pi
stays symbolic.  The classical Borwein sequence uses rates 1/(2k-1): the
value is pi exactly until the rates sum past 1, and the first deficit
appears in the eighth term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .exact import SQRT_TWO_PI, ExactValue, as_fraction, binomial, double_factorial
from .kernels import gaussian_chain
from .result import TransformResult


class RampBoundaryError(ArithmeticError):
    """A step function would be evaluated exactly at its jump."""


@dataclass(frozen=True)
class SignTuple:
    """A +-1 assignment; sign() is the product of the designated leading
    entries (the sinc slots in mixed sinc/cos products)."""

    entries: tuple
    designated: Optional[int] = None  # defaults to all entries

    def __post_init__(self):
        if any(e not in (-1, 1) for e in self.entries):
            raise ValueError("sign tuples hold only +1/-1 entries")

    def sign(self) -> int:
        upto = len(self.entries) if self.designated is None else self.designated
        s = 1
        for e in self.entries[:upto]:
            s *= e
        return s


def beta_of(gamma: SignTuple, rates: Sequence) -> Fraction:
    """Signed frequency sum  sum_k gamma_k * rates_k, exact."""
    if len(gamma.entries) != len(rates):
        raise ValueError(
            f"sign tuple length {len(gamma.entries)} != rates length {len(rates)}")
    total = Fraction(0)
    for g, r in zip(gamma.entries, rates):
        total += g * as_fraction(r)
    return total


def borwein_rates(n: int) -> tuple:
    """1, 1/3, ..., 1/(2n-1)."""
    return tuple(Fraction(1, 2 * k - 1) for k in range(1, n + 1))


def _ramp(m: int, x: Fraction) -> Fraction:
    """R_m(x) = x^m/m! Theta(x); the step order m = 0 rejects x = 0."""
    if m == 0:
        if x == 0:
            raise RampBoundaryError("step evaluated exactly at its jump")
        return Fraction(1) if x > 0 else Fraction(0)
    if x <= 0:
        return Fraction(0)
    fact = 1
    for i in range(2, m + 1):
        fact *= i
    return x ** m / fact


def borwein_exact(n: int) -> ExactValue:
    """The n-th Borwein integral as an exact multiple of pi.

    Full enumeration over all n-tuples of signs:
    (2n-1)!! pi / 2^(n-1) * sum sign(gamma) R_(n-1)(beta_gamma).
    """
    if n < 1:
        raise ValueError("Borwein integrals are indexed from 1")
    rates = borwein_rates(n)
    total = Fraction(0)
    for entries in itertools.product((1, -1), repeat=n):
        gamma = SignTuple(entries)
        total += gamma.sign() * _ramp(n - 1, beta_of(gamma, rates))
    coeff = Fraction(double_factorial(2 * n - 1), 2 ** (n - 1)) * total
    return ExactValue.pi_times(coeff)


def borwein_exact_half(n: int) -> ExactValue:
    """Same value via the antisymmetry-reduced sum over tuples with a
    positive leading entry; cross-checks the full enumeration."""
    if n < 1:
        raise ValueError("Borwein integrals are indexed from 1")
    if n == 1:
        return ExactValue.pi_times(1)
    rates = borwein_rates(n)
    fact = 1
    for i in range(2, n):
        fact *= i
    total = Fraction(0)
    for rest in itertools.product((1, -1), repeat=n - 1):
        gamma = SignTuple((1,) + rest)
        beta = beta_of(gamma, rates)
        sgn_beta = 1 if beta > 0 else -1 if beta < 0 else 0
        total += gamma.sign() * sgn_beta * beta ** (n - 1)
    coeff = Fraction(double_factorial(2 * n - 1), 2 ** (n - 1) * fact) * total
    return ExactValue.pi_times(coeff)


def borwein_deficit(n: int) -> Fraction:
    """(pi - B_n)/pi, exactly, from the tuples whose beta went negative.

    Zero through n = 7; the first nonzero value is the famous eighth-term
    fraction with a 30-digit denominator.
    """
    if n < 1:
        raise ValueError("Borwein integrals are indexed from 1")
    if n == 1:
        return Fraction(0)
    rates = borwein_rates(n)
    fact = 1
    for i in range(2, n):
        fact *= i
    total = Fraction(0)
    for rest in itertools.product((1, -1), repeat=n - 1):
        gamma = SignTuple((1,) + rest)
        beta = beta_of(gamma, rates)
        if beta < 0:
            total += gamma.sign() * beta ** (n - 1)
    return Fraction(double_factorial(2 * n - 1), 2 ** (n - 2) * fact) * total


def coefficient_identity_check(n: int) -> bool:
    """Exact check of  sum_(gamma_1=1) sign(gamma) beta^(n-1)/(n-1)!
    == 2^(n-1)/(2n-1)!!,  the combinatorial identity behind B_n = pi."""
    if n < 1:
        raise ValueError("the identity is indexed from 1")
    rates = borwein_rates(n)
    fact = 1
    for i in range(2, n):
        fact *= i
    total = Fraction(0)
    for rest in itertools.product((1, -1), repeat=n - 1):
        gamma = SignTuple((1,) + rest)
        total += gamma.sign() * beta_of(gamma, rates) ** (n - 1)
    return total / fact == Fraction(2 ** (n - 1), double_factorial(2 * n - 1))


# ---------------------------------------------------------------------------
# General sinc/cos products (Lord's family)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SincProductSpec:
    """Rates of sinc(a_i x), cos(b_j x) factors and the outer sinc(c x)."""

    sinc_rates: tuple = ()
    cos_rates: tuple = ()
    outer_rate: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "sinc_rates",
                           tuple(as_fraction(a) for a in self.sinc_rates))
        object.__setattr__(self, "cos_rates",
                           tuple(as_fraction(b) for b in self.cos_rates))
        object.__setattr__(self, "outer_rate", as_fraction(self.outer_rate))
        if any(a <= 0 for a in self.sinc_rates) or \
                any(b <= 0 for b in self.cos_rates) or self.outer_rate <= 0:
            raise ValueError("all rates must be positive")

    @property
    def lord_condition(self) -> bool:
        return self.outer_rate > sum(self.sinc_rates) + sum(self.cos_rates)

    def normalized(self) -> "SincProductSpec":
        c = self.outer_rate
        return SincProductSpec(tuple(a / c for a in self.sinc_rates),
                               tuple(b / c for b in self.cos_rates), Fraction(1))


@dataclass(frozen=True)
class SincProductValue:
    value: ExactValue
    lord_condition: bool
    is_pi: bool
    rescaled_by: Fraction


def sinc_cos_product_integral(spec: SincProductSpec,
                              ramp_perturbation: Optional[Sequence] = None
                              ) -> SincProductValue:
    """Exact real-line integral of the sinc/cos product.

    The enumeration always runs on the spec normalized to outer rate 1
    (substituting u = c x), then divides by c; for c = 1 under the Lord
    condition the value is exactly pi.  *ramp_perturbation* optionally
    adds a fixed polynomial of degree < m to every ramp representative;
    admissible perturbations cancel exactly and the tests insist on it.
    """
    norm = spec.normalized()
    a, b = norm.sinc_rates, norm.cos_rates
    m, n = len(a), len(b)
    if ramp_perturbation is not None and len(ramp_perturbation) > m:
        raise ValueError("perturbation degree must stay below the ramp order")

    def ramp_rep(x: Fraction) -> Fraction:
        val = _ramp(m, x)
        if ramp_perturbation:
            xp = Fraction(1)
            for c in ramp_perturbation:
                val += as_fraction(c) * xp
                xp *= x
        return val

    total = Fraction(0)
    for entries in itertools.product((1, -1), repeat=m + n):
        gamma = SignTuple(entries, designated=m)
        beta = beta_of(gamma, a + b)
        total += gamma.sign() * (ramp_rep(beta + 1) - ramp_rep(beta - 1))

    prod_a = Fraction(1)
    for ai in a:
        prod_a *= ai
    coeff = total / (Fraction(2 ** (m + n)) * prod_a) / spec.outer_rate
    value = ExactValue.pi_times(coeff)
    return SincProductValue(value, spec.lord_condition,
                            coeff == 1, spec.outer_rate)


# ---------------------------------------------------------------------------
# sinc powers against a Gaussian
# ---------------------------------------------------------------------------

def sinc_power_gaussian(n: int,
                        chain_perturbation: Optional[Sequence] = None
                        ) -> TransformResult:
    """Integral of sinc(x)^n e^(-x^2/2) over the real line.

    The Gaussian part turns the delta into e^(-y^2/2)/sqrt(2 pi) (the heat
    kernel at unit time), and each sinc contributes a central difference
    of one more anti-derivative:

        sqrt(2 pi)/2^n * sum_k (-1)^k C(n,k) G_n(n - 2k)

    with G_n the n-th Gaussian anti-derivative chain.  A polynomial of
    degree < n added to G_n is annihilated by the n-th central difference;
    pass *chain_perturbation* to exercise exactly that.
    """
    if n < 0:
        raise ValueError("sinc powers are indexed by n >= 0")
    chain = gaussian_chain(n)
    if chain_perturbation is not None:
        coeffs = tuple(as_fraction(c) for c in chain_perturbation)
        if len(coeffs) > n:
            raise ValueError("perturbation degree must stay below n")
    else:
        coeffs = ()

    total = ExactValue.zero()
    for k in range(n + 1):
        arg = Fraction(n - 2 * k)
        term = chain.value_at(arg)
        if coeffs:
            xp = Fraction(1)
            poly = Fraction(0)
            for c in coeffs:
                poly += c * xp
                xp *= arg
            term = term + ExactValue.rational(poly)
        total = total + term * Fraction((-1) ** k * binomial(n, k))
    value = SQRT_TWO_PI * total * Fraction(1, 2 ** n)
    return TransformResult.from_exact(
        value, method="gaussian_heat_kernel", formula="gaussian_sinc_difference",
        diagnostics={"sinc_power": n, "verdict": "exact"})
