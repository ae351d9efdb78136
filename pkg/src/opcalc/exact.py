"""Exact scalar arithmetic for closed-form integral results.

Every closed-form result produced by the operator routes is a linear
combination, with rational coefficients, of a small set of transcendental
atoms:

    pi,  sqrt(2*pi),  exp(q),  erf(r/sqrt(2)),  log(s)

with q, r, s rational.  ``ExactValue`` stores such a combination exactly
(bit-exact rational coefficients, structural equality) and produces a
high-precision numeric shadow on demand.  A value is a "pure pi multiple"
iff its plain rational part is zero and no transcendental residues remain.

``Rational`` is the stdlib ``fractions.Fraction``, which already maintains
lowest terms and a positive denominator.  ``ComplexRational`` supplies the
exact complex coefficients needed when trigonometric integrands are
rewritten in terms of complex exponentials.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import mpmath

Rational = Fraction

RationalLike = Union[Fraction, int]


def as_fraction(x) -> Fraction:
    """Coerce *x* to an exact Fraction.

    Floats are converted to their exact binary value; decimal strings such
    as "0.25" become the exact decimal fraction 1/4.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, str)):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"cannot represent {x!r} exactly")
        return Fraction(x)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def double_factorial(n: int) -> int:
    """Product of the odd numbers 1*3*...*n for odd n >= 1."""
    if not isinstance(n, int):
        raise TypeError("double_factorial expects an integer")
    if n < 1 or n % 2 == 0:
        raise ValueError(f"double_factorial requires an odd n >= 1, got {n}")
    out = 1
    for k in range(1, n + 1, 2):
        out *= k
    return out


def binomial(n: int, k: int) -> int:
    """Exact binomial coefficient C(n, k) with 0 <= k <= n."""
    if n < 0 or k < 0 or k > n:
        raise ValueError(f"binomial requires 0 <= k <= n, got ({n}, {k})")
    return math.comb(n, k)


# ---------------------------------------------------------------------------
# Complex rationals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number with rational real and imaginary parts."""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", as_fraction(self.re))
        object.__setattr__(self, "im", as_fraction(self.im))

    # -- helpers ------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "ComplexRational":
        if isinstance(other, ComplexRational):
            return other
        if isinstance(other, (int, Fraction)):
            return ComplexRational(as_fraction(other))
        return NotImplemented

    @property
    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    @property
    def is_real(self) -> bool:
        return self.im == 0

    def require_real(self) -> Fraction:
        if self.im != 0:
            raise ValueError(f"value {self} has a nonzero imaginary part")
        return self.re

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexRational(self.re - o.re, self.im - o.im)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o - self

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return ComplexRational(self.re * o.re - self.im * o.im,
                               self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        d = o.re * o.re + o.im * o.im
        if d == 0:
            raise ZeroDivisionError("division by zero ComplexRational")
        return ComplexRational((self.re * o.re + self.im * o.im) / d,
                               (self.im * o.re - self.re * o.im) / d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return o / self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            raise TypeError("ComplexRational powers must be integers")
        if n < 0:
            return (ComplexRational(1) / self) ** (-n)
        out = ComplexRational(1)
        base = self
        k = n
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def __complex__(self) -> complex:
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        return f"({self.re} + {self.im}*i)"


CR_ZERO = ComplexRational()
CR_ONE = ComplexRational(Fraction(1))
CR_I = ComplexRational(Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# Transcendental residues and exact values
# ---------------------------------------------------------------------------

@dataclass(frozen=True, order=True)
class Residue:
    """A product of transcendental atoms multiplying a rational coefficient.

    Represents pi**pi_power * sqrt(2*pi)**sqrt_two_pi * exp(e_exp)
    * prod(erf(r/sqrt(2)) for r in erf_args) * prod(log(s) for s in log_args).
    The trivial residue (all unit factors) stands for the plain rational
    slot, and the residue with only pi_power == 1 is the pi slot.
    """

    pi_power: int = 0
    sqrt_two_pi: int = 0
    e_exp: Fraction = Fraction(0)
    erf_args: tuple = ()
    log_args: tuple = ()

    @property
    def is_trivial(self) -> bool:
        return (self.pi_power == 0 and self.sqrt_two_pi == 0
                and self.e_exp == 0 and not self.erf_args and not self.log_args)

    @property
    def is_pure_pi(self) -> bool:
        return (self.pi_power == 1 and self.sqrt_two_pi == 0
                and self.e_exp == 0 and not self.erf_args and not self.log_args)

    def combine(self, other: "Residue") -> tuple["Residue", Fraction]:
        """Product of two residues; returns (residue, rational carried factor)."""
        carry = Fraction(1)
        pi_power = self.pi_power + other.pi_power
        sqrt = self.sqrt_two_pi + other.sqrt_two_pi
        if sqrt >= 2:
            # sqrt(2*pi)**2 == 2*pi
            sqrt -= 2
            pi_power += 1
            carry *= 2
        return Residue(pi_power, sqrt, self.e_exp + other.e_exp,
                       tuple(sorted(self.erf_args + other.erf_args)),
                       tuple(sorted(self.log_args + other.log_args))), carry

    def expr(self) -> str:
        parts = []
        if self.pi_power == 1:
            parts.append("pi")
        elif self.pi_power:
            parts.append(f"pi^{self.pi_power}")
        if self.sqrt_two_pi:
            parts.append("sqrt(2*pi)")
        if self.e_exp != 0:
            parts.append(f"exp({self.e_exp})")
        for r in self.erf_args:
            parts.append(f"erf({r}/sqrt(2))")
        for s in self.log_args:
            parts.append(f"log({s})")
        return "*".join(parts) if parts else "1"

    def evalf(self) -> mpmath.mpf:
        """Numeric value at the current mpmath working precision."""
        v = mpmath.mpf(1)
        if self.pi_power:
            v *= mpmath.pi ** self.pi_power
        if self.sqrt_two_pi:
            v *= mpmath.sqrt(2 * mpmath.pi) ** self.sqrt_two_pi
        if self.e_exp != 0:
            v *= mpmath.exp(_to_mpf(self.e_exp))
        for r in self.erf_args:
            v *= high_precision_erf(_to_mpf(r) / mpmath.sqrt(2))
        for s in self.log_args:
            v *= mpmath.log(_to_mpf(s))
        return v


def _to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / mpmath.mpf(q.denominator)


def _normalize_term(residue: Residue, coeff: Fraction):
    """Canonicalize atom arguments; returns (residue, coeff) or None if zero."""
    if coeff == 0:
        return None
    if residue.pi_power < 0 or residue.sqrt_two_pi not in (0, 1):
        raise ValueError(f"unsupported residue shape: {residue}")
    erf_args = []
    for r in residue.erf_args:
        if r == 0:
            return None  # erf(0) == 0 kills the whole product
        if r < 0:
            coeff = -coeff  # erf is odd
            r = -r
        erf_args.append(r)
    log_args = []
    for s in residue.log_args:
        if s <= 0:
            raise ValueError(f"log argument must be positive, got {s}")
        if s == 1:
            return None  # log(1) == 0
        if s < 1:
            coeff = -coeff  # log(1/s) == -log(s); keep arguments > 1
            s = 1 / s
        log_args.append(s)
    return Residue(residue.pi_power, residue.sqrt_two_pi, residue.e_exp,
                   tuple(sorted(erf_args)), tuple(sorted(log_args))), coeff


_TRIVIAL = Residue()
_PI = Residue(pi_power=1)


@dataclass(frozen=True)
class ExactValue:
    """Exact real scalar: rational + rational*pi + transcendental residues.

    Immutable and structurally comparable; two values are equal iff their
    canonical term lists match exactly.  ``evalf`` gives the numeric shadow.
    """

    terms: tuple = ()  # tuple of (Residue, Fraction), canonically sorted

    # -- constructors --------------------------------------------------
    @staticmethod
    def from_terms(items: Iterable) -> "ExactValue":
        acc: dict = {}
        for residue, coeff in items:
            norm = _normalize_term(residue, as_fraction(coeff))
            if norm is None:
                continue
            res, c = norm
            acc[res] = acc.get(res, Fraction(0)) + c
        terms = tuple(sorted((r, c) for r, c in acc.items() if c != 0))
        return ExactValue(terms)

    @staticmethod
    def zero() -> "ExactValue":
        return ExactValue()

    @staticmethod
    def rational(q) -> "ExactValue":
        return ExactValue.from_terms([(_TRIVIAL, as_fraction(q))])

    @staticmethod
    def pi_times(q) -> "ExactValue":
        return ExactValue.from_terms([(_PI, as_fraction(q))])

    @staticmethod
    def single(residue: Residue, coeff=1) -> "ExactValue":
        return ExactValue.from_terms([(residue, as_fraction(coeff))])

    # -- structure -----------------------------------------------------
    @property
    def rational_part(self) -> Fraction:
        for r, c in self.terms:
            if r.is_trivial:
                return c
        return Fraction(0)

    @property
    def pi_coefficient(self) -> Fraction:
        for r, c in self.terms:
            if r.is_pure_pi:
                return c
        return Fraction(0)

    @property
    def residues(self) -> tuple:
        """Terms beyond the rational and pure-pi slots."""
        return tuple((r, c) for r, c in self.terms
                     if not (r.is_trivial or r.is_pure_pi))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_rational(self) -> bool:
        return all(r.is_trivial for r, _ in self.terms)

    @property
    def is_pure_pi_multiple(self) -> bool:
        return bool(self.terms) and all(r.is_pure_pi for r, _ in self.terms)

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return ExactValue.from_terms(list(self.terms) + list(other.terms))

    __radd__ = __add__

    def __neg__(self):
        return ExactValue(tuple((r, -c) for r, c in self.terms))

    def __sub__(self, other):
        other = _as_exact(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return _as_exact(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            return ExactValue.from_terms((r, c * q) for r, c in self.terms)
        if isinstance(other, ExactValue):
            items = []
            for r1, c1 in self.terms:
                for r2, c2 in other.terms:
                    res, carry = r1.combine(r2)
                    items.append((res, c1 * c2 * carry))
            return ExactValue.from_terms(items)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            q = as_fraction(other)
            if q == 0:
                raise ZeroDivisionError("division of ExactValue by zero")
            return self * (1 / q)
        return NotImplemented

    # -- numerics --------------------------------------------------------
    def evalf(self, dps: int = 30) -> mpmath.mpf:
        """High-precision numeric shadow with *dps* significant digits."""
        with mpmath.workdps(dps + 10):
            total = mpmath.mpf(0)
            for r, c in self.terms:
                total += _to_mpf(c) * r.evalf()
            return +total

    def __float__(self) -> float:
        return float(self.evalf(25))

    # -- formatting ------------------------------------------------------
    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for r, c in self.terms:
            if r.is_trivial:
                frag = str(c)
            else:
                if c == 1:
                    frag = r.expr()
                elif c == -1:
                    frag = f"-{r.expr()}"
                else:
                    frag = f"({c})*{r.expr()}"
            parts.append(frag)
        out = parts[0]
        for frag in parts[1:]:
            if frag.startswith("-"):
                out += " - " + frag[1:]
            else:
                out += " + " + frag
        return out

    __repr__ = __str__


def _as_exact(x):
    if isinstance(x, ExactValue):
        return x
    if isinstance(x, (int, Fraction)):
        return ExactValue.rational(x)
    return NotImplemented


PI_VALUE = ExactValue.pi_times(1)
SQRT_TWO_PI = ExactValue.single(Residue(sqrt_two_pi=1))


def exp_value(q, coeff=1) -> ExactValue:
    """coeff * exp(q) for rational q."""
    return ExactValue.single(Residue(e_exp=as_fraction(q)), coeff)


def log_value(s, coeff=1) -> ExactValue:
    """coeff * log(s) for rational s > 0."""
    return ExactValue.single(Residue(log_args=(as_fraction(s),)), coeff)


def erf_value(r, coeff=1) -> ExactValue:
    """coeff * erf(r/sqrt(2)) for rational r."""
    return ExactValue.single(Residue(erf_args=(as_fraction(r),)), coeff)


# ---------------------------------------------------------------------------
# High-precision error function
# ---------------------------------------------------------------------------

def high_precision_erf(x) -> mpmath.mpf:
    """erf(x) at the current mpmath working precision.

    Maclaurin series for |x| <= 3, a continued fraction for erfc beyond.
    The continued fraction depth is doubled until two evaluations agree.
    """
    x = mpmath.mpf(x)
    if x == 0:
        return mpmath.mpf(0)
    if x < 0:
        return -high_precision_erf(-x)
    with mpmath.extraprec(60):
        if x <= 3:
            # sum_k (-1)^k x^(2k+1) / (k! (2k+1)); worst cancellation at
            # x = 3 costs ~5 digits, covered by the extra precision
            term = x
            total = mpmath.mpf(0)
            k = 0
            x2 = x * x
            eps = mpmath.mpf(10) ** (-(mpmath.mp.dps + 5))
            while abs(term) / (2 * k + 1) > eps:
                total += term / (2 * k + 1)
                k += 1
                term = -term * x2 / k
            value = 2 / mpmath.sqrt(mpmath.pi) * total
        else:
            # erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
            prefactor = mpmath.exp(-x * x) / mpmath.sqrt(mpmath.pi)
            depth = 60
            prev = None
            while True:
                frac = mpmath.mpf(0)
                for k in range(depth, 0, -1):
                    frac = (mpmath.mpf(k) / 2) / (x + frac)
                erfc = prefactor / (x + frac)
                if prev is not None and abs(erfc - prev) <= abs(erfc) * mpmath.mpf(10) ** (-(mpmath.mp.dps + 3)):
                    break
                if depth > 20000:
                    break
                prev = erfc
                depth *= 2
            value = 1 - erfc
    return +value
