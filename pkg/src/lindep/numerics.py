"""Precision-tagged real and complex numbers with sound absolute error bounds.

Values are MPFR floats (via gmpy2) evaluated ``GUARD_BITS`` above the nominal
precision.  Every MPFR primitive is correctly rounded, so each operation adds
at most one ulp of rounding on top of the propagated input errors.  Error
bounds are kept as 53-bit floats rounded toward +inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import lru_cache

import gmpy2
from gmpy2 import mpfr, mpz

from .errors import NonPositiveInput, OutOfRange, PoleAtInteger

DEFAULT_BITS = 256
GUARD_BITS = 32

_UP = gmpy2.context(precision=53, round=gmpy2.RoundUp)
_DOWN = gmpy2.context(precision=53, round=gmpy2.RoundDown)
_ZERO = mpfr(0)
_MPFR = type(_ZERO)


@lru_cache(maxsize=None)
def _near(wp):
    return gmpy2.context(precision=wp, round=gmpy2.RoundToNearest)


@lru_cache(maxsize=None)
def _down(wp):
    return gmpy2.context(precision=wp, round=gmpy2.RoundDown)


@lru_cache(maxsize=None)
def _up(wp):
    return gmpy2.context(precision=wp, round=gmpy2.RoundUp)


def ulp(x, prec):
    """Upper bound on one unit in the last place of ``x`` at ``prec`` bits."""
    if x == 0 or not gmpy2.is_finite(x):
        return _ZERO
    return _UP.mul_2exp(mpfr(1), gmpy2.get_exp(x) - prec)


def _eadd(*terms):
    total = _ZERO
    for t in terms:
        total = _UP.add(total, t)
    return total


def _emul(*factors):
    total = mpfr(1)
    for f in factors:
        total = _UP.mul(total, f)
    return total


@dataclass(frozen=True)
class PrecisionContext:
    """Working precision in bits; values carry ``GUARD_BITS`` extra internally."""

    bits: int = DEFAULT_BITS

    def __post_init__(self):
        if not isinstance(self.bits, int) or self.bits < 64:
            raise ValueError(f"precision must be an integer >= 64 bits, got {self.bits!r}")

    @property
    def wp(self):
        return self.bits + GUARD_BITS

    @property
    def mp(self):
        return _near(self.wp)

    def real(self, x):
        return Real.coerce(x, self.bits)

    def doubled(self):
        return PrecisionContext(self.bits * 2)


class Real:
    """An arbitrary-precision real ``value`` with a sound absolute bound ``err``.

    The true quantity lies in ``[value - err, value + err]``.
    """

    __slots__ = ("value", "err", "bits")

    def __init__(self, value, err=_ZERO, bits=DEFAULT_BITS):
        self.bits = bits
        self.value = value if isinstance(value, _MPFR) else mpfr(value, bits + GUARD_BITS)
        err = err if isinstance(err, _MPFR) else mpfr(err)
        if err < 0:
            raise ValueError("error bound must be non-negative")
        self.err = err

    # -- construction -------------------------------------------------------
    @classmethod
    def from_rational(cls, x, bits=DEFAULT_BITS):
        wp = bits + GUARD_BITS
        x = Fraction(x)
        if x.denominator == 1:
            v = mpfr(mpz(x.numerator), wp)
        else:
            v = _near(wp).div(mpz(x.numerator), mpz(x.denominator))
        num, den = v.as_integer_ratio()
        exact = Fraction(int(num), int(den)) == x
        return cls(v, _ZERO if exact else ulp(v, wp), bits)

    @classmethod
    def coerce(cls, x, bits=DEFAULT_BITS):
        if isinstance(x, Real):
            return x
        if isinstance(x, (int, Fraction)):
            return cls.from_rational(x, bits)
        raise TypeError(f"cannot interpret {type(x).__name__} as Real")

    @classmethod
    def from_decimal(cls, text, err=None, bits=DEFAULT_BITS):
        """Parse a decimal string; the half-unit of its last digit is added to ``err``.

        Integer literals such as "0" or "-3" are taken as exact.
        """
        wp = bits + GUARD_BITS
        text = text.strip()
        d = Decimal(text)
        v = mpfr(text, wp)
        exact = text.lstrip("+-").isdigit()
        total = mpfr(0) if exact and v == int(text) else ulp(v, wp)
        exponent = d.as_tuple().exponent
        if isinstance(exponent, int) and not exact:
            half = Fraction(1, 2) * Fraction(10) ** exponent
            total = _eadd(total, _UP.div(mpz(half.numerator), mpz(half.denominator)))
        if err is not None:
            e = Fraction(Decimal(str(err).strip()))
            total = _eadd(total, _UP.div(mpz(e.numerator), mpz(e.denominator)))
        return cls(v, total, bits)

    # -- inspection ---------------------------------------------------------
    @property
    def wp(self):
        return self.bits + GUARD_BITS

    def lower(self):
        return _down(self.wp).sub(self.value, self.err)

    def upper(self):
        return _up(self.wp).add(self.value, self.err)

    def mag(self):
        """Upper bound on ``|x|``."""
        return _UP.add(_UP.abs(self.value), self.err)

    def mig(self):
        """Lower bound on ``|x|`` (zero if the interval straddles zero)."""
        m = _DOWN.sub(_DOWN.abs(self.value), self.err)
        return m if m > 0 else _ZERO

    def contains_zero(self):
        return _UP.abs(self.value) <= self.err

    def is_positive(self):
        return self.value > self.err

    def is_negative(self):
        return self.value < -self.err

    def sign(self):
        """+1 or -1 when decided, 0 when the interval contains zero."""
        if self.is_positive():
            return 1
        if self.is_negative():
            return -1
        return 0

    def relative_err(self):
        if self.value == 0:
            return mpfr("inf") if self.err else _ZERO
        return _UP.div(self.err, _DOWN.abs(self.value))

    def __float__(self):
        return float(self.value)

    def __repr__(self):
        return f"Real({format_decimal(self.value, 20)} +/- {float(self.err):.2e})"

    # -- arithmetic ---------------------------------------------------------
    def _other(self, other):
        if isinstance(other, Real):
            return other
        if isinstance(other, (int, Fraction)):
            return Real.from_rational(other, self.bits)
        return NotImplemented

    def __neg__(self):
        return Real(_near(self.wp).minus(self.value), self.err, self.bits)

    def __pos__(self):
        return self

    def __abs__(self):
        return Real(_near(self.wp).abs(self.value), self.err, self.bits)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        bits = max(self.bits, other.bits)
        wp = bits + GUARD_BITS
        v = _near(wp).add(self.value, other.value)
        return Real(v, _eadd(self.err, other.err, ulp(v, wp)), bits)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        bits = max(self.bits, other.bits)
        wp = bits + GUARD_BITS
        v = _near(wp).mul(self.value, other.value)
        err = _eadd(
            _emul(_UP.abs(self.value), other.err),
            _emul(_UP.abs(other.value), self.err),
            _emul(self.err, other.err),
            ulp(v, wp),
        )
        return Real(v, err, bits)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        denom_low = other.mig()
        if denom_low == 0:
            raise ZeroDivisionError("divisor interval contains zero")
        bits = max(self.bits, other.bits)
        wp = bits + GUARD_BITS
        v = _near(wp).div(self.value, other.value)
        num = _eadd(self.err, _emul(_UP.div(_UP.abs(self.value), _DOWN.abs(other.value)), other.err))
        err = _eadd(_UP.div(num, denom_low), ulp(v, wp))
        return Real(v, err, bits)

    def __rtruediv__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other / self

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            return NotImplemented
        result = Real.from_rational(1, self.bits)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def sqrt(self):
        wp = self.wp
        lo = self.lower()
        if lo > 0:
            v = _near(wp).sqrt(self.value)
            err = _eadd(_UP.div(self.err, _DOWN.mul(2, _DOWN.sqrt(lo))), ulp(v, wp))
            return Real(v, err, self.bits)
        # interval reaches zero: cover [0, sqrt(upper)]
        hi = _UP.sqrt(self.upper()) if self.upper() > 0 else _ZERO
        half = _UP.div(hi, 2)
        return Real(_near(wp).plus(half), half, self.bits)

    def with_err(self, extra):
        return Real(self.value, _eadd(self.err, extra), self.bits)


class Complex:
    """Pair of Reals; error soundness holds componentwise."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=None):
        if not isinstance(re, Real):
            raise TypeError("Complex components must be Real")
        self.re = re
        self.im = im if im is not None else Real(_ZERO, _ZERO, re.bits)

    @property
    def bits(self):
        return max(self.re.bits, self.im.bits)

    @classmethod
    def coerce(cls, x, bits=DEFAULT_BITS):
        if isinstance(x, Complex):
            return x
        return cls(Real.coerce(x, bits))

    def _other(self, other):
        if isinstance(other, Complex):
            return other
        if isinstance(other, (Real, int, Fraction)):
            return Complex(Real.coerce(other, self.bits))
        return NotImplemented

    def __neg__(self):
        return Complex(-self.re, -self.im)

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Complex(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return Complex(self.re - other.re, self.im - other.im)

    def __rsub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        if isinstance(other, (Real, int, Fraction)):
            r = Real.coerce(other, self.bits)
            return Complex(self.re * r, self.im * r)
        other = self._other(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.re, self.im, other.re, other.im
        return Complex(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (Real, int, Fraction)):
            r = Real.coerce(other, self.bits)
            return Complex(self.re / r, self.im / r)
        other = self._other(other)
        if other is NotImplemented:
            return other
        den = other.re * other.re + other.im * other.im
        num = self * other.conj()
        return Complex(num.re / den, num.im / den)

    def conj(self):
        return Complex(self.re, -self.im)

    def abs2(self):
        return self.re * self.re + self.im * self.im

    def __abs__(self):
        if self.im.value == 0 and self.im.err == 0:
            return abs(self.re)
        if self.re.value == 0 and self.re.err == 0:
            return abs(self.im)
        return self.abs2().sqrt()

    def contains_zero(self):
        return self.re.contains_zero() and self.im.contains_zero()

    def is_real_exactly(self):
        return self.im.value == 0 and self.im.err == 0

    @property
    def err(self):
        return _eadd(self.re.err, self.im.err)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        return f"Complex({self.re!r}, {self.im!r})"


def format_decimal(x, digits):
    """Render an mpfr as a decimal string with ``digits`` significant digits."""
    if x == 0:
        return "0"
    if not gmpy2.is_finite(x):
        return str(x)
    mant, exp, _ = x.digits(10, digits)
    sign = ""
    if mant.startswith("-"):
        sign, mant = "-", mant[1:]
    body = mant[0] + ("." + mant[1:] if len(mant) > 1 else "")
    return f"{sign}{body}e{exp - 1}"


def format_err(err):
    """Decimal string that is an upper bound for ``err`` (4 significant digits)."""
    if err == 0:
        return "0"
    bumped = _UP.mul(err, _UP.add(1, _UP.mul_2exp(mpfr(1), -10)))
    return format_decimal(bumped, 4)


def format_lower(x):
    """Decimal string that is a lower bound for a non-negative ``x`` (4 significant digits)."""
    if x <= 0:
        return format_decimal(x, 4)
    shrunk = _DOWN.mul(x, _DOWN.sub(1, _UP.mul_2exp(mpfr(1), -10)))
    return format_decimal(shrunk, 4)


def decimal_digits(bits):
    return int(math.ceil(bits * math.log10(2))) + 3


# -- constants and special functions -------------------------------------------


@lru_cache(maxsize=None)
def _pi(bits):
    wp = bits + GUARD_BITS
    v = _near(wp).const_pi()
    return Real(v, ulp(v, wp), bits)


def pi(ctx):
    """pi with a one-ulp (correctly rounded) error bound."""
    return _pi(ctx.bits)


def log_real(x, ctx):
    """Natural logarithm of a positive Real (or positive rational)."""
    x = Real.coerce(x, ctx.bits)
    lo = x.lower()
    if lo <= 0:
        raise NonPositiveInput(f"log_real needs an input bounded away from zero, got {x!r}")
    bits = max(ctx.bits, x.bits)
    wp = bits + GUARD_BITS
    v = _near(wp).log(x.value)
    err = _eadd(_UP.div(x.err, _DOWN.plus(lo)), ulp(v, wp))
    return Real(v, err, bits)


@lru_cache(maxsize=None)
def root_of_unity(n, r, bits):
    """exp(2 pi i r / n) as a Complex; the eight axis-aligned cases are exact."""
    r %= n
    one, zero = Real.from_rational(1, bits), Real.from_rational(0, bits)
    if (4 * r) % n == 0:
        quarter = (4 * r) // n
        return {
            0: Complex(one, zero),
            1: Complex(zero, one),
            2: Complex(-one, zero),
            3: Complex(zero, -one),
        }[quarter]
    wp = bits + GUARD_BITS
    angle = _pi(bits) * Fraction(2 * r, n)
    s, c = _near(wp).sin_cos(angle.value)
    return Complex(
        Real(c, _eadd(angle.err, ulp(c, wp)), bits),
        Real(s, _eadd(angle.err, ulp(s, wp)), bits),
    )


# Tangent numbers give B_{2k} with integer-only arithmetic.
_tangent = [0, 1]


def _tangent_numbers(n):
    if len(_tangent) > n:
        return _tangent
    n = max(n, 2 * len(_tangent))
    t = [0] * (n + 1)
    t[1] = 1
    for k in range(2, n + 1):
        t[k] = (k - 1) * t[k - 1]
    for k in range(2, n + 1):
        for j in range(k, n + 1):
            t[j] = (j - k) * t[j - 1] + (j - k + 2) * t[j]
    _tangent[:] = t
    return _tangent


def bernoulli_even(k):
    """Exact B_{2k} for k >= 1."""
    t = _tangent_numbers(k)[k]
    four_k = 4**k
    sign = 1 if k % 2 == 1 else -1
    return Fraction(sign * 2 * k * t, four_k * (four_k - 1))


@lru_cache(maxsize=4096)
def _digamma(a, q, bits):
    wp = bits + GUARD_BITS
    mp = _near(wp)
    target = max(bits // 4, 8)
    shift = max(0, -((a - target * q) // q))  # smallest N with a/q + N >= target
    # psi(x) = psi(x + N) - sum_{j<N} q / (a + j q); terms are positive.
    s = _ZERO
    for j in range(shift):
        s = mp.add(s, mp.div(q, a + j * q))
    shift_sum = Real(s, _emul(mpfr(2 * shift), ulp(s, wp)), bits)

    y = Real.from_rational(Fraction(a + shift * q, q), bits)
    inv_y2 = Real.from_rational(Fraction(q * q, (a + shift * q) ** 2), bits)
    asym = log_real(y, PrecisionContext(bits)) - Real.from_rational(Fraction(q, 2 * (a + shift * q)), bits)
    tol = _UP.mul_2exp(mpfr(1), -(wp + 2))
    power = inv_y2
    k = 1
    while True:
        term = power * Real.from_rational(bernoulli_even(k) / (2 * k), bits)
        if term.mag() < tol:
            truncation = _UP.mul(2, term.mag())  # remainder <= first omitted term
            break
        asym = asym - term
        power = power * inv_y2
        k += 1
    return (asym - shift_sum).with_err(truncation)


def digamma_rational(a, q, ctx):
    """psi(a/q) for integers 1 <= a <= q."""
    if not (isinstance(a, int) and isinstance(q, int)) or q < 1 or not 1 <= a <= q:
        raise OutOfRange(f"digamma_rational needs 1 <= a <= q, got a={a}, q={q}")
    g = math.gcd(a, q)
    return _digamma(a // g, q // g, ctx.bits)


@lru_cache(maxsize=4096)
def _cot_pi(r, q, bits):
    if 2 * r == q:
        return Real.from_rational(0, bits)
    wp = bits + GUARD_BITS
    angle = _pi(bits) * Fraction(r, q)
    t = _near(wp).cot(angle.value)
    # d/dx cot x = -(1 + cot^2 x); factor 2 covers the slope over the tiny interval
    slope = _UP.add(1, _UP.mul(t, t))
    return Real(t, _eadd(_emul(2, slope, angle.err), ulp(t, wp)), bits)


def cot_pi(a, q, ctx):
    """cot(pi a / q)."""
    if q == 0:
        raise PoleAtInteger("q must be non-zero")
    frac = Fraction(a, q) % 1
    if frac == 0:
        raise PoleAtInteger(f"cot(pi*{a}/{q}) has a pole: {a}/{q} is an integer")
    return _cot_pi(frac.numerator, frac.denominator, ctx.bits)


@lru_cache(maxsize=None)
def cot_poly(j):
    """Integer coefficients (ascending) of P_j with d^j/dz^j cot(pi z) = pi^j P_j(cot pi z)."""
    if j == 0:
        return (0, 1)
    prev = cot_poly(j - 1)
    deriv = [i * c for i, c in enumerate(prev)][1:] or [0]
    out = [0] * (len(deriv) + 2)
    for i, c in enumerate(deriv):
        out[i] -= c
        out[i + 2] -= c
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return tuple(out)


def eval_poly(coeffs, x):
    acc = Real.from_rational(coeffs[-1], x.bits)
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def cot_derivative(k, a, q, ctx):
    """(d/dz)^(k-1) cot(pi z) at z = a/q."""
    if not isinstance(k, int) or k < 1:
        raise OutOfRange(f"derivative order k must be >= 1, got {k}")
    t = cot_pi(a, q, ctx)
    if k == 1:
        return t
    return eval_poly(cot_poly(k - 1), t) * (pi(ctx) ** (k - 1))
