"""L(1, f) for periodic f by several independent routes.

The digamma route is exact up to the digamma error bound and is the one every
other route is checked against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .characters import DirichletCharacter, PeriodicFunction
from .cyclotomic import CycloElt, embed_complex
from .errors import NonzeroPeriodSum, NotOddCharacter, OutOfRange, UnitSumVanishes
from .numerics import (
    _DOWN,
    _UP,
    GUARD_BITS,
    Complex,
    Real,
    cot_pi,
    digamma_rational,
    format_decimal,
    format_err,
    pi,
    root_of_unity,
)
from .units import unit_indices, xi

METHODS = ("series", "digamma", "cotangent", "logform")
SERIES_MAX_TERMS = 10**7


@dataclass
class LValueRecord:
    subject: str
    method: str
    value: Complex
    bits: int
    kind: str = "function"

    @property
    def err(self):
        return self.value.err

    def agrees_with(self, other):
        """Both intervals overlap in each component."""
        return (self.value - other.value).contains_zero()

    def to_json(self):
        digits = max(8, int((self.bits + GUARD_BITS) * math.log10(2)) + 2)
        return {
            "id": self.subject,
            "kind": self.kind,
            "method": self.method,
            "value": format_decimal(self.value.re.value, digits),
            "imag": format_decimal(self.value.im.value, digits),
            "err": format_err(self.err),
            "precision": self.bits,
        }


def _as_function(f):
    if isinstance(f, DirichletCharacter):
        return PeriodicFunction.from_character(f), "character"
    return f, "function"


def _require_zero_sum(f):
    if f.period_sum != 0:
        raise NonzeroPeriodSum(
            f"sum of {f.id} over a period is {f.period_sum}; L(s, f) has a pole at s = 1"
        )


def value_complex(v, ctx):
    """Exact value (rational or CycloElt) as a Complex at ctx."""
    if isinstance(v, CycloElt):
        if v.is_rational():
            return Complex(Real.from_rational(v.rational_value(), ctx.bits))
        if v.den == 1 and sum(1 for c in v.nums if c) == 1:
            j = next(i for i, c in enumerate(v.nums) if c)
            return root_of_unity(v.n, j, ctx.bits) * v.nums[j]
        return embed_complex(v, 1, ctx)
    return Complex(Real.from_rational(Fraction(v), ctx.bits))


def _char_value(chi, a, ctx):
    t = chi.log_value(a)
    return None if t is None else root_of_unity(chi.phi, t, ctx.bits)


def l_one_digamma(f, ctx):
    """L(1, f) = -(1/q) sum_{a=1}^{q} f(a) psi(a/q)."""
    f, kind = _as_function(f)
    _require_zero_sum(f)
    q = f.q
    acc = Complex(Real.from_rational(0, ctx.bits))
    for a in range(1, q + 1):
        v = f(a)
        if v == 0:
            continue
        acc = acc + value_complex(v, ctx) * digamma_rational(a, q, ctx)
    return LValueRecord(f.id, "digamma", acc * Fraction(-1, q), ctx.bits, kind)


def l_one_cot(chi, ctx):
    """(pi/q) sum_{1 <= a < q/2, (a,q)=1} chi(a) cot(pi a/q) for odd chi."""
    if not isinstance(chi, DirichletCharacter) or chi.q <= 2 or not chi.is_odd():
        raise NotOddCharacter(f"{getattr(chi, 'id', chi)} is not an odd character")
    q = chi.q
    acc = Complex(Real.from_rational(0, ctx.bits))
    for a in range(1, q):
        if 2 * a < q and math.gcd(a, q) == 1:
            acc = acc + _char_value(chi, a, ctx) * cot_pi(a, q, ctx)
    return LValueRecord(chi.id, "cotangent", acc * pi(ctx) / q, ctx.bits, "character")


def l_one_series(f, N, ctx):
    """Partial sum to N in double precision plus an Abel-summation tail bound.

    Meant as an independent low-precision oracle, never as a source of digits.
    """
    f, kind = _as_function(f)
    _require_zero_sum(f)
    if not 1 <= N <= SERIES_MAX_TERMS:
        raise OutOfRange(f"series length must be in [1, {SERIES_MAX_TERMS}], got {N}")
    q = f.q
    period = np.array([complex(value_complex(v, ctx)) for v in f.values])
    n = np.arange(1, N + 1, dtype=np.float64)
    terms = period[(np.arange(N) % q)] / n
    total = complex(np.sum(terms))
    # |sum_{n>N} f(n)/n| <= 2 M / (N + 1), M the largest partial sum over a period
    partial = np.cumsum(period)
    tail = 2 * float(np.max(np.abs(partial))) / (N + 1)
    # pairwise summation error, with a generous constant
    rounding = 4 * math.log2(N + 1) * np.finfo(float).eps * float(np.sum(np.abs(terms)))
    err = _UP.add(tail, _UP.add(rounding, 1e-15 * (1 + abs(total))))
    value = Complex(Real(total.real, err, ctx.bits), Real(total.imag, err, ctx.bits))
    return LValueRecord(f.id, "series", value, ctx.bits, kind)


def unit_sum(chi, ctx):
    """sum over 1 < a < q/2, (a,q)=1 of conj(chi(a)) log|xi_a| (embedding k = 1)."""
    acc = Complex(Real.from_rational(0, ctx.bits))
    for a in unit_indices(chi.q):
        t = chi.log_value(a)
        acc = acc + root_of_unity(chi.phi, -t, ctx.bits) * xi(chi.q, a).log_abs(ctx)
    return acc


def l_one_logform(chi, ctx):
    """(record, delta, unitsum) with L(1, chi) = delta * unitsum for even nontrivial chi."""
    if not isinstance(chi, DirichletCharacter) or not chi.is_even() or chi.is_trivial() or chi.q <= 4:
        raise OutOfRange(f"{getattr(chi, 'id', chi)} is not an even nontrivial character with q > 4")
    usum = unit_sum(chi, ctx)
    if usum.contains_zero():
        raise UnitSumVanishes(f"unit sum for {chi.id} is indistinguishable from zero at {ctx.bits} bits")
    base = l_one_digamma(chi, ctx)
    delta = base.value / usum
    record = LValueRecord(chi.id, "logform", delta * usum, ctx.bits, "character")
    return record, delta, usum


def modulus_bounds(z):
    """(lower, upper) bounds on |z| for a Complex z."""
    lo_re, lo_im = z.re.mig(), z.im.mig()
    hi_re, hi_im = z.re.mag(), z.im.mag()
    lower = _DOWN.sqrt(_DOWN.add(_DOWN.mul(lo_re, lo_re), _DOWN.mul(lo_im, lo_im)))
    upper = _UP.sqrt(_UP.add(_UP.mul(hi_re, hi_re), _UP.mul(hi_im, hi_im)))
    return lower, upper


def verify_nonvanishing(f, ctx):
    """(nonzero, margin): nonzero when |L(1, f)| > err; margin = |value| - err.

    A False result only means the digamma value did not separate from zero.
    """
    record = l_one_digamma(f, ctx)
    z = record.value
    if not z.contains_zero():
        lower, _ = modulus_bounds(z)
        return True, Real(lower, 0, ctx.bits)
    centre = _UP.sqrt(_UP.add(_UP.mul(z.re.value, z.re.value), _UP.mul(z.im.value, z.im.value)))
    return False, Real(_DOWN.sub(centre, z.err), 0, ctx.bits)


def cross_check(*records):
    """True when every pair of records overlaps within their summed error."""
    return all(a.agrees_with(b) for i, a in enumerate(records) for b in records[i + 1 :])


def identify_delta(delta, m, B, ctx):
    """Best-effort: express delta in Q(zeta_m) via a relation c0*delta + c1 = 0.

    Returns a CycloElt or None. Heuristic: a hit is only a numerical identity.
    """
    from .relations import RelationCertificate, find_field_relation

    one = Complex(Real.from_rational(1, ctx.bits))
    cert = find_field_relation([delta, one], m, B, ctx, ids=["delta", "1"])
    if isinstance(cert, RelationCertificate) and not cert.coefficients[0].is_zero():
        c0, c1 = cert.coefficients
        return -c1 / c0
    return None
