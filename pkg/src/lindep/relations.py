"""Integer and cyclotomic-coefficient relation search with checkable certificates.

A search builds the lattice spanned by the rows (e_i | round(S * c_i)) where the
c_i are the scaled constraint columns, LLL-reduces it, and then either

* finds a short row whose coefficient part is bounded by B and whose exact
  re-evaluation against the interval inputs contains zero (a relation), or
* proves from the Gram-Schmidt norms that every lattice vector is longer than
  any relation of height <= B could be (no relation up to B), or
* reports that neither could be decided at this precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpz

from .cyclotomic import CycloElt, embed_complex, euler_phi, normalize_modulus
from .errors import PrecisionTooLow, ValuesTooUncertain
from .lattice import DEFAULT_DELTA, lll_reduce
from .numerics import _DOWN, _UP, Complex, PrecisionContext, Real, format_decimal, format_err, root_of_unity

DEFAULT_BOUND = 2**20
PRECISION_MARGIN = 128
SCALE_SLACK = 64


@dataclass
class RelationCertificate:
    ids: list
    coefficients: list  # ints, or CycloElt for field relations
    residual: object  # mpfr upper bound on |sum c_i x_i|
    bound: int
    bits: int
    modulus: int = 1
    kind: str = "relation"
    vector: list = field(default_factory=list)  # the integer lattice solution

    @property
    def height(self):
        return max(abs(r) for r in self.vector)

    def to_json(self):
        if self.modulus == 1:
            coeffs = [str(c) for c in self.coefficients]
        else:
            coeffs = [c.to_json() for c in self.coefficients]
        return {
            "kind": self.kind,
            "ids": list(self.ids),
            "coefficients": coeffs,
            "residual": format_err(self.residual),
            "bound": self.bound,
            "precision": self.bits,
            "modulus": self.modulus,
        }


@dataclass
class NoRelationCertificate:
    """No relation of height <= bound exists, provided the inputs' error bounds hold.

    ``conclusive`` is False when the reduced lattice was not long enough to
    rule relations out; that outcome means "undecided", not "independent".
    """

    ids: list
    bound: int
    bits: int
    norm_floor: object  # mpfr lower bound on every nonzero lattice vector
    threshold: object  # mpfr upper bound on the lattice length of any relation
    conclusive: bool = True
    modulus: int = 1
    kind: str = "no-relation"
    notes: list = field(default_factory=list)

    def to_json(self):
        return {
            "kind": self.kind if self.conclusive else "undecided",
            "ids": list(self.ids),
            "coefficients": None,
            "residual": None,
            "bound": self.bound,
            "precision": self.bits,
            "modulus": self.modulus,
            "norm_floor": format_decimal(self.norm_floor, 6),
            "threshold": format_decimal(self.threshold, 6),
        }


def _scaled_int(x, shift):
    """round(x * 2^shift) for an mpfr x, computed exactly."""
    return round(_frac(x) * 2**shift)


def _frac(x):
    num, den = x.as_integer_ratio()
    return Fraction(int(num), int(den))


def _is_exact_zero(x):
    return x.value == 0 and x.err == 0


def _search(columns, bound, ctx, ids, deep=False):
    """Core search: integer r with sum_i r_i * columns[c][i] = 0 for every constraint c.

    Returns (coefficient vector or None, evidence dict).
    """
    n = len(columns[0])
    columns = [col for col in columns if not all(_is_exact_zero(x) for x in col)]
    if not columns:
        # every constraint vanishes identically: the first unit vector is a relation
        return [1] + [0] * (n - 1), {}
    needed = n * math.log2(bound) + PRECISION_MARGIN
    if ctx.bits < needed:
        raise PrecisionTooLow(f"{n} unknowns with bound 2^{math.log2(bound):.1f} need >= {math.ceil(needed)} bits, got {ctx.bits}")
    shift = ctx.bits - SCALE_SLACK
    maxerr = max(x.err for col in columns for x in col)
    scaled_err = _UP.mul_2exp(maxerr, shift)
    if scaled_err > 1:
        raise ValuesTooUncertain(f"input error {float(maxerr):.3e} exceeds the detection scale 2^-{shift}")

    basis = [[int(i == j) for j in range(n)] + [_scaled_int(col[i].value, shift) for col in columns] for i in range(n)]
    reduced, norms = lll_reduce(basis, DEFAULT_DELTA, deep=deep)

    for row in reduced:
        r = row[:n]
        if any(r) and max(abs(v) for v in r) <= bound and _form_contains_zero(columns, r):
            g = math.gcd(*r)
            r = [v // g for v in r]
            if next(v for v in r if v) < 0:
                r = [-v for v in r]
            return r, {}

    # a relation r with |r_i| <= B maps to a lattice vector of squared length at most
    # n B^2 + (#constraints) * (n B (1/2 + S * maxerr))^2
    per_col = Fraction(n * bound) * (Fraction(1, 2) + _frac(scaled_err))
    threshold_sq = n * bound * bound + len(columns) * per_col * per_col
    floor_sq = min(norms)
    floor = _DOWN.sqrt(_DOWN.div(mpz(floor_sq.numerator), mpz(floor_sq.denominator)))
    threshold = _UP.sqrt(_UP.div(mpz(threshold_sq.numerator), mpz(threshold_sq.denominator)))
    return None, {"floor": floor, "threshold": threshold, "conclusive": floor_sq > threshold_sq}


def _linear_form(column, r):
    acc = None
    for x, c in zip(column, r):
        if c:
            term = x * c
            acc = term if acc is None else acc + term
    return acc


def _form_contains_zero(columns, r):
    for col in columns:
        v = _linear_form(col, r)
        if v is not None and not v.contains_zero():
            return False
    return True


def _as_complex(x, bits):
    if isinstance(x, Complex):
        return x
    return Complex(Real.coerce(x, bits))


def _components(xs, bits):
    """(real parts, imaginary parts) of the inputs."""
    cs = [_as_complex(x, bits) for x in xs]
    return [c.re for c in cs], [c.im for c in cs]


def _ids(ids, count):
    return list(ids) if ids is not None else [f"x{i}" for i in range(count)]


def find_integer_relation(xs, B=DEFAULT_BOUND, ctx=None, ids=None, deep=False):
    """Search for nonzero integers c, max|c_i| <= B, with sum c_i x_i = 0.

    Complex inputs impose the relation on both real and imaginary parts.
    """
    ctx = ctx or PrecisionContext(1024)
    if len(xs) < 2:
        raise ValueError("need at least two values")
    re, im = _components(xs, ctx.bits)
    r, evidence = _search([re, im], B, ctx, ids, deep)
    ids = _ids(ids, len(xs))
    if r is not None:
        residual = _residual_bound(verify_relation(xs, r, ctx))
        return RelationCertificate(ids, r, residual, B, ctx.bits, vector=r)
    return NoRelationCertificate(ids, B, ctx.bits, evidence["floor"], evidence["threshold"], evidence["conclusive"])


def find_field_relation(xs, m=1, B=DEFAULT_BOUND, ctx=None, ids=None, deep=False):
    """Relation sum c_j x_j = 0 with c_j in Z[zeta_m], each c_j = sum_i r_ij zeta_m^i, |r_ij| <= B."""
    ctx = ctx or PrecisionContext(1024)
    m = normalize_modulus(m)
    if m == 1:
        return find_integer_relation(xs, B, ctx, ids, deep)
    if len(xs) < 1:
        raise ValueError("need at least one value")
    bits = ctx.bits
    phi = euler_phi(m)
    values = [_as_complex(x, bits) for x in xs]
    re_col, im_col = [], []
    # unknown r_ij ordered value-major: index j * phi + i
    for x in values:
        for i in range(phi):
            t = root_of_unity(m, i, bits) * x
            re_col.append(t.re)
            im_col.append(t.im)
    r, evidence = _search([re_col, im_col], B, ctx, ids, deep)
    ids = _ids(ids, len(xs))
    if r is not None:
        coeffs = [CycloElt.from_coeffs(m, r[j * phi : (j + 1) * phi]) for j in range(len(xs))]
        residual = _residual_bound(verify_relation(xs, coeffs, ctx))
        return RelationCertificate(ids, coeffs, residual, B, bits, modulus=m, vector=r)
    return NoRelationCertificate(ids, B, bits, evidence["floor"], evidence["threshold"], evidence["conclusive"], modulus=m)


def find_vector_relation(rows, B=DEFAULT_BOUND, ctx=None, ids=None, deep=False):
    """Integers c with sum_i c_i * rows[i] = 0 componentwise (rows are lists of Real)."""
    ctx = ctx or PrecisionContext(1024)
    if len(rows) < 2:
        raise ValueError("need at least two rows")
    columns = [list(col) for col in zip(*rows)]
    r, evidence = _search(columns, B, ctx, ids, deep)
    ids = _ids(ids, len(rows))
    if r is not None:
        residual = max(_linear_form(col, r).mag() for col in columns)
        return RelationCertificate(ids, r, residual, B, ctx.bits, kind="vector-relation", vector=r)
    return NoRelationCertificate(ids, B, ctx.bits, evidence["floor"], evidence["threshold"], evidence["conclusive"])


def verify_relation(xs, coefficients, ctx=None):
    """Evaluate sum c_i x_i with exact coefficients in interval arithmetic.

    Returns a Real for real inputs and integer coefficients, otherwise a Complex.
    """
    if len(xs) != len(coefficients):
        raise ValueError("values and coefficients differ in length")
    if all(_coefficient_is_zero(c) for c in coefficients):
        raise ValueError("all coefficients are zero")
    ctx = ctx or PrecisionContext(max(getattr(x, "bits", 64) for x in xs))
    real_inputs = all(isinstance(x, (Real, int, Fraction)) for x in xs)
    exact = all(isinstance(c, (int, Fraction)) or (isinstance(c, CycloElt) and c.is_rational()) for c in coefficients)
    if real_inputs and exact:
        acc = Real.from_rational(0, ctx.bits)
        for x, c in zip(xs, coefficients):
            c = c.rational_value() if isinstance(c, CycloElt) else c
            if c:
                acc = acc + Real.coerce(x, ctx.bits) * c
        return acc
    acc = Complex(Real.from_rational(0, ctx.bits))
    for x, c in zip(xs, coefficients):
        if _coefficient_is_zero(c):
            continue
        cval = embed_complex(c, 1, ctx) if isinstance(c, CycloElt) else c
        acc = acc + _as_complex(x, ctx.bits) * cval
    return acc


def _coefficient_is_zero(c):
    return c.is_zero() if isinstance(c, CycloElt) else c == 0


def _residual_bound(v):
    if isinstance(v, Real):
        return v.mag()
    return max(v.re.mag(), v.im.mag())


def relation_holds(xs, coefficients, ctx=None):
    """True when the evaluated linear form is consistent with zero."""
    return verify_relation(xs, coefficients, ctx).contains_zero()


def certificate_from_json(data):
    """Rebuild the coefficient list stored in a serialised certificate."""
    if data.get("coefficients") is None:
        return None
    if int(data.get("modulus", 1)) == 1:
        return [int(c) for c in data["coefficients"]]
    return [CycloElt.from_json(c) for c in data["coefficients"]]
