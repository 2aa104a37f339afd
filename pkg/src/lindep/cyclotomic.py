"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the power basis 1, z, ..., z^(phi(n)-1) reduced modulo
the cyclotomic polynomial, as integer numerators over one positive common
denominator.  Moduli n = 2 (mod 4) are replaced by n/2 since Q(zeta_2m) =
Q(zeta_m) for odd m.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache, reduce

from .errors import NotCoprime
from .numerics import Complex, Real, root_of_unity


def factorize(n):
    """Prime factorisation as an ascending list of (p, e)."""
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1 if p == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


@lru_cache(maxsize=None)
def euler_phi(n):
    result = n
    for p, _ in factorize(n):
        result -= result // p
    return result


def normalize_modulus(n):
    if n < 1:
        raise ValueError(f"modulus must be positive, got {n}")
    return n // 2 if n % 4 == 2 else n


def lcm(*values):
    return reduce(lambda a, b: a * b // math.gcd(a, b), values, 1)


def _poly_divexact(num, den):
    """Exact division of integer polynomials (ascending coefficients, monic divisor)."""
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1]
        out[i] = c
        if c:
            for j, d in enumerate(den):
                num[i + j] -= c * d
    if any(num[: len(den) - 1]):
        raise ArithmeticError("inexact polynomial division")
    return out


@lru_cache(maxsize=None)
def cyclotomic_poly(n):
    """Integer coefficients of Phi_n, constant term first."""
    poly = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            poly = _poly_divexact(poly, cyclotomic_poly(d))
    return tuple(poly)


@lru_cache(maxsize=None)
def _power_table(n):
    """Rows k = 0..n-1: coefficient vector of z^k in the reduced power basis."""
    phi = euler_phi(n)
    phi_poly = cyclotomic_poly(n)
    rows = []
    for k in range(phi):
        row = [0] * phi
        row[k] = 1
        rows.append(tuple(row))
    current = list(rows[-1])
    for _ in range(phi, n):
        top = current[-1]
        shifted = [0] + current[:-1]
        if top:
            for j in range(phi):
                shifted[j] -= top * phi_poly[j]
        current = shifted
        rows.append(tuple(current))
    return rows


def _reduce(n, vec):
    """Reduce a length-n exponent vector (coefficient of z^k at index k) to the power basis."""
    phi = euler_phi(n)
    out = list(vec[:phi])
    table = _power_table(n)
    for k in range(phi, n):
        c = vec[k]
        if c:
            row = table[k]
            for j in range(phi):
                if row[j]:
                    out[j] += c * row[j]
    return out


class CycloElt:
    """Immutable element of Q(zeta_n) with canonical representation."""

    __slots__ = ("n", "nums", "den")

    def __init__(self, n, nums, den=1):
        if n != normalize_modulus(n):
            raise ValueError("use CycloElt.from_coeffs for moduli = 2 mod 4")
        if len(nums) != euler_phi(n):
            raise ValueError(f"expected {euler_phi(n)} coefficients for modulus {n}")
        if den == 0:
            raise ZeroDivisionError("zero denominator")
        g = reduce(math.gcd, nums, den)
        if den < 0:
            g = -g
        self.n = n
        self.nums = tuple(c // g for c in nums)
        self.den = den // g

    # -- constructors -------------------------------------------------------
    @classmethod
    def from_coeffs(cls, n, coeffs):
        """Element with power-basis rational coefficients; n may be = 2 mod 4."""
        coeffs = [Fraction(c) for c in coeffs]
        if normalize_modulus(n) != n:
            m = n // 2
            total = cls.rational(0, m)
            for j, c in enumerate(coeffs):
                if c:
                    total = total + zeta_power(n, j) * c
            return total
        den = lcm(*(c.denominator for c in coeffs))
        vec = [0] * n
        for j, c in enumerate(coeffs):
            vec[j % n] += int(c * den)
        return cls._from_exponents(n, vec, den)

    @classmethod
    def rational(cls, x, n=1):
        x = Fraction(x)
        n = normalize_modulus(n)
        nums = [0] * euler_phi(n)
        nums[0] = x.numerator
        return cls(n, nums, x.denominator)

    @classmethod
    def _from_exponents(cls, n, vec, den=1):
        return cls(n, _reduce(n, vec), den)

    # -- structure ----------------------------------------------------------
    @property
    def coeffs(self):
        return tuple(Fraction(c, self.den) for c in self.nums)

    @property
    def phi(self):
        return len(self.nums)

    def is_zero(self):
        return not any(self.nums)

    def is_rational(self):
        return not any(self.nums[1:])

    def rational_value(self):
        if not self.is_rational():
            raise ValueError("element is not rational")
        return Fraction(self.nums[0], self.den)

    def lift(self, m):
        """The same element expressed in Q(zeta_m); requires n | m."""
        m = normalize_modulus(m)
        if m == self.n:
            return self
        if m % self.n:
            raise ValueError(f"Q(zeta_{self.n}) is not contained in Q(zeta_{m})")
        step = m // self.n
        vec = [0] * m
        for j, c in enumerate(self.nums):
            if c:
                vec[j * step] += c
        return CycloElt._from_exponents(m, vec, self.den)

    def _coerce_pair(self, other):
        if isinstance(other, (int, Fraction)):
            other = CycloElt.rational(other, self.n)
        elif not isinstance(other, CycloElt):
            return None, None
        if other.n == self.n:
            return self, other
        m = normalize_modulus(lcm(self.n, other.n))
        return self.lift(m), other.lift(m)

    # -- ring operations ------------------------------------------------------
    def __add__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        den = lcm(a.den, b.den)
        fa, fb = den // a.den, den // b.den
        return CycloElt(a.n, [x * fa + y * fb for x, y in zip(a.nums, b.nums)], den)

    __radd__ = __add__

    def __neg__(self):
        return CycloElt(self.n, [-c for c in self.nums], self.den)

    def __sub__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return b + (-a)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            return CycloElt(self.n, [c * other.numerator for c in self.nums], self.den * other.denominator)
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        n = a.n
        if n == 1:
            return CycloElt(1, [a.nums[0] * b.nums[0]], a.den * b.den)
        acc = [0] * n
        for i, x in enumerate(a.nums):
            if x:
                for j, y in enumerate(b.nums):
                    if y:
                        acc[(i + j) % n] += x * y
        return CycloElt._from_exponents(n, acc, a.den * b.den)

    __rmul__ = __mul__

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        if self.is_rational():
            return CycloElt.rational(1 / self.rational_value(), self.n)
        # x^{-1} = (product of the other conjugates) / N(x)
        cofactor = CycloElt.rational(1, self.n)
        for k in range(2, self.n):
            if math.gcd(k, self.n) == 1:
                cofactor = cofactor * galois_apply(k, self)
        norm = (self * cofactor).rational_value()
        return cofactor * (1 / norm)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return self * (1 / Fraction(other))
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return a * b.inverse()

    def __rtruediv__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return b * a.inverse()

    def __pow__(self, k):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElt.rational(1, self.n)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # -- comparison ---------------------------------------------------------
    def __eq__(self, other):
        a, b = self._coerce_pair(other)
        if a is None:
            return NotImplemented
        return a.den == b.den and a.nums == b.nums

    def __hash__(self):
        if self.is_rational():
            return hash(self.rational_value())
        return hash((self.n, self.nums, self.den))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        terms = []
        for j, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if j == 0 else f"{c}*z^{j}")
        return f"CycloElt({self.n}: {' + '.join(terms) or '0'})"

    def to_json(self):
        return {"modulus": self.n, "coeffs": [str(c) for c in self.coeffs]}

    @classmethod
    def from_json(cls, data):
        return cls.from_coeffs(int(data["modulus"]), [Fraction(c) for c in data["coeffs"]])


def zeta_power(n, a):
    """zeta_n^a as an element of Q(zeta_n), modulus normalised."""
    m = normalize_modulus(n)
    if m != n:
        # zeta_{2m} = -zeta_m^{(m+1)/2} for odd m
        a %= n
        sign = -1 if a % 2 else 1
        return zeta_power(m, a * (m + 1) // 2) * sign
    vec = [0] * n
    vec[a % n] = 1
    return CycloElt._from_exponents(n, vec)


def galois_apply(k, x):
    """The automorphism zeta_n -> zeta_n^k applied to x."""
    n = x.n
    if math.gcd(k, n) != 1:
        raise NotCoprime(f"gcd({k}, {n}) != 1")
    if n == 1:
        return x
    vec = [0] * n
    for j, c in enumerate(x.nums):
        if c:
            vec[(j * k) % n] += c
    return CycloElt._from_exponents(n, vec, x.den)


def conjugate(x):
    return galois_apply(-1, x)


def absolute_norm(x):
    """Product of all Galois conjugates of x, as a Fraction."""
    total = CycloElt.rational(1, x.n)
    for k in range(1, max(x.n, 2)):
        if math.gcd(k, x.n) == 1:
            total = total * galois_apply(k, x)
    return total.rational_value()


def embed_complex(x, k, ctx):
    """Numerical image of x under zeta_n -> exp(2 pi i k / n)."""
    n = x.n
    if math.gcd(k, n) != 1:
        raise NotCoprime(f"gcd({k}, {n}) != 1")
    bits = ctx.bits
    zero = Real.from_rational(0, bits)
    acc = Complex(zero, zero)
    for j, c in enumerate(x.nums):
        if c:
            acc = acc + root_of_unity(n, j * k, bits) * c
    if x.den != 1:
        acc = acc / x.den
    return acc


def cyclotomic_intersection_modulus(m, n):
    """Normalised conductor g with Q(zeta_m) ∩ Q(zeta_n) = Q(zeta_g)."""
    return normalize_modulus(math.gcd(normalize_modulus(m), normalize_modulus(n)))


def determinant(matrix):
    """Exact determinant of a square matrix of CycloElt (or rationals) by elimination."""
    size = len(matrix)
    if size == 0:
        return Fraction(1)
    rows = [[e if isinstance(e, CycloElt) else CycloElt.rational(e) for e in row] for row in matrix]
    if any(len(row) != size for row in rows):
        raise ValueError("matrix is not square")
    modulus = normalize_modulus(lcm(*(e.n for row in rows for e in row)))
    rows = [[e.lift(modulus) for e in row] for row in rows]
    det = CycloElt.rational(1, modulus)
    for col in range(size):
        pivot = next((r for r in range(col, size) if not rows[r][col].is_zero()), None)
        if pivot is None:
            return CycloElt.rational(0, modulus)
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, size):
            factor = rows[r][col]
            if factor.is_zero():
                continue
            factor = factor * inv
            rows[r] = [rows[r][j] - factor * rows[col][j] if j >= col else rows[r][j] for j in range(size)]
    return det
