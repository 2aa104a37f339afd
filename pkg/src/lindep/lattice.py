"""Exact-integer LLL reduction.

The integral variant keeps the Gram-Schmidt data as integers (the d_i and
lambda_ij of the classical formulation), so no rounding ever enters the
reduction itself and the output is fully deterministic.
"""

from __future__ import annotations

from fractions import Fraction

DEFAULT_DELTA = Fraction(99, 100)


def _dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def _round_div(a, b):
    """Nearest integer to a/b for b > 0 (ties toward +inf)."""
    return (2 * a + b) // (2 * b)


class IntegralLLL:
    """LLL state over integer row vectors; ``reduce()`` mutates ``basis`` in place."""

    def __init__(self, basis, delta=DEFAULT_DELTA):
        delta = Fraction(delta)
        if not Fraction(1, 4) < delta <= 1:
            raise ValueError("delta must lie in (1/4, 1]")
        self.basis = [list(map(int, row)) for row in basis]
        self.n = len(self.basis)
        self.delta = delta
        self.swaps = 0

    def _gram_schmidt_row(self, k):
        b, d, lam = self.basis, self.d, self.lam
        for j in range(k + 1):
            u = _dot(b[k], b[j])
            for i in range(j):
                u = (d[i + 1] * u - lam[k][i] * lam[j][i]) // d[i]
            if j < k:
                lam[k][j] = u
            else:
                if u == 0:
                    raise ValueError("basis vectors are linearly dependent")
                d[k + 1] = u

    def _size_reduce(self, k, l):
        d, lam, b = self.d, self.lam, self.basis
        if 2 * abs(lam[k][l]) <= d[l + 1]:
            return
        r = _round_div(lam[k][l], d[l + 1])
        b[k] = [x - r * y for x, y in zip(b[k], b[l])]
        lam[k][l] -= r * d[l + 1]
        for i in range(l):
            lam[k][i] -= r * lam[l][i]

    def _swap(self, k, kmax):
        b, d, lam = self.basis, self.d, self.lam
        b[k], b[k - 1] = b[k - 1], b[k]
        for j in range(k - 1):
            lam[k][j], lam[k - 1][j] = lam[k - 1][j], lam[k][j]
        mu = lam[k][k - 1]
        new = (d[k - 1] * d[k + 1] + mu * mu) // d[k]
        for i in range(k + 1, kmax + 1):
            t = lam[i][k]
            lam[i][k] = (d[k + 1] * lam[i][k - 1] - mu * t) // d[k]
            lam[i][k - 1] = (new * t + mu * lam[i][k]) // d[k + 1]
        d[k] = new
        self.swaps += 1

    def reduce(self):
        n = self.n
        if n == 0:
            return self
        p, q = self.delta.numerator, self.delta.denominator
        # d[i] is the Gram determinant of the first i vectors; d[0] = 1
        self.d = [1] + [0] * n
        self.lam = [[0] * n for _ in range(n)]
        self._gram_schmidt_row(0)
        k, kmax = 1, 0
        while k < n:
            if k > kmax:
                kmax = k
                self._gram_schmidt_row(k)
            self._size_reduce(k, k - 1)
            d, lam = self.d, self.lam
            if q * d[k + 1] * d[k - 1] < p * d[k] * d[k] - q * lam[k][k - 1] ** 2:
                self._swap(k, kmax)
                k = max(1, k - 1)
            else:
                for l in range(k - 2, -1, -1):
                    self._size_reduce(k, l)
                k += 1
        return self

    def gs_norms_squared(self):
        """Exact squared Gram-Schmidt lengths |b*_i|^2 = d_{i+1} / d_i."""
        return [Fraction(self.d[i + 1], self.d[i]) for i in range(self.n)]


def _gso(basis):
    """Rational Gram-Schmidt: (mu, |b*_i|^2)."""
    n = len(basis)
    star, norms = [], []
    mu = [[Fraction(0)] * n for _ in range(n)]
    for i, row in enumerate(basis):
        v = [Fraction(x) for x in row]
        for j in range(i):
            mu[i][j] = _dot(row, star[j]) / norms[j]
            v = [a - mu[i][j] * c for a, c in zip(v, star[j])]
        star.append(v)
        norms.append(_dot(v, v))
    return mu, norms


def deep_insertion_pass(basis, delta=DEFAULT_DELTA):
    """One sweep of deep insertions over an LLL-reduced basis; returns True if it changed."""
    changed = False
    k = 1
    while k < len(basis):
        mu, norms = _gso(basis)
        c = Fraction(_dot(basis[k], basis[k]))
        i = 0
        moved = False
        while i < k:
            if c >= delta * norms[i]:
                c -= mu[k][i] ** 2 * norms[i]
                i += 1
            else:
                basis.insert(i, basis.pop(k))
                moved = changed = True
                break
        k = 1 if moved else k + 1
        if moved:
            basis[:] = IntegralLLL(basis, delta).reduce().basis
    return changed


def lll_reduce(basis, delta=DEFAULT_DELTA, deep=False):
    """LLL-reduce integer row vectors; returns (reduced basis, squared GS norms)."""
    state = IntegralLLL(basis, delta).reduce()
    if deep:
        reduced = state.basis
        while deep_insertion_pass(reduced, delta):
            pass
        state = IntegralLLL(reduced, delta).reduce()
    return state.basis, state.gs_norms_squared()
