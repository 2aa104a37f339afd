import cmath
import math
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lindep.cyclotomic import (
    CycloElt,
    absolute_norm,
    conjugate,
    cyclotomic_intersection_modulus,
    cyclotomic_poly,
    determinant,
    embed_complex,
    euler_phi,
    factorize,
    galois_apply,
    normalize_modulus,
    zeta_power,
)
from lindep.errors import NotCoprime
from lindep.numerics import PrecisionContext

MODULI = [1, 3, 4, 5, 7, 8, 9, 12, 15, 16, 20, 21, 24, 36]


def to_complex(x, k=1):
    # independent double-precision embedding through the stored coefficients
    return sum(complex(c) * cmath.exp(2j * math.pi * j * k / x.n) for j, c in enumerate(x.coeffs))


@pytest.mark.parametrize("n", range(1, 61))
def test_phi_and_factorize_against_sympy(n):
    assert euler_phi(n) == sympy.totient(n)
    assert dict(factorize(n)) == sympy.factorint(n)


@pytest.mark.parametrize("n", range(1, 41))
def test_cyclotomic_poly_against_sympy(n):
    x = sympy.Symbol("x")
    ref = sympy.Poly(sympy.cyclotomic_poly(n, x), x).all_coeffs()[::-1]
    assert list(cyclotomic_poly(n)) == [int(c) for c in ref]


@pytest.mark.parametrize("n,norm", [(1, 1), (2, 1), (3, 3), (4, 4), (6, 3), (10, 5), (12, 12), (14, 7)])
def test_normalize_modulus(n, norm):
    assert normalize_modulus(n) == norm


def elements(n):
    phi = euler_phi(n)
    coeff = st.fractions(min_value=-20, max_value=20, max_denominator=6)
    return st.lists(coeff, min_size=phi, max_size=phi).map(lambda cs: CycloElt.from_coeffs(n, cs))


@st.composite
def pair(draw):
    n = draw(st.sampled_from(MODULI))
    return draw(elements(n)), draw(elements(n))


@given(pair())
def test_field_axioms(xy):
    x, y = xy
    assert x + y == y + x
    assert x * y == y * x
    assert (x + y) - y == x
    assert x * (y + 1) == x * y + x
    if not y.is_zero():
        assert (x / y) * y == x
        assert y * y.inverse() == CycloElt.rational(1, y.n)


@given(pair())
def test_embedding_is_a_ring_homomorphism(xy):
    x, y = xy
    assert cmath.isclose(to_complex(x * y), to_complex(x) * to_complex(y), rel_tol=1e-9, abs_tol=1e-7)
    assert cmath.isclose(to_complex(x + y), to_complex(x) + to_complex(y), rel_tol=1e-9, abs_tol=1e-7)


@given(pair())
def test_norm_multiplicative(xy):
    x, y = xy
    assert absolute_norm(x * y) == absolute_norm(x) * absolute_norm(y)


@pytest.mark.parametrize("n", [3, 4, 5, 8, 12, 15])
def test_zeta_powers(n):
    z = zeta_power(n, 1)
    assert z ** n == CycloElt.rational(1, n)
    assert sum((zeta_power(n, j) for j in range(n)), CycloElt.rational(0, n)).is_zero()
    # N(1 - zeta_n) = Phi_n(1): p for prime powers, 1 otherwise
    primes = list(sympy.factorint(n))
    assert absolute_norm(1 - z) == (primes[0] if len(primes) == 1 else 1)


def test_zeta_of_twice_odd_modulus():
    # zeta_6 = -zeta_3^2
    assert zeta_power(6, 1) == -zeta_power(3, 2)
    assert zeta_power(10, 5) == CycloElt.rational(-1, 5)


@pytest.mark.parametrize("n", [5, 7, 12])
def test_galois_action(n):
    x = zeta_power(n, 1) + zeta_power(n, 2) * 2
    for k in range(1, n):
        if math.gcd(k, n) == 1:
            assert cmath.isclose(to_complex(galois_apply(k, x)), to_complex(x, k), abs_tol=1e-9)
    assert conjugate(conjugate(x)) == x
    with pytest.raises(NotCoprime):
        galois_apply(n, x)


def test_embed_complex_matches_double():
    ctx = PrecisionContext(128)
    x = CycloElt.from_coeffs(12, [Fraction(1, 3), -2, 5, Fraction(7, 2)])
    z = embed_complex(x, 5, ctx)
    assert cmath.isclose(complex(z), to_complex(x, 5), abs_tol=1e-12)


def test_lift_is_the_same_number():
    x = zeta_power(5, 2) + Fraction(1, 3)
    y = x.lift(15)
    assert cmath.isclose(to_complex(x), to_complex(y), abs_tol=1e-12)
    with pytest.raises(ValueError):
        x.lift(12)


@pytest.mark.parametrize(
    "m,n,g",
    [(5, 7, 1), (8, 12, 4), (12, 18, 3), (3, 6, 3), (10, 15, 5), (4, 6, 1)],
)
def test_intersection_modulus(m, n, g):
    assert cyclotomic_intersection_modulus(m, n) == g


@given(st.integers(1, 200), st.integers(1, 200))
def test_intersection_degree_is_consistent(m, n):
    # [Q(zeta_m) Q(zeta_n) : Q] = phi(m) phi(n) / phi(g) = phi(lcm)
    g = cyclotomic_intersection_modulus(m, n)
    assert euler_phi(m) * euler_phi(n) == euler_phi(g) * euler_phi(math.lcm(m, n))


def test_json_round_trip():
    x = zeta_power(7, 3) * Fraction(-5, 4) + 1
    assert CycloElt.from_json(x.to_json()) == x


def test_determinant():
    assert determinant([[1, 2], [3, 4]]) == -2
    z = zeta_power(3, 1)
    d = determinant([[1, 1, 1], [1, z, z * z], [1, z * z, z]])
    # Vandermonde for cube roots: (z - 1)(z^2 - 1)(z^2 - z), square is -27
    assert d * d == CycloElt.rational(-27, 3)
    assert determinant([[1, 2], [2, 4]]) == 0
