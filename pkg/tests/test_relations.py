import math

import pytest
from _planted import bits_for, expected_relation, planted_instance, planted_values
from hypothesis import given
from hypothesis import strategies as st

from lindep.cyclotomic import CycloElt
from lindep.errors import PrecisionTooLow, ValuesTooUncertain
from lindep.numerics import Complex, PrecisionContext, Real, log_real, pi
from lindep.relations import (
    NoRelationCertificate,
    RelationCertificate,
    certificate_from_json,
    find_field_relation,
    find_integer_relation,
    find_vector_relation,
    relation_holds,
    verify_relation,
)

CTX = PrecisionContext(512)


def golden(bits):
    return (1 + Real.from_rational(5, bits).sqrt()) / 2


def test_golden_ratio_relation():
    phi = golden(512)
    cert = find_integer_relation([Real.from_rational(1, 512), phi, phi * phi], 2**20, CTX)
    assert isinstance(cert, RelationCertificate)
    assert cert.coefficients == [1, 1, -1]
    assert cert.height == 1


def test_log_relation():
    xs = [log_real(n, CTX) for n in (2, 3, 6)]
    assert find_integer_relation(xs, 2**20, CTX).coefficients == [1, 1, -1]


def test_pi_fractions():
    p = pi(CTX)
    cert = find_integer_relation([p / 4, p / 3], 2**20, CTX)
    assert cert.coefficients == [4, -3]


@pytest.mark.parametrize("n", [2, 3, 5, 7, 10])
def test_no_relation_for_sqrt(n):
    cert = find_integer_relation([Real.from_rational(1, 512), Real.from_rational(n, 512).sqrt()], 2**20, CTX)
    assert isinstance(cert, NoRelationCertificate)
    assert cert.conclusive
    assert cert.norm_floor > cert.threshold
    assert cert.to_json()["kind"] == "no-relation"


def test_independent_logs():
    xs = [log_real(p, CTX) for p in (2, 3, 5, 7, 11)]
    cert = find_integer_relation(xs, 2**20, CTX)
    assert isinstance(cert, NoRelationCertificate) and cert.conclusive


def test_precision_too_low():
    xs = [log_real(p, PrecisionContext(64)) for p in (2, 3, 5)]
    with pytest.raises(PrecisionTooLow):
        find_integer_relation(xs, 2**20, PrecisionContext(64))


def test_values_too_uncertain():
    xs = [Real(1.0, 1e-3, 512), Real(1.5, 1e-3, 512)]
    with pytest.raises(ValuesTooUncertain):
        find_integer_relation(xs, 2**20, CTX)


def test_needs_two_values():
    with pytest.raises(ValueError):
        find_integer_relation([Real.from_rational(1, 512)], 2**20, CTX)


def test_low_precision_is_undecided_not_independent():
    # honest values at bits barely above the precondition: must not claim a relation
    ctx = PrecisionContext(200)
    xs = [log_real(p, ctx) for p in (2, 3)]
    cert = find_integer_relation(xs, 2**30, ctx)
    assert isinstance(cert, NoRelationCertificate)


def test_field_relation_sqrt3():
    # sqrt(3) = zeta_12 + zeta_12^-1 lies in Q(zeta_12)
    ctx = PrecisionContext(512)
    xs = [Real.from_rational(1, 512), Real.from_rational(3, 512).sqrt()]
    cert = find_field_relation(xs, 12, 2**8, ctx)
    assert isinstance(cert, RelationCertificate)
    assert relation_holds(xs, cert.coefficients, ctx)
    assert all(isinstance(c, CycloElt) for c in cert.coefficients)
    assert certificate_from_json(cert.to_json()) == cert.coefficients


def test_field_relation_absent_over_q():
    ctx = PrecisionContext(512)
    xs = [Real.from_rational(1, 512), Real.from_rational(3, 512).sqrt()]
    assert isinstance(find_field_relation(xs, 1, 2**8, ctx), NoRelationCertificate)
    # sqrt(3) is not in Q(zeta_5)
    assert isinstance(find_field_relation(xs, 5, 2**8, ctx), NoRelationCertificate)


def test_complex_relation_uses_both_parts():
    bits = 512
    i = Complex(Real.from_rational(0, bits), Real.from_rational(1, bits))
    one = Complex(Real.from_rational(1, bits))
    cert = find_integer_relation([one, i], 2**20, CTX)
    assert isinstance(cert, NoRelationCertificate)
    cert = find_field_relation([one, i], 4, 2**4, CTX)
    assert isinstance(cert, RelationCertificate)


def test_vector_relation():
    a = [log_real(2, CTX), log_real(3, CTX)]
    b = [log_real(5, CTX), log_real(7, CTX)]
    c = [x * 2 - y for x, y in zip(a, b)]
    cert = find_vector_relation([a, b, c], 2**20, CTX)
    assert cert.kind == "vector-relation"
    assert cert.coefficients == [2, -1, -1]


def test_verify_relation_shapes():
    x = [Real.from_rational(1, 128), Real.from_rational(2, 128)]
    assert isinstance(verify_relation(x, [2, -1]), Real)
    assert verify_relation(x, [2, -1]).contains_zero()
    with pytest.raises(ValueError):
        verify_relation(x, [0, 0])
    with pytest.raises(ValueError):
        verify_relation(x, [1])


@pytest.mark.parametrize("seed", range(40))
def test_planted_recovery(seed):
    n = 2 + seed % 7
    kinds, coeffs, last = planted_instance(seed, n)
    bits = bits_for(n)
    cert = find_integer_relation(planted_values(kinds, coeffs, last, bits), 2**13, PrecisionContext(bits))
    assert isinstance(cert, RelationCertificate)
    assert cert.coefficients == expected_relation(coeffs, last)
    # exact re-verification at twice the precision
    assert relation_holds(planted_values(kinds, coeffs, last, 2 * bits), cert.coefficients)


@given(st.lists(st.sampled_from([2, 3, 5, 7, 11, 13, 17, 19]), min_size=2, max_size=5, unique=True))
def test_no_false_positives_on_independent_logs(primes):
    xs = [log_real(p, CTX) for p in primes]
    cert = find_integer_relation(xs, 2**20, CTX)
    assert not isinstance(cert, RelationCertificate)


@given(st.integers(1, 10**6), st.integers(1, 10**6))
def test_rational_pairs(a, b):
    xs = [Real.from_rational(a, 256), Real.from_rational(b, 256)]
    cert = find_integer_relation(xs, 2**20, PrecisionContext(256))
    g = math.gcd(a, b)
    assert isinstance(cert, RelationCertificate)
    assert cert.coefficients == [b // g, -(a // g)]
