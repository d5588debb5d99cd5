import pytest
from sympy import primerange

from latticedex.constants import FieldFamily, PrimeKind
from latticedex.errors import InvalidArgumentError, RamifiedPrimeError
from latticedex.numberfield import (classify_prime, kronecker_symbol, make_cyclotomic_field, make_maximal_real_field,
                                    make_quadratic_field, prime_ideal_from_principal, prime_ideals_above,
                                    split_completely_primes)

PRESET_FIELDS = [
    make_quadratic_field(5),
    make_quadratic_field(-5),
    make_quadratic_field(-7),
    make_cyclotomic_field(5),
    make_maximal_real_field(7),
]


def _oracle_kind(field, p):
    """Splitting type from brute-force square roots or multiplicative orders."""
    if field.family is FieldFamily.QUADRATIC:
        delta = field.discriminant
        if p == 2:
            if delta % 2 == 0:
                return PrimeKind.RAMIFIED
            return PrimeKind.SPLIT if delta % 8 == 1 else PrimeKind.INERT
        roots = sum(1 for x in range(p) if (x * x - delta) % p == 0)
        return {0: PrimeKind.INERT, 1: PrimeKind.RAMIFIED, 2: PrimeKind.SPLIT}[roots]

    m = field.parameter
    if m % p == 0:
        return PrimeKind.RAMIFIED
    targets = (1,) if field.family is FieldFamily.CYCLOTOMIC else (1, m - 1)
    f = next(k for k in range(1, m + 1) if pow(p, k, m) in targets)
    if f == 1:
        return PrimeKind.SPLIT
    return PrimeKind.INERT if f == field.degree else PrimeKind.PARTIAL


@pytest.mark.parametrize("delta, p, symbol", [(5, 11, 1), (5, 2, -1), (5, 5, 0), (-20, 7, 1), (-20, 3, 1),
                                               (-7, 2, 1), (-20, 2, 0), (-7, 3, -1)])
def test_kronecker_symbol(delta, p, symbol):
    assert kronecker_symbol(delta, p) == symbol


def test_kronecker_requires_prime():
    with pytest.raises(InvalidArgumentError):
        kronecker_symbol(5, 9)


@pytest.mark.parametrize("field", PRESET_FIELDS, ids=repr)
def test_splitting_matches_oracle_below_200(field):
    for p in primerange(2, 200):
        splitting = classify_prime(field, int(p))
        assert splitting.e * splitting.f * splitting.h == field.degree
        assert splitting.kind is _oracle_kind(field, int(p)), f"p={p}"


@pytest.mark.parametrize("field", PRESET_FIELDS, ids=repr)
def test_prime_ideals_above_agree_with_classification(field):
    for p in primerange(2, 60):
        p = int(p)
        splitting = classify_prime(field, p)
        if splitting.kind is PrimeKind.RAMIFIED and field.family is not FieldFamily.QUADRATIC:
            with pytest.raises(RamifiedPrimeError):
                prime_ideals_above(field, p)
            continue
        ideals = prime_ideals_above(field, p)
        assert len(ideals) == splitting.h
        assert sum(ideal.e * ideal.f for ideal in ideals) == field.degree
        for ideal in ideals:
            assert ideal.norm == p ** ideal.f
            assert ideal.contains(p * field.one())


@pytest.mark.parametrize("field, p, kind", [
    (make_quadratic_field(5), 11, PrimeKind.SPLIT),
    (make_quadratic_field(5), 5, PrimeKind.RAMIFIED),
    (make_quadratic_field(5), 2, PrimeKind.INERT),
    (make_cyclotomic_field(5), 11, PrimeKind.SPLIT),
    (make_cyclotomic_field(5), 19, PrimeKind.PARTIAL),
    (make_cyclotomic_field(5), 2, PrimeKind.INERT),
    (make_maximal_real_field(7), 13, PrimeKind.SPLIT),
    (make_maximal_real_field(7), 2, PrimeKind.INERT),
    (make_maximal_real_field(7), 7, PrimeKind.RAMIFIED),
])
def test_classify_prime_examples(field, p, kind):
    assert classify_prime(field, p).kind is kind


def test_conjugate_primes_above_seven_in_q_sqrt_minus_5():
    field = make_quadratic_field(-5)
    first, second = prime_ideals_above(field, 7)
    assert first.label == "(7, 3+√-5)"
    assert second.label == "(7, 4+√-5)"
    assert first.contains(field.from_sqrt(3, 1))
    assert not first.contains(field.one())
    assert first != second


def test_cyclotomic_split_prime_gives_four_ideals_of_norm_11():
    ideals = prime_ideals_above(make_cyclotomic_field(5), 11)
    assert [ideal.norm for ideal in ideals] == [11] * 4


def test_maximal_real_split_prime_gives_three_ideals_of_norm_13():
    ideals = prime_ideals_above(make_maximal_real_field(7), 13)
    assert [ideal.norm for ideal in ideals] == [13] * 3


def test_prime_ideal_from_principal_generator():
    field = make_quadratic_field(5)
    prime = prime_ideal_from_principal(field, field.from_sqrt(4, 1))
    assert (prime.p, prime.e, prime.f, prime.norm) == (11, 1, 1, 11)

    ramified = prime_ideal_from_principal(field, field.from_sqrt(0, 1))
    assert (ramified.p, ramified.e, ramified.norm) == (5, 2, 5)


def test_prime_ideal_from_principal_rejects_composites():
    field = make_quadratic_field(-7)
    with pytest.raises(InvalidArgumentError):
        # norm 36 has two prime factors
        prime_ideal_from_principal(field, 6 * field.one())


def test_split_completely_primes():
    assert split_completely_primes(make_cyclotomic_field(5), 3) == [11, 31, 41]
    assert split_completely_primes(make_maximal_real_field(7), 2) == [13, 29]
    assert split_completely_primes(make_quadratic_field(5), 2, start=12) == [19, 29]
    assert all(p % 5 == 1 for p in split_completely_primes(make_cyclotomic_field(5), 5))
