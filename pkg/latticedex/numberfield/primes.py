import logging
from dataclasses import dataclass

import numpy as np
from sympy import Poly, Symbol, factorint, isprime, legendre_symbol, n_order, nextprime, totient

from ..constants import FieldFamily, PrimeKind
from ..errors import InvalidArgumentError, RamifiedPrimeError
from .ideal import Ideal, principal_ideal

_x = Symbol("x")


@dataclass(frozen=True)
class PrimeSplitting:
    """How p*O_K factors: h distinct primes, each with ramification e and inertial degree f."""
    p: int
    kind: PrimeKind
    e: int
    f: int
    h: int

    def describe(self):
        return f"p={self.p} is {self.kind.value} (e={self.e}, f={self.f}, {self.h} prime ideal(s))"


def _require_prime(p):
    if not isprime(int(p)):
        raise InvalidArgumentError(f"{p} is not a prime")
    return int(p)


def kronecker_symbol(delta: int, p: int) -> int:
    """(delta / p) for a rational prime p."""
    p = _require_prime(p)
    delta = int(delta)
    if p == 2:
        if delta % 2 == 0:
            return 0
        return 1 if delta % 8 in (1, 7) else -1
    return int(legendre_symbol(delta % p, p)) if delta % p else 0


def _kind(e, f, h, n):
    if e > 1:
        return PrimeKind.RAMIFIED
    if f == 1:
        return PrimeKind.SPLIT
    if h == 1:
        return PrimeKind.INERT
    return PrimeKind.PARTIAL


def classify_prime(field, p: int) -> PrimeSplitting:
    """
    Splitting type of a rational prime in the field.

    Args:
        field (NumberField): Quadratic, cyclotomic or maximal real field.
        p (int): Rational prime.

    Returns:
        PrimeSplitting: kind plus (e, f, h) with e*f*h = n.
    """
    p = _require_prime(p)
    n = field.degree
    m = field.parameter

    if field.family is FieldFamily.QUADRATIC:
        symbol = kronecker_symbol(field.discriminant, p)
        e, f, h = {1: (1, 1, 2), -1: (1, 2, 1), 0: (2, 1, 1)}[symbol]
    elif field.family is FieldFamily.CYCLOTOMIC:
        a = 0
        cofactor = m
        while cofactor % p == 0:
            cofactor //= p
            a += 1
        e = int(totient(p ** a))
        f = int(n_order(p, cofactor)) if cofactor > 1 else 1
        h = int(totient(cofactor)) // f
    else:
        if p == m:
            e, f, h = n, 1, 1
        else:
            # residue degree in the real subfield: least f with p^f = +-1 mod m
            e = 1
            f = next(k for k in range(1, n + 1) if pow(p, k, m) in (1, m - 1))
            h = n // f

    return PrimeSplitting(p, _kind(e, f, h, n), e, f, h)


def _quadratic_display_offset(field, root, p):
    """a with (p, theta - root) = (p, a + sqrt(d))."""
    if field.parameter % 4 == 1:
        return (1 - 2 * root) % p
    return (-root) % p


def prime_ideals_above(field, p: int) -> list:
    """
    All prime ideals of O_K over p, by factoring the minimal polynomial modulo p.

    Since O_K = Z[theta], each irreducible factor g^e of the minimal polynomial mod p
    gives the prime (p, g(theta)) with ramification e and inertial degree deg g.
    """
    p = _require_prime(p)
    if field.family is not FieldFamily.QUADRATIC and field.parameter % p == 0:
        raise RamifiedPrimeError(f"p={p} ramifies in {field}; ramified primes are not offered as code ideals")

    poly = Poly(list(reversed(field.min_poly)), _x, modulus=p)
    _, factors = poly.factor_list()

    ideals = []
    for factor, e in factors:
        coeffs = [int(c) % p for c in factor.all_coeffs()[::-1]]
        f = factor.degree()
        # an inert prime has g = minimal polynomial, so g(theta) = 0
        g = field.zero()
        if f < field.degree:
            g[:len(coeffs)] = coeffs

        if field.family is FieldFamily.QUADRATIC and f == 1 and not (field.parameter % 4 == 1 and p == 2):
            root = (-coeffs[0]) % p
            a = _quadratic_display_offset(field, root, p)
            label = f"({p}, {field.format_element(field.from_sqrt(a, 1))})"
            sort_key = (f, a)
        else:
            label = f"({p}, {field.format_element(g)})" if np.any(g) else f"({p})"
            sort_key = (f, tuple(reversed(coeffs)))

        generators = (p, tuple(int(c) for c in g))
        ideal = Ideal.from_generators(field, [p * field.one(), g], generators=generators, p=p, e=int(e), f=int(f),
                                      label=label)
        if ideal.norm != p ** f:
            raise InvalidArgumentError(f"Prime ideal {label} has norm {ideal.norm}, expected {p}^{f}")
        ideals.append((sort_key, ideal))

    ideals = [ideal for _, ideal in sorted(ideals, key=lambda item: item[0])]
    logging.debug(f"{field}: {p} factors into {[ideal.label for ideal in ideals]}")
    return ideals


def prime_ideal_from_principal(field, g) -> Ideal:
    """Identify g*O_K as a prime ideal and annotate it with (p, e, f)."""
    principal = principal_ideal(field, g)
    factorization = factorint(principal.norm)
    if len(factorization) != 1:
        raise InvalidArgumentError(f"{principal.label} has norm {principal.norm}, not a prime power")
    (p, _), = factorization.items()
    for ideal in prime_ideals_above(field, p):
        if ideal == principal:
            return Ideal(field, principal.hnf, generators=principal.generators, p=ideal.p, e=ideal.e, f=ideal.f,
                         label=principal.label)
    raise InvalidArgumentError(f"{principal.label} is not a prime ideal")


def split_completely_primes(field, count: int, start: int = 2) -> list:
    """The `count` smallest rational primes >= start that split completely in the field."""
    if count < 1:
        raise InvalidArgumentError("count must be positive")
    found = []
    p = nextprime(start - 1)
    while len(found) < count:
        if field.discriminant % p != 0 and classify_prime(field, p).kind is PrimeKind.SPLIT:
            found.append(int(p))
        p = nextprime(p)
    return found
