import functools
import logging
from fractions import Fraction

import numpy as np
from sympy import Integer, Matrix, Poly, Symbol, cyclotomic_poly, expand, factorint, isprime, totient

from ..constants import FieldFamily
from ..errors import InvalidArgumentError, UnsupportedError

# Exact element of O_K: integer coordinates over the integral basis 1, theta, ..., theta^(n-1)
AlgebraicInt = np.ndarray

_x = Symbol("x")


def _power_coordinates(min_poly, count):
    """Coordinates of theta^0, ..., theta^(count-1) reduced by the monic minimal polynomial."""
    n = len(min_poly) - 1
    tail = np.array(min_poly[:n], dtype=np.int64)
    powers = np.zeros((count, n), dtype=np.int64)
    current = np.zeros(n, dtype=np.int64)
    current[0] = 1
    for k in range(count):
        powers[k] = current
        top = current[n - 1]
        current = np.roll(current, 1)
        current[0] = 0
        current = current - top * tail
    return powers


def _readonly(array):
    array.flags.writeable = False
    return array


class NumberField:
    """
    Monogenic number field K = Q(theta) with O_K = Z[theta].

    Elements are integer coordinate vectors over the power basis. Embeddings are
    listed real-first, then one representative per complex-conjugate pair.
    """

    def __init__(self, family, parameter, min_poly, roots, conjugation, discriminant, basis_labels):
        self.family = family
        self.parameter = int(parameter)
        self.min_poly = tuple(int(c) for c in min_poly)
        self.degree = len(self.min_poly) - 1
        n = self.degree

        self.roots = tuple(complex(r) for r in roots)
        real_roots = [r for r in self.roots if r.imag == 0]
        self.signature = (len(real_roots), len(self.roots) - len(real_roots))
        r1, r2 = self.signature
        if r1 + 2 * r2 != n:
            raise InvalidArgumentError(f"Signature {self.signature} does not match degree {n}")

        self.discriminant = int(discriminant)
        self.integral_basis = tuple(basis_labels)

        powers = _power_coordinates(self.min_poly, 2 * n - 1)
        structure = np.array([[powers[i + j] for j in range(n)] for i in range(n)], dtype=np.int64)
        self._structure = _readonly(structure)
        self._conjugation = _readonly(np.array(conjugation, dtype=np.int64))

        rows = []
        exponents = np.arange(n)
        for root in self.roots[:r1]:
            rows.append(np.power(root.real, exponents))
        for root in self.roots[r1:]:
            values = np.power(root, exponents)
            rows.append(values.real)
            rows.append(values.imag)
        self.embedding_matrix = _readonly(np.array(rows, dtype=np.float64))

        # Tr(x * conj(x)) counts a complex embedding twice
        self.gram_scale = 1 if r2 == 0 else 2
        gram = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(n):
                gram[i, j] = self.trace(self.mul(self.basis_element(i), self._conjugation[:, j]))
        self.trace_gram = _readonly(gram)

        logging.debug(f"Constructed {self}: signature {self.signature}, discriminant {self.discriminant}")

    def __repr__(self):
        return f"NumberField({self.family.value}, {self.parameter})"

    def __eq__(self, other):
        return isinstance(other, NumberField) and (self.family, self.parameter) == (other.family, other.parameter)

    def __hash__(self):
        return hash((self.family, self.parameter))

    @property
    def is_totally_real(self):
        return self.signature[1] == 0

    @property
    def is_totally_complex(self):
        return self.signature[0] == 0

    def descriptor(self):
        return {"family": self.family.value, "parameter": self.parameter}

    # ELEMENTS

    def element(self, coords):
        array = np.asarray(coords, dtype=np.int64)
        if array.shape[-1:] != (self.degree,):
            raise InvalidArgumentError(f"Expected {self.degree} coordinates, got shape {array.shape}")
        return array

    def zero(self):
        return np.zeros(self.degree, dtype=np.int64)

    def one(self):
        return self.basis_element(0)

    def basis_element(self, i):
        e = np.zeros(self.degree, dtype=np.int64)
        e[i] = 1
        return e

    def from_sqrt(self, a, b):
        """The element a + b*sqrt(d) of a quadratic field."""
        if self.family is not FieldFamily.QUADRATIC:
            raise UnsupportedError("from_sqrt is only defined for quadratic fields")
        if self.parameter % 4 == 1:
            # sqrt(d) = 2*xi - 1 with xi = (1 + sqrt(d))/2
            return np.array([a - b, 2 * b], dtype=np.int64)
        return np.array([a, b], dtype=np.int64)

    # ARITHMETIC (batched over leading axes)

    def add(self, x, y):
        return np.asarray(x, dtype=np.int64) + np.asarray(y, dtype=np.int64)

    def mul(self, x, y):
        return np.einsum("...i,...j,ijk->...k", np.asarray(x, dtype=np.int64), np.asarray(y, dtype=np.int64),
                         self._structure)

    def multiplication_matrix(self, x):
        """Integer matrix M with M @ y = x*y in coordinates."""
        return np.einsum("i,ijk->kj", np.asarray(x, dtype=np.int64), self._structure)

    def conjugate(self, x):
        return np.asarray(x, dtype=np.int64) @ self._conjugation.T

    def trace(self, x):
        return int(np.trace(self.multiplication_matrix(x)))

    def norm(self, x):
        return element_norm(self, x)

    # GEOMETRY

    def embed(self, x):
        return np.asarray(x, dtype=np.float64) @ self.embedding_matrix.T

    def energy(self, x):
        """Numerator of the exact squared length: ||Psi(x)||^2 = energy(x) / gram_scale."""
        x = np.asarray(x, dtype=np.int64)
        return np.einsum("...i,ij,...j->...", x, self.trace_gram, x)

    def squared_length(self, x):
        return Fraction(int(self.energy(x)), self.gram_scale)

    def coordinate_groups(self):
        """Index of the embedding each real coordinate of Psi belongs to."""
        r1, r2 = self.signature
        return np.concatenate([np.arange(r1), np.repeat(np.arange(r1, r1 + r2), 2)])

    def format_element(self, x):
        x = [int(c) for c in x]
        if self.family is FieldFamily.QUADRATIC:
            d = self.parameter
            if d % 4 == 1:
                a, b, denom = 2 * x[0] + x[1], x[1], 2
                if a % 2 == 0 and b % 2 == 0:
                    a, b, denom = a // 2, b // 2, 1
            else:
                a, b, denom = x[0], x[1], 1
            text = _format_linear(a, b, f"√{d}")
            return text if denom == 1 else f"({text})/{denom}"
        symbol = "ζ" if self.family is FieldFamily.CYCLOTOMIC else "θ"
        terms = []
        for i, c in enumerate(x):
            if c == 0:
                continue
            power = "" if i == 0 else (symbol if i == 1 else f"{symbol}^{i}")
            coefficient = str(c) if (i == 0 or abs(c) != 1) else ("-" if c < 0 else "")
            terms.append(f"{coefficient}{power}")
        return "+".join(terms).replace("+-", "-") if terms else "0"


def _format_linear(a, b, root):
    if b == 0:
        return str(a)
    radical = root if abs(b) == 1 else f"{abs(b)}{root}"
    if a == 0:
        return radical if b > 0 else f"-{radical}"
    return f"{a}{'+' if b > 0 else '-'}{radical}"


@functools.lru_cache(maxsize=None)
def make_quadratic_field(d: int) -> NumberField:
    """
    Build Q(sqrt(d)) for a square-free integer d.

    Args:
        d (int): Square-free integer, not 0 or 1.

    Returns:
        NumberField: basis {1, sqrt(d)} for d = 2, 3 mod 4 and {1, (1+sqrt(d))/2} for d = 1 mod 4.
    """
    d = int(d)
    if d in (0, 1):
        raise InvalidArgumentError(f"Degenerate quadratic parameter d={d}")
    if any(exponent > 1 for exponent in factorint(abs(d)).values()):
        raise InvalidArgumentError(f"d={d} is not square-free")

    sqrt_d = complex(np.sqrt(abs(d))) if d > 0 else complex(0, np.sqrt(abs(d)))
    if d % 4 == 1:
        min_poly = [-(d - 1) // 4, -1, 1]
        roots = [(1 + sqrt_d) / 2, (1 - sqrt_d) / 2] if d > 0 else [(1 + sqrt_d) / 2]
        # conj(xi) = 1 - xi for imaginary fields
        conjugation = [[1, 0], [0, 1]] if d > 0 else [[1, 1], [0, -1]]
        discriminant = d
        labels = ("1", f"(1+√{d})/2")
    else:
        min_poly = [-d, 0, 1]
        roots = [sqrt_d, -sqrt_d] if d > 0 else [sqrt_d]
        conjugation = [[1, 0], [0, 1]] if d > 0 else [[1, 0], [0, -1]]
        discriminant = 4 * d
        labels = ("1", f"√{d}")
    return NumberField(FieldFamily.QUADRATIC, d, min_poly, roots, conjugation, discriminant, labels)


def _units_below_half(m):
    return [k for k in range(1, (m + 1) // 2) if np.gcd(k, m) == 1]


@functools.lru_cache(maxsize=None)
def make_cyclotomic_field(m: int) -> NumberField:
    """
    Build Q(zeta_m) with ring of integers Z[zeta_m].

    Embeddings send zeta_m to exp(2*pi*i*k/m) for the k < m/2 coprime to m, in increasing order.
    """
    m = int(m)
    if m <= 2 or m % 4 == 2:
        raise InvalidArgumentError(f"m={m} is not a minimal cyclotomic conductor")

    phi = int(totient(m))
    min_poly = [int(c) for c in Poly(cyclotomic_poly(m, _x), _x).all_coeffs()[::-1]]
    roots = [np.exp(2j * np.pi * k / m) for k in _units_below_half(m)]

    powers = _power_coordinates(min_poly, m)
    conjugation = np.stack([powers[(m - j) % m] for j in range(phi)], axis=1)

    denominator = 1
    for p in factorint(m):
        denominator *= p ** (phi // (p - 1))
    discriminant = (-1) ** (phi // 2) * m ** phi // denominator

    labels = tuple(["1", "ζ"] + [f"ζ^{i}" for i in range(2, phi)])
    return NumberField(FieldFamily.CYCLOTOMIC, m, min_poly, roots, conjugation, discriminant, labels)


def _maximal_real_polynomial(m):
    # zeta^k + zeta^-k = D_k(t) with t = zeta + zeta^-1, and 1 + sum_{k=1}^{(m-1)/2} D_k(t) = 0
    n = (m - 1) // 2
    t = _x
    dickson = [Integer(2), t]
    for _ in range(2, n + 1):
        dickson.append(expand(t * dickson[-1] - dickson[-2]))
    return [int(c) for c in Poly(1 + sum(dickson[1:n + 1]), t).all_coeffs()[::-1]]


@functools.lru_cache(maxsize=None)
def make_maximal_real_field(m: int) -> NumberField:
    """Build Q(zeta_m + zeta_m^-1) for an odd prime m >= 5."""
    m = int(m)
    if m < 5 or m % 2 == 0:
        raise InvalidArgumentError(f"m={m} must be an odd prime >= 5")
    if not isprime(m):
        raise UnsupportedError(f"Maximal real subfields are only supported for prime m, got {m}")

    n = (m - 1) // 2
    min_poly = _maximal_real_polynomial(m)
    roots = [complex(2 * np.cos(2 * np.pi * k / m), 0.0) for k in range(1, n + 1)]
    labels = tuple(["1", "θ"] + [f"θ^{i}" for i in range(2, n)])
    return NumberField(FieldFamily.MAXIMAL_REAL, m, min_poly, roots, np.eye(n, dtype=np.int64),
                       m ** ((m - 3) // 2), labels)


_FIELD_FACTORIES = {
    FieldFamily.QUADRATIC: make_quadratic_field,
    FieldFamily.CYCLOTOMIC: make_cyclotomic_field,
    FieldFamily.MAXIMAL_REAL: make_maximal_real_field,
}


def make_field(family, parameter) -> NumberField:
    try:
        family = FieldFamily(family) if not isinstance(family, FieldFamily) else family
    except ValueError:
        raise InvalidArgumentError(f"Unknown field family: {family}")
    return _FIELD_FACTORIES[family](parameter)


def field_from_descriptor(descriptor) -> NumberField:
    return make_field(descriptor["family"], descriptor["parameter"])


def canonical_embed(field: NumberField, x) -> np.ndarray:
    """Psi(x) in R^n: real embeddings, then (Re, Im) of one embedding per complex pair."""
    return field.embed(field.element(x))


def element_norm(field: NumberField, x) -> int:
    """Exact N_K(x), the determinant of multiplication by x."""
    matrix = field.multiplication_matrix(field.element(x))
    return int(Matrix(matrix.tolist()).det())


def minkowski_bound(field: NumberField, norm: int) -> float:
    """
    Geometry-of-numbers bound on the shortest nonzero vector of Psi(I) for N(I) = norm:
    sqrt(r1 + r2) * (sqrt|Delta_K| * N(I))^(1/n) * (2/pi)^(r2/n).
    """
    r1, r2 = field.signature
    n = field.degree
    return float(np.sqrt(r1 + r2) * (np.sqrt(abs(field.discriminant)) * norm) ** (1.0 / n) * (2.0 / np.pi) ** (r2 / n))
