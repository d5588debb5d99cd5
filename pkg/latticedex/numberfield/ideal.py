import logging

import numpy as np
from sympy import Matrix
from sympy.matrices.normalforms import hermite_normal_form

from ..errors import FieldMismatchError, InvalidArgumentError


def hermite_form(columns) -> np.ndarray:
    """
    Column-style Hermite normal form of the Z-span of the given columns.

    Args:
        columns (np.ndarray): n x k integer matrix whose columns generate a full-rank lattice.

    Returns:
        np.ndarray: n x n upper-triangular basis, positive diagonal, entries right of
        the diagonal reduced modulo the diagonal entry of their row.
    """
    columns = np.asarray(columns, dtype=np.int64)
    n = columns.shape[0]
    hnf = hermite_normal_form(Matrix(columns.tolist()))
    if hnf.shape != (n, n):
        raise InvalidArgumentError(f"Generators span a rank {hnf.shape[1]} lattice, expected rank {n}")
    return np.array(hnf.tolist(), dtype=np.int64)


def reduce_modulo_hnf(hnf, x) -> np.ndarray:
    """Canonical residue of x (or of each row of x) modulo the lattice spanned by an upper-triangular HNF."""
    x = np.array(x, dtype=np.int64, copy=True)
    n = hnf.shape[0]
    for i in range(n - 1, -1, -1):
        q = np.floor_divide(x[..., i], hnf[i, i])
        x -= np.multiply.outer(q, hnf[:, i])
    return x


def block_diagonal(hnf, copies) -> np.ndarray:
    n = hnf.shape[0]
    out = np.zeros((n * copies, n * copies), dtype=np.int64)
    for b in range(copies):
        out[b * n:(b + 1) * n, b * n:(b + 1) * n] = hnf
    return out


class Ideal:
    """
    Nonzero ideal of O_K stored as the column HNF of its Z-basis.

    Prime ideals carry their residue characteristic p, ramification index e and
    inertial degree f; `generators` keeps a two-element (p, g) or principal (g,)
    generating set for display.
    """

    def __init__(self, field, hnf, generators=None, p=None, e=None, f=None, label=None):
        self.field = field
        hnf = np.array(hnf, dtype=np.int64)
        hnf.flags.writeable = False
        self.hnf = hnf
        self.norm = int(np.prod(np.diag(hnf), dtype=object))
        self.generators = generators
        self.p = p
        self.e = e
        self.f = f
        self.label = label

    @classmethod
    def from_generators(cls, field, elements, **annotations):
        """Ideal generated over O_K = Z[theta] by the given elements."""
        blocks = [field.multiplication_matrix(field.element(g)) for g in elements]
        return cls(field, hermite_form(np.hstack(blocks)), **annotations)

    @classmethod
    def unit(cls, field):
        return cls(field, np.eye(field.degree, dtype=np.int64), label="O_K")

    def __eq__(self, other):
        return isinstance(other, Ideal) and self.field == other.field and np.array_equal(self.hnf, other.hnf)

    def __hash__(self):
        return hash((self.field, self.hnf.tobytes()))

    def __repr__(self):
        name = self.label or f"hnf={self.hnf.tolist()}"
        return f"Ideal({name}, norm={self.norm})"

    @property
    def is_prime(self):
        return self.p is not None

    @property
    def residue_shape(self):
        return tuple(int(v) for v in np.diag(self.hnf))

    def reduce(self, x):
        return reduce_modulo_hnf(self.hnf, x)

    def contains(self, x):
        return np.all(self.reduce(x) == 0, axis=-1)

    def residue_index(self, x):
        """Mixed-radix index of the canonical residue of x over the HNF diagonal."""
        residue = self.reduce(x)
        return np.ravel_multi_index(tuple(np.moveaxis(residue, -1, 0)), self.residue_shape)

    def residue_from_index(self, index):
        coords = np.unravel_index(index, self.residue_shape)
        return np.stack(coords, axis=-1).astype(np.int64)

    def residues(self):
        """All N(I) canonical residues, ordered by residue index."""
        return self.residue_from_index(np.arange(self.norm))

    def to_dict(self):
        payload = {"hnf": self.hnf.tolist(), "norm": self.norm}
        if self.is_prime:
            payload.update({"p": self.p, "e": self.e, "f": self.f})
        if self.label:
            payload["label"] = self.label
        if self.generators is not None:
            payload["generators"] = [g if isinstance(g, int) else [int(c) for c in g] for g in self.generators]
        return payload

    @classmethod
    def from_dict(cls, field, payload):
        hnf = np.array(payload["hnf"], dtype=np.int64)
        if hnf.shape != (field.degree, field.degree) or np.any(np.tril(hnf, -1)) or np.any(np.diag(hnf) <= 0):
            raise InvalidArgumentError(f"Not an HNF over a degree {field.degree} field: {payload['hnf']}")
        generators = payload.get("generators")
        return cls(field, hnf, generators=tuple(generators) if generators else None, p=payload.get("p"),
                   e=payload.get("e"), f=payload.get("f"), label=payload.get("label"))


def _check_same_field(I, J):
    if I.field != J.field:
        raise FieldMismatchError(f"Ideals live in different fields: {I.field} and {J.field}")


def principal_ideal(field, g) -> Ideal:
    g = field.element(g)
    if not np.any(g):
        raise InvalidArgumentError("The zero ideal is not supported")
    return Ideal.from_generators(field, [g], generators=(tuple(int(c) for c in g),),
                                 label=f"({field.format_element(g)})")


def ideal_multiply(I: Ideal, J: Ideal) -> Ideal:
    """HNF of I*J, spanned by all products of Z-basis elements."""
    _check_same_field(I, J)
    field = I.field
    products = np.array([field.mul(a, b) for a in I.hnf.T for b in J.hnf.T])
    product = Ideal(field, hermite_form(products.T))
    if product.norm != I.norm * J.norm:
        raise InvalidArgumentError(f"Norm mismatch in ideal product: {product.norm} != {I.norm}*{J.norm}")
    logging.debug(f"Multiplied {I} by {J}: norm {product.norm}")
    return product


def ideal_add(I: Ideal, J: Ideal) -> Ideal:
    _check_same_field(I, J)
    return Ideal(I.field, hermite_form(np.hstack([I.hnf, J.hnf])))


def ideal_product(ideals, field=None) -> Ideal:
    if not ideals:
        return Ideal.unit(field)
    product = ideals[0]
    for ideal in ideals[1:]:
        product = ideal_multiply(product, ideal)
    return product


def is_coprime(I: Ideal, J: Ideal) -> bool:
    """True iff I + J = O_K."""
    return ideal_add(I, J).norm == 1
