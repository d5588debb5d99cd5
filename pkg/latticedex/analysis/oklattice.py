import logging

import numpy as np
from sympy import Matrix

from ..codec.index_code import Constellation, crt_idempotents, normalize_side_info
from ..codec.lattice import all_labels, min_energy_representatives
from ..constants import DEFAULTS
from ..errors import InvalidArgumentError, InvalidDesignError, TooLargeError
from ..numberfield.field import minkowski_bound
from ..numberfield.ideal import block_diagonal, ideal_product, is_coprime


def _generator_entries(field, generator):
    rows = len(generator)
    entries = np.zeros((rows, rows, field.degree), dtype=np.int64)
    for i, row in enumerate(generator):
        if len(row) != rows:
            raise InvalidArgumentError("Generator matrix must be square")
        for j, entry in enumerate(row):
            entries[i, j] = int(entry) * field.one() if np.isscalar(entry) else field.element(entry)
    return entries


def lattice_map(field, entries):
    """Integer matrix A with A @ y = G y for y in O_K^m written as stacked coordinates."""
    copies, n = entries.shape[0], field.degree
    A = np.zeros((copies * n, copies * n), dtype=np.int64)
    for i in range(copies):
        for j in range(copies):
            A[i * n:(i + 1) * n, j * n:(j + 1) * n] = field.multiplication_matrix(entries[i, j])
    return A


class OkLatticeCode(Constellation):
    """
    Finite code G O_K^m / G I^m for an m x m generator G over O_K and I = p_1 ... p_K.

    Representatives are stored as y in O_K^m (stacked coordinates); the transmitted
    lattice point is Psi applied to each component of G y. Message k is the tuple
    (y_1 mod p_k, ..., y_m mod p_k), so its alphabet has N(p_k)^m symbols.
    """

    def __init__(self, field, primes, generator, idempotents, representatives):
        self.generator = _generator_entries(field, generator)
        self.copies = self.generator.shape[0]
        self.lattice_map = lattice_map(field, self.generator)
        self.modulus = ideal_product(list(primes))
        self.idempotents = [field.element(e) for e in idempotents]
        block_gram = np.kron(np.eye(self.copies, dtype=np.int64), field.trace_gram)
        gram = self.lattice_map.T @ block_gram @ self.lattice_map
        super().__init__(field, primes, [p.norm ** self.copies for p in primes], representatives, gram,
                         field.gram_scale)

    def embed(self, coords):
        coords = np.asarray(coords, dtype=np.int64)
        n = self.field.degree
        image = coords @ self.lattice_map.T
        blocks = image.reshape(image.shape[:-1] + (self.copies, n))
        return self.field.embed(blocks).reshape(image.shape[:-1] + (self.copies * n,))

    def coordinate_groups(self):
        groups = self.field.coordinate_groups()
        width = int(groups.max()) + 1
        return np.concatenate([groups + b * width for b in range(self.copies)])

    def side_lattice_basis(self, S):
        S = normalize_side_info(S, self.K)
        return block_diagonal(ideal_product([self.primes[k - 1] for k in S], self.field).hnf, self.copies)

    def __repr__(self):
        return f"OkLatticeCode({self.field}, m={self.copies}, {self.size} points)"


def _message_cosets(field, modulus, primes, idempotents, copies):
    sizes = [p.norm ** copies for p in primes]
    labels = all_labels(sizes)
    total = np.zeros((labels.shape[0], copies, field.degree), dtype=np.int64)
    for k, (prime, e) in enumerate(zip(primes, idempotents)):
        images = modulus.reduce(field.mul(prime.residues(), e))
        block_labels = np.stack(np.unravel_index(labels[:, k], (prime.norm,) * copies), axis=-1)
        total += images[block_labels]
    residues = modulus.reduce(total).reshape(labels.shape[0], -1)
    shape = tuple(int(v) for v in np.diag(modulus.hnf)) * copies
    return np.ravel_multi_index(tuple(residues.T), shape)


def build_oklattice_code(field, primes, generator, energy_radius_factor=DEFAULTS["ENERGY_RADIUS_FACTOR"],
                         enumeration_cap=DEFAULTS["ENUMERATION_CAP"]) -> OkLatticeCode:
    """
    Build the index code carved from the O_K-lattice G O_K^m by the sublattice G I^m.

    Args:
        field (NumberField): Ambient field.
        primes (list[Ideal]): Pairwise coprime prime ideals.
        generator (list[list]): m x m matrix over O_K; entries are coordinate lists or integers.

    Returns:
        OkLatticeCode: N(I)^m minimum-energy points.
    """
    primes = list(primes)
    if not primes:
        raise InvalidArgumentError("At least one prime ideal is required")
    for i in range(len(primes)):
        if not primes[i].is_prime:
            raise InvalidDesignError(f"{primes[i]} is not a prime ideal")
        for j in range(i + 1, len(primes)):
            if not is_coprime(primes[i], primes[j]):
                raise InvalidDesignError(f"{primes[i]} and {primes[j]} are not coprime")

    entries = _generator_entries(field, generator)
    copies = entries.shape[0]
    if copies == 0:
        raise InvalidArgumentError("Generator matrix must be nonempty")
    if Matrix(lattice_map(field, entries).tolist()).det() == 0:
        raise InvalidArgumentError("Generator matrix is singular")

    modulus = ideal_product(primes)
    total = modulus.norm ** copies
    if total > enumeration_cap:
        raise TooLargeError(f"Code would have {total} points, above the enumeration cap {enumeration_cap}")

    idempotents = crt_idempotents(primes)
    A = lattice_map(field, entries)
    gram = A.T @ np.kron(np.eye(copies, dtype=np.int64), field.trace_gram) @ A
    radius = energy_radius_factor * minkowski_bound(field, modulus.norm)
    threshold = field.gram_scale * copies * radius ** 2
    coset_reps, _ = min_energy_representatives(gram, block_diagonal(modulus.hnf, copies), threshold)

    cosets = _message_cosets(field, modulus, primes, idempotents, copies)
    if len(np.unique(cosets)) != total:
        raise InvalidDesignError("CRT map is not bijective")

    code = OkLatticeCode(field, primes, entries, idempotents, coset_reps[cosets])
    logging.info(f"Built {total}-point O_K-lattice code over {field} with m={copies}")
    return code
