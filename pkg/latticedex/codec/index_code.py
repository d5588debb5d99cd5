import logging
import math
from dataclasses import dataclass

import numpy as np
from sympy import GF
from sympy.polys.matrices import DomainMatrix

from ..constants import DEFAULTS
from ..errors import InvalidArgumentError, InvalidDesignError, TooLargeError
from ..numberfield.field import minkowski_bound
from ..numberfield.ideal import ideal_product, is_coprime
from ..util import generate_md5
from .lattice import all_labels, min_energy_representatives, quadratic_form


def normalize_side_info(S, K):
    """Validate a 1-based side information set and return it as a sorted tuple."""
    S = tuple(sorted({int(k) for k in (S or ())}))
    if any(k < 1 or k > K for k in S):
        raise InvalidArgumentError(f"Side information set {S} is not a subset of 1..{K}")
    return S


class Constellation:
    """
    Finite constellation of exact coset representatives indexed by K message labels.

    Representatives are integer coordinate vectors, one per message index in
    mixed-radix order over `alphabet_sizes`. Energies come from an integer Gram
    matrix: ||point||^2 = energy / gram_scale.
    """

    def __init__(self, field, primes, alphabet_sizes, representatives, gram, gram_scale):
        self.field = field
        self.primes = list(primes)
        self.alphabet_sizes = tuple(int(s) for s in alphabet_sizes)
        representatives = np.array(representatives, dtype=np.int64)
        representatives.flags.writeable = False
        self.representatives = representatives
        self.gram = gram
        self.gram_scale = gram_scale

        self.energies = quadratic_form(gram, representatives)
        mean_energy = float(np.mean(self.energies)) / gram_scale
        self.gamma = 1.0 / math.sqrt(mean_energy)
        self.labels = all_labels(self.alphabet_sizes)
        self.points = self.gamma * self.embed(representatives)

    @property
    def K(self):
        return len(self.alphabet_sizes)

    @property
    def size(self):
        return self.representatives.shape[0]

    @property
    def dimension(self):
        return self.representatives.shape[1]

    def embed(self, coords):
        raise NotImplementedError

    def coordinate_groups(self):
        raise NotImplementedError

    def side_lattice_basis(self, S):
        """Columns spanning the sublattice that subcode differences for S lie in."""
        raise NotImplementedError

    def message_index(self, labels):
        return int(np.ravel_multi_index(tuple(int(l) for l in labels), self.alphabet_sizes))

    def subcode_indices(self, S, fixed_labels=None):
        """Message indices whose labels agree with `fixed_labels` on S (all-zero when omitted)."""
        S = normalize_side_info(S, self.K)
        mask = np.ones(self.size, dtype=bool)
        for k in S:
            value = 0 if fixed_labels is None else int(fixed_labels[k - 1])
            if not 0 <= value < self.alphabet_sizes[k - 1]:
                raise InvalidArgumentError(f"Label {value} out of range for message {k}")
            mask &= self.labels[:, k - 1] == value
        return np.flatnonzero(mask)

    def rate(self, S):
        """(1/n) * sum_{k in S} log2 N(p_k) bits per real dimension."""
        S = normalize_side_info(S, self.K)
        return sum(math.log2(self.primes[k - 1].norm) for k in S) / self.field.degree

    def side_norm(self, S):
        S = normalize_side_info(S, self.K)
        return math.prod(self.primes[k - 1].norm for k in S)

    def digest(self):
        payload = "|".join([
            str(self.field.descriptor()),
            str(self.alphabet_sizes),
            self.gram.tobytes().hex(),
            self.representatives.tobytes().hex(),
        ])
        return generate_md5(payload)


@dataclass(frozen=True)
class Message:
    """K residues w_k, each a canonical HNF residue of O_K modulo p_k."""
    residues: tuple

    @classmethod
    def from_labels(cls, code, labels):
        if len(labels) != code.K:
            raise InvalidArgumentError(f"Expected {code.K} labels, got {len(labels)}")
        residues = []
        for prime, size, label in zip(code.primes, code.alphabet_sizes, labels):
            if not 0 <= int(label) < size:
                raise InvalidArgumentError(f"Label {label} out of range 0..{size - 1}")
            residues.append(tuple(int(c) for c in prime.residue_from_index(int(label))))
        return cls(tuple(residues))

    @classmethod
    def zero(cls, code):
        return cls.from_labels(code, [0] * code.K)

    def labels(self, code):
        if len(self.residues) != code.K:
            raise InvalidArgumentError(f"Expected {code.K} residues, got {len(self.residues)}")
        labels = []
        for prime, residue in zip(code.primes, self.residues):
            residue = code.field.element(residue)
            if not np.array_equal(prime.reduce(residue), residue):
                raise InvalidArgumentError(f"Residue {residue.tolist()} is not canonical modulo {prime}")
            labels.append(int(prime.residue_index(residue)))
        return tuple(labels)


class IndexCode(Constellation):
    """
    Lattice index code O_K / (p_1 ... p_K) with minimum-energy coset representatives.

    Message (w_1, ..., w_K) maps to the representative of sum_k e_k w_k mod I, and is
    transmitted as gamma * Psi(representative).
    """

    def __init__(self, field, primes, idempotents, representatives, energy_radius_factor=1.0):
        self.modulus = ideal_product(list(primes))
        self.idempotents = [field.element(e) for e in idempotents]
        self.energy_radius_factor = energy_radius_factor
        super().__init__(field, primes, [p.norm for p in primes], representatives, field.trace_gram,
                         field.gram_scale)

        expected = self.message_cosets()
        if not np.array_equal(self.modulus.residue_index(self.representatives), expected):
            raise InvalidDesignError("Representatives do not match the CRT message map")

    def message_cosets(self):
        return crt_message_cosets(self.field, self.modulus, self.primes, self.idempotents)

    def embed(self, coords):
        return self.field.embed(coords)

    def coordinate_groups(self):
        return self.field.coordinate_groups()

    def side_ideal(self, S):
        S = normalize_side_info(S, self.K)
        return ideal_product([self.primes[k - 1] for k in S], self.field)

    def side_lattice_basis(self, S):
        return self.side_ideal(S).hnf

    def __repr__(self):
        return f"IndexCode({self.field}, {[p.label for p in self.primes]}, {self.size} points)"


def crt_message_cosets(field, modulus, primes, idempotents):
    """Coset index mod I of sum_k e_k w_k for every message index, in mixed-radix label order."""
    labels = all_labels([p.norm for p in primes])
    total = np.zeros((labels.shape[0], field.degree), dtype=np.int64)
    for k, (prime, e) in enumerate(zip(primes, idempotents)):
        images = modulus.reduce(field.mul(prime.residues(), e))
        total += images[labels[:, k]]
    return modulus.residue_index(total)


def crt_idempotents(primes) -> list:
    """
    CRT idempotents e_k = 1 mod p_k and 0 mod p_j (j != k).

    e_k is taken from J_k = prod_{j != k} p_j: writing 1 = u + v with u in p_k and
    v in J_k is a linear system over GF(p) in the Z-bases of J_k and p_k, where p is
    the residue characteristic of p_k and p*O_K lies inside p_k.
    """
    if not primes:
        raise InvalidArgumentError("At least one prime ideal is required")
    field = primes[0].field
    if len(primes) == 1:
        return [field.one()]

    modulus = ideal_product(list(primes))
    idempotents = []
    for k, prime in enumerate(primes):
        others = ideal_product([q for j, q in enumerate(primes) if j != k])
        p = prime.p
        domain = GF(p)
        n = field.degree
        augmented = np.hstack([others.hnf, prime.hnf, field.one()[:, None]]) % p
        matrix = DomainMatrix([[domain(int(v)) for v in row] for row in augmented], augmented.shape, domain)
        reduced, pivots = matrix.rref()
        if 2 * n in pivots:
            raise InvalidDesignError(f"{prime} is not coprime to the remaining ideals")
        solution = np.zeros(2 * n, dtype=np.int64)
        values = reduced.to_Matrix()
        for row, column in enumerate(pivots):
            solution[column] = int(values[row, 2 * n]) % p
        e = modulus.reduce(others.hnf @ solution[:n])
        idempotents.append(e)
    return idempotents


def build_index_code(field, primes, energy_radius_factor=DEFAULTS["ENERGY_RADIUS_FACTOR"],
                     enumeration_cap=DEFAULTS["ENUMERATION_CAP"]) -> IndexCode:
    """
    Build the index code for pairwise coprime prime ideals p_1, ..., p_K.

    Args:
        field (NumberField): Ambient field.
        primes (list[Ideal]): Prime ideals, in message order.
        energy_radius_factor (float): Initial search radius as a multiple of the Minkowski bound of I.
        enumeration_cap (int): Largest N(I) accepted.

    Returns:
        IndexCode: N(I) points labeled by the product of the residue fields.
    """
    primes = list(primes)
    if not primes:
        raise InvalidArgumentError("At least one prime ideal is required")
    for prime in primes:
        if prime.field != field:
            raise InvalidDesignError(f"{prime} does not belong to {field}")
        if not prime.is_prime:
            raise InvalidDesignError(f"{prime} is not a prime ideal")
    for i in range(len(primes)):
        for j in range(i + 1, len(primes)):
            if not is_coprime(primes[i], primes[j]):
                raise InvalidDesignError(f"{primes[i]} and {primes[j]} are not coprime")

    total = math.prod(p.norm for p in primes)
    if total > enumeration_cap:
        raise TooLargeError(f"Code would have {total} points, above the enumeration cap {enumeration_cap}")

    modulus = ideal_product(primes)
    idempotents = crt_idempotents(primes)
    radius = energy_radius_factor * minkowski_bound(field, modulus.norm)
    coset_reps, _ = min_energy_representatives(field.trace_gram, modulus.hnf, field.gram_scale * radius ** 2)

    cosets = crt_message_cosets(field, modulus, primes, idempotents)
    if len(np.unique(cosets)) != total:
        raise InvalidDesignError("CRT map is not bijective")

    code = IndexCode(field, primes, idempotents, coset_reps[cosets], energy_radius_factor)
    logging.info(f"Built {total}-point index code over {field} with alphabets {code.alphabet_sizes}")
    return code


def encode(code: IndexCode, msg: Message) -> np.ndarray:
    """gamma * Psi(x) for the minimum-energy representative x of the message's coset."""
    return code.points[code.message_index(msg.labels(code))]


def encode_representative(code: IndexCode, msg: Message) -> np.ndarray:
    return code.representatives[code.message_index(msg.labels(code))]


def decode_point(code: IndexCode, x) -> Message:
    """w_k = x mod p_k, as canonical residues."""
    x = code.field.element(x)
    return Message(tuple(tuple(int(c) for c in prime.reduce(x)) for prime in code.primes))


def subcode_points(code: IndexCode, S, fixed: Message = None) -> np.ndarray:
    """Normalized points consistent with side information w_S (zero when `fixed` is omitted)."""
    labels = None if fixed is None else fixed.labels(code)
    return code.points[code.subcode_indices(S, labels)]


def rate(code: IndexCode, S) -> float:
    return code.rate(S)
