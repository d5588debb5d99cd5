import itertools
import logging
from dataclasses import dataclass

import numpy as np

from ..constants import DEFAULTS
from .lattice import product_chunks


@dataclass(frozen=True)
class IsomorphismReport:
    additive: bool
    multiplicative: bool
    bijective: bool
    side_info_membership: bool
    pairs_checked: int
    exhaustive: bool

    @property
    def passed(self):
        return self.additive and self.multiplicative and self.bijective and self.side_info_membership


def _combined_labels(code, labels_a, labels_b, operation):
    """Message labels of w_a (op) w_b computed componentwise in the residue fields."""
    combined = np.empty_like(labels_a)
    for k, prime in enumerate(code.primes):
        residues = prime.residues()
        combined[:, k] = prime.residue_index(operation(residues[labels_a[:, k]], residues[labels_b[:, k]]))
    return combined


def _homomorphism_holds(code, a, b, operation):
    modulus = code.modulus
    reps = code.representatives
    c_labels = _combined_labels(code, code.labels[a], code.labels[b], operation)
    c = np.ravel_multi_index(tuple(c_labels.T), code.alphabet_sizes)
    lhs = modulus.residue_index(operation(reps[a], reps[b]))
    rhs = modulus.residue_index(reps[c])
    return bool(np.all(lhs == rhs))


def _pair_batches(code, exhaustive_limit, random_pairs, seed):
    size = code.size
    if size <= exhaustive_limit:
        everything = np.arange(size)
        for start, stop in product_chunks(size):
            a = np.repeat(np.arange(start, stop), size)
            b = np.tile(everything, stop - start)
            yield a, b
    else:
        rng = np.random.default_rng(seed)
        yield rng.integers(0, size, random_pairs), rng.integers(0, size, random_pairs)


def verify_isomorphism(code, exhaustive_limit=DEFAULTS["EXHAUSTIVE_LIMIT"], random_pairs=DEFAULTS["RANDOM_PAIRS"],
                       seed=0, max_k=DEFAULTS["MAX_K"]) -> IsomorphismReport:
    """
    Check that the message map is a ring isomorphism onto O_K / I.

    Covers additivity, multiplicativity, bijectivity, and membership of every
    w_S = 0 representative in prod_{k in S} p_k. Pairs are exhaustive up to
    `exhaustive_limit` points and sampled above.
    """
    field = code.field
    additive = multiplicative = True
    pairs = 0
    for a, b in _pair_batches(code, exhaustive_limit, random_pairs, seed):
        additive &= _homomorphism_holds(code, a, b, field.add)
        multiplicative &= _homomorphism_holds(code, a, b, field.mul)
        pairs += len(a)

    cosets = code.modulus.residue_index(code.representatives)
    bijective = len(np.unique(cosets)) == code.size

    membership = True
    if code.K <= max_k:
        for r in range(1, code.K + 1):
            for S in itertools.combinations(range(1, code.K + 1), r):
                members = code.representatives[code.subcode_indices(S)]
                membership &= bool(np.all(code.side_ideal(S).contains(members)))

    report = IsomorphismReport(additive, multiplicative, bijective, membership, pairs,
                               code.size <= exhaustive_limit)
    log = logging.info if report.passed else logging.error
    log(f"Isomorphism check over {pairs} pairs: {report}")
    return report
