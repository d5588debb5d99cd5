import logging
import math
from fractions import Fraction

import numpy as np

from ..constants import DEFAULTS
from ..errors import TooLargeError
from ..numberfield.ideal import reduce_modulo_hnf

# Upper limit on box points visited per enumeration round
MAX_BOX_POINTS = 10 ** 9


def _box_bounds(gram, threshold):
    """Per-coordinate bounds |v_i| <= sqrt(threshold * (G^-1)_ii) for v^T G v <= threshold."""
    inverse_diagonal = np.diag(np.linalg.inv(gram.astype(np.float64)))
    return np.floor(np.sqrt(threshold * inverse_diagonal) + 1e-9).astype(np.int64)


def _box_slices(bounds):
    """Yield the integer box slice by slice along the first coordinate."""
    tail = [np.arange(-b, b + 1, dtype=np.int64) for b in bounds[1:]]
    if tail:
        grid = np.array(np.meshgrid(*tail, indexing="ij")).reshape(len(tail), -1).T
    else:
        grid = np.zeros((1, 0), dtype=np.int64)
    for first in range(-bounds[0], bounds[0] + 1):
        yield np.hstack([np.full((grid.shape[0], 1), first, dtype=np.int64), grid])


def quadratic_form(gram, points):
    return np.einsum("ai,ij,aj->a", points, gram, points)


def _first_per_key(keys, energies, points, best):
    """Per key, keep the point of least energy, ties broken lexicographically on coordinates."""
    if best is not None:
        keys = np.concatenate([best[0], keys])
        energies = np.concatenate([best[1], energies])
        points = np.vstack([best[2], points])
    order = np.lexsort(tuple(points[:, j] for j in range(points.shape[1] - 1, -1, -1)) + (energies, keys))
    keys, energies, points = keys[order], energies[order], points[order]
    _, first = np.unique(keys, return_index=True)
    return keys[first], energies[first], points[first]


def min_energy_representatives(gram, modulus_hnf, threshold, growth=DEFAULTS["RADIUS_GROWTH"]):
    """
    Minimum-energy representative of every coset of Z^D modulo an HNF lattice.

    Energy is the integer quadratic form v^T gram v. All points of energy at most
    `threshold` are enumerated; the threshold grows until every coset is hit.

    Args:
        gram (np.ndarray): D x D positive definite integer Gram matrix.
        modulus_hnf (np.ndarray): D x D upper-triangular HNF of the modulus lattice.
        threshold (float): Initial energy threshold.

    Returns:
        tuple: (representatives, energies) indexed by coset index (mixed radix over the HNF diagonal).
    """
    shape = tuple(int(v) for v in np.diag(modulus_hnf))
    cosets = math.prod(shape)
    scale = growth ** 2
    threshold = max(float(threshold), float(np.min(np.diag(gram))))

    while True:
        bounds = _box_bounds(gram, threshold)
        box_size = math.prod(int(2 * b + 1) for b in bounds)
        if box_size > MAX_BOX_POINTS:
            raise TooLargeError(f"Enumeration box of {box_size} points exceeds {MAX_BOX_POINTS}")
        logging.debug(f"Enumerating {box_size} box points at energy threshold {threshold:.3f}")

        best = None
        for points in _box_slices(bounds):
            energies = quadratic_form(gram, points)
            inside = energies <= threshold
            if not np.any(inside):
                continue
            points, energies = points[inside], energies[inside]
            residues = reduce_modulo_hnf(modulus_hnf, points)
            keys = np.ravel_multi_index(tuple(residues.T), shape)
            best = _first_per_key(keys, energies, points, best)

        covered = 0 if best is None else len(best[0])
        if covered == cosets:
            logging.debug(f"All {cosets} cosets covered at energy threshold {threshold:.3f}")
            return best[2], best[1]
        logging.debug(f"{covered}/{cosets} cosets covered, growing threshold")
        threshold *= scale


def lattice_min_energy(gram, basis):
    """
    Exact minimum of v^T gram v over nonzero v in the lattice spanned by the columns of `basis`.
    """
    basis = np.asarray(basis, dtype=np.int64)
    sub_gram = basis.T @ gram @ basis
    threshold = int(np.min(np.diag(sub_gram)))
    bounds = _box_bounds(sub_gram, threshold)
    best = threshold
    for coefficients in _box_slices(bounds):
        energies = quadratic_form(sub_gram, coefficients)
        energies = energies[np.any(coefficients != 0, axis=1)]
        if energies.size:
            best = min(best, int(energies.min()))
    return best


def lattice_min_norm(gram, basis, gram_scale=1) -> Fraction:
    """Exact minimum squared length of the sublattice, for a Gram matrix scaled by `gram_scale`."""
    return Fraction(lattice_min_energy(gram, basis), gram_scale)


def pairwise_min_energy(gram, points, chunk_pairs=1 << 20):
    """Minimum of (x - y)^T gram (x - y) over distinct rows x, y of `points`."""
    points = np.asarray(points, dtype=np.int64)
    count = points.shape[0]
    best = None
    for start, stop in product_chunks(count, chunk_pairs):
        block = points[start:stop]
        diffs = block[:, None, :] - points[None, :, :]
        energies = np.einsum("abi,ij,abj->ab", diffs, gram, diffs)
        # mask each row's own point and the pairs already seen
        columns = np.arange(count)[None, :]
        own = np.arange(start, stop)[:, None]
        energies = energies[np.broadcast_to(columns > own, energies.shape)]
        if energies.size:
            value = int(energies.min())
            best = value if best is None else min(best, value)
    return best


def product_chunks(count, chunk_pairs=1 << 20):
    """Row ranges for chunked all-pairs scans over `count` points."""
    rows = max(1, chunk_pairs // max(count, 1))
    return [(start, min(start + rows, count)) for start in range(0, count, rows)]


def all_labels(sizes):
    """Every label tuple of a mixed-radix space, in ravel order."""
    return np.indices(tuple(sizes), dtype=np.int64).reshape(len(sizes), -1).T
