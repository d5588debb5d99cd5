import logging
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from ..codec.index_code import normalize_side_info
from ..codec.lattice import product_chunks
from ..constants import DEFAULTS


@dataclass(frozen=True)
class FadingReport:
    S: tuple
    diversity: Optional[int]
    product_distance: Optional[float]
    # prod_{k in S} N(p_k), the product distance floor for totally real fields
    theoretical_floor: Optional[int]

    def to_dict(self):
        return {
            "S": list(self.S),
            "diversity": self.diversity,
            "product_distance": self.product_distance,
            "theoretical_floor": self.theoretical_floor,
        }


def coordinate_gaps(points, groups):
    """
    |differences| per embedding for every pair (x, y) in a block of point pairs.

    Real coordinates give |x_i - y_i|; the (Re, Im) pair of a complex embedding gives
    one modulus.
    """
    squared = points ** 2
    count = int(groups.max()) + 1
    gaps = np.zeros(points.shape[:-1] + (count,), dtype=np.float64)
    for coordinate in range(points.shape[-1]):
        gaps[..., groups[coordinate]] += squared[..., coordinate]
    return np.sqrt(gaps)


def diversity_and_product_distance(code, S=(), tolerance=DEFAULTS["COORD_TOLERANCE"]) -> FadingReport:
    """
    Diversity order and minimum product distance of the w_S = 0 subcode.

    Diversity is the least number of embeddings in which two distinct points differ;
    the product distance multiplies the nonzero gaps, minimized over pairs.
    """
    S = normalize_side_info(S, code.K)
    field = code.field
    floor = math.prod(code.primes[k - 1].norm for k in S) if field.is_totally_real else None
    indices = code.subcode_indices(S)
    if len(indices) < 2:
        return FadingReport(S, None, None, floor)

    points = code.embed(code.representatives[indices])
    groups = code.coordinate_groups()
    count = len(indices)

    diversity = None
    product = math.inf
    for start, stop in product_chunks(count):
        diffs = points[start:stop, None, :] - points[None, :, :]
        gaps = coordinate_gaps(diffs, groups)
        upper = np.arange(count)[None, :] > np.arange(start, stop)[:, None]
        gaps = gaps[upper]
        if gaps.size == 0:
            continue
        differs = gaps > tolerance
        differing = differs.sum(axis=1)
        block_diversity = int(differing.min())
        diversity = block_diversity if diversity is None else min(diversity, block_diversity)
        product = min(product, float(np.prod(np.where(differs, gaps, 1.0), axis=1).min()))

    if field.is_totally_real:
        # the product of conjugate gaps is |N(x - y)|, an integer
        product = float(round(product))
    logging.debug(f"S={S}: diversity {diversity}, product distance {product}")
    return FadingReport(S, diversity, product, floor)
