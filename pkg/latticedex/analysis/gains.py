import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from ..codec.index_code import IndexCode, normalize_side_info
from ..codec.lattice import lattice_min_norm, pairwise_min_energy
from ..constants import DEFAULTS, PID_IMAGINARY_QUADRATIC, SIX_DB, FieldFamily
from ..errors import BoundsUnavailableError, InvalidArgumentError, TooLargeError, UndefinedDistanceError
from ..numberfield.field import minkowski_bound

BOUND_TOLERANCE = 1e-9


class GainBounds(NamedTuple):
    lower_db: float
    upper_db: float
    exact_uniform: bool


@dataclass(frozen=True)
class GainReport:
    """Side information gain of one receiver, with its distances and bounds."""
    S: tuple
    d0_sq: Fraction
    dS_sq: Fraction
    rate: float
    gamma_db: float
    lower_bound_db: Optional[float]
    upper_bound_db: Optional[float]
    minkowski_upper: float
    exact_uniform: bool = False
    distance_source: str = "constellation"
    ds_lower_sq: Optional[float] = None
    ds_upper_sq: Optional[float] = None

    @property
    def gap_db(self):
        if self.lower_bound_db is None:
            return None
        return self.upper_bound_db - self.lower_bound_db

    @property
    def gain_within_bounds(self):
        if self.lower_bound_db is None:
            return True
        return self.lower_bound_db - BOUND_TOLERANCE <= self.gamma_db <= self.upper_bound_db + BOUND_TOLERANCE

    @property
    def distance_within_bounds(self):
        """n N(I_S)^(2/n) <= dS^2 <= minkowski_upper^2 (n/2 in place of n for totally complex fields)."""
        dS_sq = float(self.dS_sq)
        if self.ds_lower_sq is not None and dS_sq < self.ds_lower_sq * (1 - BOUND_TOLERANCE):
            return False
        if self.ds_upper_sq is not None and dS_sq > self.ds_upper_sq * (1 + BOUND_TOLERANCE):
            return False
        return True

    @property
    def within_bounds(self):
        return self.gain_within_bounds and self.distance_within_bounds

    def to_dict(self):
        return {
            "S": list(self.S),
            "d0_sq": str(self.d0_sq),
            "dS_sq": str(self.dS_sq),
            "rate": self.rate,
            "gamma_db": self.gamma_db,
            "lower_bound_db": self.lower_bound_db,
            "upper_bound_db": self.upper_bound_db,
            "minkowski_upper": self.minkowski_upper,
            "exact_uniform": self.exact_uniform,
            "distance_source": self.distance_source,
            "ds_lower_sq": self.ds_lower_sq,
            "ds_upper_sq": self.ds_upper_sq,
        }


def capacity_rhs(snr: float) -> float:
    """0.5*log2(1 + snr): the capacity bound on the sum rate a receiver must decode."""
    if snr < 0:
        raise InvalidArgumentError(f"SNR must be nonnegative, got {snr}")
    return 0.5 * math.log2(1.0 + snr)


def minkowski_upper_bound(field, I) -> float:
    return minkowski_bound(field, I.norm)


def d_s_lower_bound(field, norm) -> float:
    """AM-GM lower bound on the squared length of a nonzero element of an ideal of norm `norm`."""
    n = field.degree
    if field.is_totally_real:
        return n * norm ** (2.0 / n)
    if field.is_totally_complex:
        return (n / 2) * norm ** (2.0 / n)
    raise BoundsUnavailableError(f"No AM-GM bound for mixed signature {field.signature}")


def min_distance(code, S, spot_checks=0, seed=0) -> Fraction:
    """
    Exact squared minimum distance of the un-normalized subcode with w_S = 0.

    `spot_checks` random nonzero side information values are compared against the
    w_S = 0 value; a difference is logged, not raised.
    """
    S = normalize_side_info(S, code.K)
    indices = code.subcode_indices(S)
    if len(indices) < 2:
        raise UndefinedDistanceError(f"Subcode for S={S} has {len(indices)} point(s)")
    energy = pairwise_min_energy(code.gram, code.representatives[indices])
    distance = Fraction(energy, code.gram_scale)

    if spot_checks and S:
        rng = np.random.default_rng(seed)
        for _ in range(spot_checks):
            fixed = [int(rng.integers(0, size)) for size in code.alphabet_sizes]
            if not any(fixed[k - 1] for k in S):
                continue
            other = pairwise_min_energy(code.gram, code.representatives[code.subcode_indices(S, fixed)])
            if other != energy:
                logging.warning(f"S={S}: w_S={fixed} gives squared distance {Fraction(other, code.gram_scale)}, "
                                f"w_S=0 gives {distance}")
    return distance


def gain_bounds(code, S) -> GainBounds:
    """
    Lower and upper bounds on the side information gain for S.

    Both bounds start at 20*log10(2); the upper adds 10*log10|Delta_K| / log2 N(I_S),
    with |Delta_K| scaled by (2/pi)^n for totally complex fields. Imaginary quadratic
    fields with class number one achieve the lower bound exactly.
    """
    S = normalize_side_info(S, code.K)
    if not S:
        raise InvalidArgumentError("Side information set must be nonempty")
    field = code.field
    norm = code.side_norm(S)

    if field.family is FieldFamily.QUADRATIC and field.parameter in PID_IMAGINARY_QUADRATIC:
        return GainBounds(SIX_DB, SIX_DB, True)

    n = field.degree
    if field.is_totally_real:
        excess = 10 * math.log10(abs(field.discriminant)) / math.log2(norm)
    elif field.is_totally_complex:
        excess = 10 * math.log10(abs(field.discriminant) * (2 / math.pi) ** n) / math.log2(norm)
    else:
        raise BoundsUnavailableError(f"No gain bounds for mixed signature {field.signature}",
                                     minkowski_upper=minkowski_bound(field, norm))
    return GainBounds(SIX_DB, SIX_DB + excess, False)


def side_info_gain(code, S, d0_sq=None, spot_checks=0, seed=0) -> GainReport:
    """
    Gamma(C, S) = 10*log10(d_S^2 / d_0^2) / R_S in dB per bit per dimension.

    When the side information pins down a single point, d_S is the minimum of the
    sublattice prod_{k in S} p_k the subcode is carved from.
    """
    S = normalize_side_info(S, code.K)
    if not S:
        raise InvalidArgumentError("Side information set must be nonempty")
    if d0_sq is None:
        d0_sq = min_distance(code, ())

    if len(code.subcode_indices(S)) >= 2:
        dS_sq = min_distance(code, S, spot_checks, seed)
        source = "constellation"
    else:
        dS_sq = lattice_min_norm(code.gram, code.side_lattice_basis(S), code.gram_scale)
        source = "lattice"

    rate = code.rate(S)
    gamma_db = 10 * math.log10(dS_sq / d0_sq) / rate
    try:
        lower, upper, exact = gain_bounds(code, S)
    except BoundsUnavailableError:
        lower = upper = None
        exact = False

    minkowski_upper = minkowski_bound(code.field, code.side_norm(S))
    ds_lower_sq = ds_upper_sq = None
    if isinstance(code, IndexCode):
        # the subcode distance is the minimum of the ideal I_S itself
        ds_upper_sq = minkowski_upper ** 2
        try:
            ds_lower_sq = d_s_lower_bound(code.field, code.side_norm(S))
        except BoundsUnavailableError:
            pass

    report = GainReport(S, d0_sq, dS_sq, rate, gamma_db, lower, upper, minkowski_upper, exact, source,
                        ds_lower_sq, ds_upper_sq)
    logging.debug(f"S={S}: d0^2={d0_sq}, dS^2={dS_sq}, gain {gamma_db:.4f} dB")
    return report


def all_side_info_sets(K, max_k=DEFAULTS["MAX_K"]):
    if K > max_k:
        raise TooLargeError(f"K={K} exceeds the subset scan cap {max_k}")
    return [S for r in range(1, K + 1) for S in itertools.combinations(range(1, K + 1), r)]


def overall_gain(code, max_k=DEFAULTS["MAX_K"], spot_checks=0):
    """
    Gamma(C) = min over nonempty S of Gamma(C, S).

    Returns:
        tuple: (overall gain in dB, list of GainReport for all 2^K - 1 sets).
    """
    d0_sq = min_distance(code, ())
    reports = [side_info_gain(code, S, d0_sq, spot_checks) for S in all_side_info_sets(code.K, max_k)]
    return min(report.gamma_db for report in reports), reports
