import logging
import math

import numpy as np
from scipy.stats import linregress

from ..constants import DEFAULTS
from ..errors import InsufficientDataError, NotBracketedError


def _curve_arrays(curve):
    """(snr_db, ser, errors) arrays from SimPoints or (snr_db, ser[, errors]) tuples, sorted by SNR."""
    rows = []
    for point in curve:
        if hasattr(point, "snr_db"):
            rows.append((point.snr_db, point.ser, point.errors))
        else:
            snr_db, ser = point[0], point[1]
            rows.append((snr_db, ser, point[2] if len(point) > 2 else None))
    rows.sort(key=lambda row: row[0])
    snr = np.array([row[0] for row in rows], dtype=np.float64)
    ser = np.array([row[1] for row in rows], dtype=np.float64)
    errors = [row[2] for row in rows]
    return snr, ser, errors


def snr_at_ser(curve, target_ser):
    """
    SNR (dB) where the curve crosses `target_ser`, interpolating log10(SER) linearly in dB.

    Raises:
        NotBracketedError: No adjacent pair of points with positive SER straddles the target.
    """
    if not 0 < target_ser < 1:
        raise NotBracketedError(f"Target SER must lie in (0, 1), got {target_ser}")
    snr, ser, _ = _curve_arrays(curve)
    log_target = math.log10(target_ser)
    for i in range(len(snr)):
        if ser[i] == target_ser:
            return float(snr[i])
        if i + 1 < len(snr) and ser[i] > target_ser > ser[i + 1] and ser[i + 1] > 0:
            low, high = math.log10(ser[i]), math.log10(ser[i + 1])
            return float(snr[i] + (log_target - low) * (snr[i + 1] - snr[i]) / (high - low))
    raise NotBracketedError(f"Curve does not bracket SER {target_ser:g}")


def si_gain_from_curves(curve_base, curve_S, target_ser) -> float:
    """Horizontal gap in dB between the base curve and the side information curve at `target_ser`."""
    gain = snr_at_ser(curve_base, target_ser) - snr_at_ser(curve_S, target_ser)
    logging.debug(f"Side information gain {gain:.3f} dB at SER {target_ser:g}")
    return gain


def diversity_slope(curve, snr_window_db=None, min_errors=DEFAULTS["SLOPE_MIN_ERRORS"]) -> float:
    """
    Diversity estimate: minus the least-squares slope of log10(SER) against SNR_dB / 10.

    Only meaningful on fading curves; AWGN curves fall faster than any power law.

    Args:
        curve: SimPoints or (snr_db, ser, errors) tuples.
        snr_window_db (tuple): Inclusive (low, high) SNR range to fit, or None for all points.
        min_errors (int): Points with fewer errors are left out of the fit.
    """
    snr, ser, errors = _curve_arrays(curve)
    keep = np.array([
        ser[i] > 0
        and (errors[i] is None or errors[i] >= min_errors)
        and (snr_window_db is None or snr_window_db[0] <= snr[i] <= snr_window_db[1])
        for i in range(len(snr))
    ], dtype=bool)
    if np.count_nonzero(keep) < 3:
        raise InsufficientDataError(f"Need at least 3 points with {min_errors}+ errors in the window, "
                                    f"got {int(np.count_nonzero(keep))}")
    fit = linregress(snr[keep] / 10, np.log10(ser[keep]))
    return -float(fit.slope)
