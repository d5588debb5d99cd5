import numpy as np

from ..codec.index_code import Message, normalize_side_info

# Upper limit on trial x candidate metric entries held at once
METRIC_BLOCK = 1 << 22


def detect_indices(code, y, snr, S=(), side_labels=None, h=None):
    """
    Batched ML detection over the subcode consistent with each trial's side information.

    Minimizes ||y - sqrt(snr) * h * x||^2 over normalized points x, expanded as
    -2 sqrt(snr) <y h, x> + snr <h^2, x^2> since ||y||^2 is common to all candidates.
    Ties go to the lowest message index.

    Args:
        code (Constellation): Code whose `points` are the normalized constellation.
        y (np.ndarray): Received vectors, shape (trials, dimension).
        snr (float): Linear SNR.
        S (tuple): 1-based indices of messages known to the receiver.
        side_labels (np.ndarray): Labels of the known messages per trial, shape (trials, K).
            Defaults to all-zero labels.
        h (np.ndarray): Fading gains, shape (trials, dimension), or None for AWGN.

    Returns:
        np.ndarray: Detected message index per trial.
    """
    S = normalize_side_info(S, code.K)
    y = np.atleast_2d(np.asarray(y, dtype=np.float64))
    points = code.points
    squares = points ** 2
    sqrt_snr = np.sqrt(snr)
    trials = y.shape[0]
    if side_labels is None:
        side_labels = np.zeros((trials, code.K), dtype=np.int64)
    rows = max(1, METRIC_BLOCK // code.size)

    detected = np.empty(trials, dtype=np.int64)
    for start in range(0, trials, rows):
        stop = min(start + rows, trials)
        block = y[start:stop]
        if h is None:
            metric = -2 * sqrt_snr * (block @ points.T) + snr * squares.sum(axis=1)[None, :]
        else:
            fades = h[start:stop]
            metric = -2 * sqrt_snr * ((block * fades) @ points.T) + snr * ((fades ** 2) @ squares.T)
        for k in S:
            mismatch = code.labels[None, :, k - 1] != side_labels[start:stop, k - 1][:, None]
            metric[mismatch] = np.inf
        detected[start:stop] = np.argmin(metric, axis=1)
    return detected


def ml_detect(code, y, snr, S=(), fixed: Message = None, h=None) -> Message:
    """Maximum-likelihood message for one received vector given side information w_S."""
    side_labels = None if fixed is None else np.array([fixed.labels(code)], dtype=np.int64)
    fades = None if h is None else np.atleast_2d(np.asarray(h, dtype=np.float64))
    index = int(detect_indices(code, y, snr, S, side_labels, fades)[0])
    return Message.from_labels(code, code.labels[index])
