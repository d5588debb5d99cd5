import csv
import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator
from scipy.stats import norm

from ..codec.index_code import normalize_side_info
from ..constants import CSV_COLUMNS, DEFAULTS, THREADS_ENV, Channel
from ..util import digest_payload, format_side_info
from .detector import detect_indices


class SymbolTransform:
    """Outer-code hook: maps message label rows before modulation and after detection."""

    def encode(self, labels):
        raise NotImplementedError

    def decode(self, labels):
        raise NotImplementedError


class PassThrough(SymbolTransform):
    def encode(self, labels):
        return labels

    def decode(self, labels):
        return labels


class SimConfig(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    code: Any
    channel: Channel = Channel.AWGN
    snr_db: List[float]
    side_info_sets: List[Tuple[int, ...]] = [()]
    trials: int = Field(DEFAULTS["MAX_TRIALS"], ge=1)
    min_errors: Optional[int] = Field(DEFAULTS["MIN_ERRORS"], ge=1)
    seed: int = 0
    workers: int = Field(1, ge=1)
    chunk_size: int = Field(DEFAULTS["CHUNK_SIZE"], ge=1)
    fade_per_complex: bool = False
    transform: Any = None

    @field_validator("snr_db")
    @classmethod
    def snr_grid_increasing(cls, value):
        if not value:
            raise ValueError("SNR grid must not be empty")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("SNR grid must be strictly increasing")
        return value

    def digest(self):
        return digest_payload(self.model_dump(mode="json", exclude={"code", "transform", "workers"}))


@dataclass(frozen=True)
class SimPoint:
    snr_db: float
    side_info_set: tuple
    errors: int
    trials: int
    ser: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class SimResult:
    points: tuple
    seed: int
    channel: Channel
    code_digest: str
    config_digest: str

    def curve(self, S):
        S = tuple(sorted(S))
        return sorted((p for p in self.points if p.side_info_set == S), key=lambda p: p.snr_db)

    def side_info_sets(self):
        return sorted({p.side_info_set for p in self.points}, key=lambda S: (len(S), S))


def confidence_interval(errors, trials, confidence=DEFAULTS["CONFIDENCE"]):
    """Normal-approximation interval, Wilson score interval below 30 errors."""
    z = norm.ppf(0.5 + confidence / 2)
    p = errors / trials
    if errors < DEFAULTS["WILSON_BELOW"]:
        denominator = 1 + z ** 2 / trials
        center = (p + z ** 2 / (2 * trials)) / denominator
        half = z * math.sqrt(p * (1 - p) / trials + z ** 2 / (4 * trials ** 2)) / denominator
    else:
        center = p
        half = z * math.sqrt(p * (1 - p) / trials)
    low = 0.0 if errors == 0 else max(0.0, center - half)
    high = 1.0 if errors == trials else min(1.0, center + half)
    return low, high


def resolve_workers(requested):
    """Cap the worker count by LATTICEDEX_THREADS when set."""
    cap = os.environ.get(THREADS_ENV)
    if cap:
        try:
            return max(1, min(requested, int(cap)))
        except ValueError:
            logging.warning(f"Ignoring non-integer {THREADS_ENV}={cap}")
    return max(1, requested)


def chunk_generator(seed, snr_index, chunk_index):
    """Counter-based stream for one chunk, independent of which worker runs it."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(snr_index, chunk_index))))


def draw_channel(rng, trials, dimension, channel, groups=None):
    """
    Noise with variance 1/n per real dimension and, on Rayleigh channels, unit second moment fades.

    With `groups` the fades are drawn once per group (complex embedding) and shared
    by its real coordinates.
    """
    noise = rng.standard_normal((trials, dimension)) / math.sqrt(dimension)
    if channel is not Channel.RAYLEIGH:
        return noise, None
    if groups is None:
        return noise, rng.rayleigh(scale=1 / math.sqrt(2), size=(trials, dimension))
    return noise, rng.rayleigh(scale=1 / math.sqrt(2), size=(trials, int(groups.max()) + 1))[:, groups]


def simulate_chunk(code, config, snr_index, chunk_index, trials):
    """
    Error counts of one chunk of trials for every configured side information set.

    All sets share the chunk's messages, noise and fades.
    """
    rng = chunk_generator(config.seed, snr_index, chunk_index)
    transform = config.transform or PassThrough()
    groups = code.coordinate_groups() if config.fade_per_complex else None

    messages = rng.integers(0, code.size, size=trials)
    noise, fades = draw_channel(rng, trials, code.points.shape[1], config.channel, groups)

    labels = code.labels[messages]
    coded = transform.encode(labels)
    sent = np.ravel_multi_index(tuple(coded.T), code.alphabet_sizes)
    snr = 10 ** (config.snr_db[snr_index] / 10)
    x = code.points[sent]
    y = math.sqrt(snr) * (x if fades is None else fades * x) + noise

    errors = []
    for S in config.side_info_sets:
        detected = detect_indices(code, y, snr, S, coded, fades)
        decoded = transform.decode(code.labels[detected])
        errors.append(int(np.count_nonzero(np.any(decoded != labels, axis=1))))
    return errors


def run_sim(config: SimConfig) -> SimResult:
    """
    Monte-Carlo symbol error rate per (SNR, side information set).

    Trials run in fixed-size chunks, each with its own counter-based generator.
    Chunks are merged in index order and the stop rule (min_errors reached, or
    `trials` exhausted) is evaluated after each chunk, so the result does not depend
    on the number of workers.
    """
    code = config.code
    sets = [normalize_side_info(S, code.K) for S in config.side_info_sets]
    config = config.model_copy(update={"side_info_sets": sets})
    workers = resolve_workers(config.workers)
    chunk_count = math.ceil(config.trials / config.chunk_size)

    points = []
    with ThreadPoolExecutor(max_workers=workers) as executor:
        for snr_index, snr_db in enumerate(config.snr_db):
            errors = [0] * len(sets)
            trials = [0] * len(sets)
            active = [True] * len(sets)
            chunk_index = 0
            while any(active) and chunk_index < chunk_count:
                wave = range(chunk_index, min(chunk_index + workers, chunk_count))
                futures = []
                for c in wave:
                    size = min(config.chunk_size, config.trials - c * config.chunk_size)
                    futures.append((size, executor.submit(simulate_chunk, code, config, snr_index, c, size)))
                for size, future in futures:
                    counts = future.result()
                    for s in range(len(sets)):
                        if not active[s]:
                            continue
                        errors[s] += counts[s]
                        trials[s] += size
                        if config.min_errors is not None and errors[s] >= config.min_errors:
                            active[s] = False
                chunk_index = wave.stop

            for s, S in enumerate(sets):
                low, high = confidence_interval(errors[s], trials[s])
                points.append(SimPoint(snr_db, S, errors[s], trials[s], errors[s] / trials[s], low, high))
                logging.info(f"{config.channel.value} SNR {snr_db:.2f} dB S={format_side_info(S)}: "
                             f"{errors[s]} errors in {trials[s]} trials (SER {errors[s] / trials[s]:.3e})")

    return SimResult(tuple(points), config.seed, config.channel, code.digest(), config.digest())


def write_curve_csv(result: SimResult, path, S=None):
    """Write the sweep (or only the rows for set S) with the documented columns."""
    rows = result.points if S is None else result.curve(S)
    with open(path, "w", newline="", encoding="utf-8") as file:
        writer = csv.writer(file)
        writer.writerow(CSV_COLUMNS)
        for p in rows:
            writer.writerow([f"{p.snr_db:.6g}", format_side_info(p.side_info_set), p.errors, p.trials,
                             f"{p.ser:.10e}", f"{p.ci_low:.10e}", f"{p.ci_high:.10e}", result.seed])
    logging.info(f"Wrote {len(rows)} SER rows to {path}")
    return path
