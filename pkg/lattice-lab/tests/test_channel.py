import csv
import math

import numpy as np
import pytest
from pydantic import ValidationError

from latticedex.channel import (PassThrough, SimConfig, SymbolTransform, confidence_interval, detect_indices,
                                diversity_slope, draw_channel, ml_detect, resolve_workers, run_sim,
                                si_gain_from_curves, snr_at_ser, write_curve_csv)
from latticedex.codec import Message, encode
from latticedex.constants import CSV_COLUMNS, THREADS_ENV, Channel
from latticedex.errors import InsufficientDataError, NotBracketedError


class ShiftLabels(SymbolTransform):
    """Adds one to every label before modulation."""

    def __init__(self, sizes):
        self.sizes = np.array(sizes)

    def encode(self, labels):
        return (labels + 1) % self.sizes

    def decode(self, labels):
        return (labels - 1) % self.sizes


def test_noiseless_detection_recovers_every_message(example3_code):
    snr = 100.0
    for t in range(example3_code.size):
        msg = Message.from_labels(example3_code, example3_code.labels[t])
        y = math.sqrt(snr) * encode(example3_code, msg)
        assert ml_detect(example3_code, y, snr) == msg


def test_full_side_information_returns_the_known_message(example3_code):
    fixed = Message.from_labels(example3_code, (2, 9))
    y = np.random.default_rng(3).standard_normal(2) * 10
    assert ml_detect(example3_code, y, 1.0, S=(1, 2), fixed=fixed) == fixed


def test_side_information_restricts_candidates(example1_code):
    rng = np.random.default_rng(5)
    y = rng.standard_normal((50, 2))
    side = np.tile([[3, 0]], (50, 1))
    detected = detect_indices(example1_code, y, 2.0, S=(1,), side_labels=side)
    assert np.all(example1_code.labels[detected, 0] == 3)


def test_missing_side_labels_mean_all_zero(example1_code):
    y = np.random.default_rng(6).standard_normal((40, 2))
    detected = detect_indices(example1_code, y, 2.0, S=(2,))
    assert np.all(example1_code.labels[detected, 1] == 0)
    zeros = np.zeros((40, 2), dtype=np.int64)
    assert np.array_equal(detected, detect_indices(example1_code, y, 2.0, S=(2,), side_labels=zeros))


def test_unit_fades_match_awgn_detection(example2_code):
    rng = np.random.default_rng(11)
    y = rng.standard_normal((200, 2))
    awgn = detect_indices(example2_code, y, 3.0)
    faded = detect_indices(example2_code, y, 3.0, h=np.ones((200, 2)))
    assert np.array_equal(awgn, faded)


def test_draw_channel_moments():
    rng = np.random.default_rng(0)
    noise, fades = draw_channel(rng, 200000, 2, Channel.RAYLEIGH)
    assert np.var(noise) == pytest.approx(0.5, rel=0.01)
    assert np.mean(fades ** 2) == pytest.approx(1.0, rel=0.01)

    _, none = draw_channel(rng, 10, 2, Channel.AWGN)
    assert none is None


def test_draw_channel_shares_fades_within_a_complex_embedding():
    rng = np.random.default_rng(0)
    _, fades = draw_channel(rng, 100, 4, Channel.RAYLEIGH, groups=np.array([0, 0, 1, 1]))
    assert np.array_equal(fades[:, 0], fades[:, 1])
    assert np.array_equal(fades[:, 2], fades[:, 3])
    assert not np.array_equal(fades[:, 0], fades[:, 2])


def test_confidence_interval():
    low, high = confidence_interval(100, 1000)
    assert low == pytest.approx(0.0814, abs=1e-4)
    assert high == pytest.approx(0.1186, abs=1e-4)

    low, high = confidence_interval(0, 1000)
    assert low == 0
    assert high == pytest.approx(0.003827, rel=1e-3)

    low, high = confidence_interval(10, 10)
    assert low == pytest.approx(0.7225, abs=1e-3)
    assert high == 1

    assert confidence_interval(2000, 2000) == (1.0, 1.0)


def test_resolve_workers_honours_thread_cap(monkeypatch):
    monkeypatch.delenv(THREADS_ENV, raising=False)
    assert resolve_workers(8) == 8
    monkeypatch.setenv(THREADS_ENV, "2")
    assert resolve_workers(8) == 2
    monkeypatch.setenv(THREADS_ENV, "many")
    assert resolve_workers(8) == 8


def test_symbol_transforms():
    labels = np.array([[1, 2], [3, 4]])
    assert PassThrough().encode(labels) is labels
    assert PassThrough().decode(labels) is labels
    with pytest.raises(NotImplementedError):
        SymbolTransform().encode(labels)


def test_sim_config_validation(example3_code):
    with pytest.raises(ValidationError):
        SimConfig(code=example3_code, snr_db=[3.0, 1.0])
    with pytest.raises(ValidationError):
        SimConfig(code=example3_code, snr_db=[])
    with pytest.raises(ValidationError):
        SimConfig(code=example3_code, snr_db=[0.0], trials=0)


def _small_config(code, **overrides):
    settings = dict(code=code, snr_db=[0.0, 4.0, 8.0], side_info_sets=[(), (1,), (2,)], trials=4096,
                    min_errors=60, seed=17, chunk_size=256)
    settings.update(overrides)
    return SimConfig(**settings)


def test_run_sim_is_independent_of_worker_count(example3_code):
    single = run_sim(_small_config(example3_code, workers=1))
    threaded = run_sim(_small_config(example3_code, workers=3))
    assert single.points == threaded.points
    assert single.config_digest == threaded.config_digest


def test_run_sim_seed_changes_results(example3_code):
    first = run_sim(_small_config(example3_code, min_errors=None, trials=1024))
    second = run_sim(_small_config(example3_code, min_errors=None, trials=1024, seed=18))
    assert [p.errors for p in first.points] != [p.errors for p in second.points]


def test_side_information_never_adds_errors(example1_code):
    result = run_sim(_small_config(example1_code, min_errors=None, trials=2048))
    for snr_db in (0.0, 4.0, 8.0):
        base = next(p for p in result.curve(()) if p.snr_db == snr_db)
        for S in [(1,), (2,)]:
            point = next(p for p in result.curve(S) if p.snr_db == snr_db)
            assert point.trials == base.trials
            assert point.errors <= base.errors


def test_high_snr_and_full_side_information_are_error_free(example3_code):
    result = run_sim(SimConfig(code=example3_code, snr_db=[40.0], side_info_sets=[(), (1, 2)], trials=2000,
                               min_errors=None, chunk_size=500))
    assert all(p.errors == 0 and p.ser == 0 for p in result.points)


def test_rayleigh_simulation_with_transform(example2_code):
    transform = ShiftLabels(example2_code.alphabet_sizes)
    result = run_sim(SimConfig(code=example2_code, channel=Channel.RAYLEIGH, snr_db=[60.0], trials=1000,
                               min_errors=None, transform=transform, fade_per_complex=True))
    point = result.points[0]
    assert point.trials == 1000
    assert point.ser < 0.01


def test_stop_rule_ends_a_point_early(example3_code):
    result = run_sim(_small_config(example3_code, snr_db=[-5.0], side_info_sets=[()], min_errors=10))
    point = result.points[0]
    assert point.errors >= 10
    assert point.trials < 4096
    assert point.trials % 256 == 0


def test_curve_csv(example3_code, tmp_path):
    result = run_sim(_small_config(example3_code, trials=512))
    path = tmp_path / "curve.csv"
    write_curve_csv(result, str(path), S=(1,))
    with open(path, newline="") as file:
        rows = list(csv.reader(file))
    assert rows[0] == CSV_COLUMNS
    assert len(rows) == 4
    assert {row[1] for row in rows[1:]} == {"{1}"}
    assert all(row[-1] == "17" for row in rows[1:])


def _power_law(slope, offset_db=0.0):
    return [(snr, 10 ** (-slope * (snr - offset_db) / 10), 1000) for snr in np.arange(0.0, 31.0, 5.0)]


def test_snr_at_ser_interpolates_in_log_domain():
    curve = [(0.0, 1e-1), (10.0, 1e-3)]
    assert snr_at_ser(curve, 1e-2) == pytest.approx(5.0)
    assert snr_at_ser(curve, 1e-1) == 0.0


def test_snr_at_ser_requires_a_bracket():
    curve = [(0.0, 1e-1), (10.0, 1e-3)]
    with pytest.raises(NotBracketedError):
        snr_at_ser(curve, 1e-5)
    with pytest.raises(NotBracketedError):
        snr_at_ser(curve, 0.0)


def test_side_information_gain_from_shifted_curves():
    base = _power_law(1.0, offset_db=5.0)
    assert si_gain_from_curves(base, base, 1e-2) == pytest.approx(0.0)
    assert si_gain_from_curves(base, _power_law(1.0), 1e-2) == pytest.approx(5.0)


def test_diversity_slope_of_a_power_law():
    assert diversity_slope(_power_law(2.0)) == pytest.approx(2.0)
    assert diversity_slope(_power_law(2.0), snr_window_db=(10, 30)) == pytest.approx(2.0)


def test_diversity_slope_needs_enough_points():
    with pytest.raises(InsufficientDataError):
        diversity_slope(_power_law(2.0), snr_window_db=(0, 5))
    sparse = [(snr, ser, 5) for snr, ser, _ in _power_law(2.0)]
    with pytest.raises(InsufficientDataError):
        diversity_slope(sparse)
