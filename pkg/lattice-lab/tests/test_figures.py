"""Long Monte-Carlo sweeps of the preset codes. Run with `pytest -m slow`."""
import math

import numpy as np
import pytest

from latticedex.analysis import min_distance, side_info_gain
from latticedex.channel import SimConfig, diversity_slope, run_sim, si_gain_from_curves
from latticedex.constants import Channel

pytestmark = pytest.mark.slow

TARGET_SER = 1e-4


def _awgn_sweep(code):
    config = SimConfig(code=code, snr_db=[float(s) for s in range(0, 31)], side_info_sets=[(), (1,), (2,)],
                       trials=10 ** 6, min_errors=500, seed=2024, workers=4)
    return run_sim(config)


@pytest.mark.parametrize("code_fixture, expected", [
    ("example1_code", {(1,): 7.0, (2,): 11.0}),
    ("example2_code", {(1,): 12.0, (2,): 12.0}),
    ("example3_code", {(1,): 8.5, (2,): 10.5}),
])
def test_awgn_side_information_gaps(code_fixture, expected, request):
    code = request.getfixturevalue(code_fixture)
    result = _awgn_sweep(code)
    d0_sq = min_distance(code, ())
    for S, gap_db in expected.items():
        measured = si_gain_from_curves(result.curve(()), result.curve(S), TARGET_SER)
        squared_distance_gain = 10 * math.log10(side_info_gain(code, S, d0_sq).dS_sq / d0_sq)
        assert measured == pytest.approx(gap_db, abs=1.0)
        assert measured == pytest.approx(squared_distance_gain, abs=1.0)


@pytest.fixture(scope="module")
def example1_rayleigh(example1_code):
    config = SimConfig(code=example1_code, channel=Channel.RAYLEIGH, snr_db=list(np.arange(10.0, 41.0, 2.0)),
                       side_info_sets=[(), (1,), (2,)], trials=10 ** 6, min_errors=2000, seed=7, workers=4)
    return run_sim(config)


@pytest.mark.parametrize("S, gap_db", [((1,), 8.5), ((2,), 13.0)])
def test_rayleigh_side_information_gaps(example1_rayleigh, S, gap_db):
    measured = si_gain_from_curves(example1_rayleigh.curve(()), example1_rayleigh.curve(S), TARGET_SER)
    assert measured == pytest.approx(gap_db, abs=1.5)


# windows sit at matching error rates on each curve
@pytest.mark.parametrize("S, window", [((), (26, 40)), ((1,), (18, 32)), ((2,), (14, 28))])
def test_rayleigh_diversity_of_a_totally_real_code(example1_rayleigh, S, window):
    assert diversity_slope(example1_rayleigh.curve(S), snr_window_db=window) == pytest.approx(2.0, abs=0.3)


def test_rayleigh_diversity_of_a_totally_complex_code(example2_code):
    config = SimConfig(code=example2_code, channel=Channel.RAYLEIGH, snr_db=list(np.arange(20.0, 41.0, 2.0)),
                       trials=10 ** 6, min_errors=2000, seed=7, workers=4)
    result = run_sim(config)
    assert diversity_slope(result.curve(()), snr_window_db=(26, 40)) == pytest.approx(1.0, abs=0.3)
