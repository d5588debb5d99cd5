from latticedex.errors import InvalidArgumentError

from utils.experiment import ExperimentSpec, parse_experiment


def _sweep(sets, stop_db=40.0):
    return {
        "channel": "awgn",
        "snr_db": [float(s) for s in range(0, int(stop_db) + 1)],
        "side_info_sets": sets,
        "trials": 10 ** 6,
        "seed": 2024,
        "gap_at": 1e-4,
    }


PRESETS = {
    # Q(sqrt 5), phi_1 = sqrt 5 and phi_2 = 4 + sqrt 5 over the basis {1, (1 + sqrt 5)/2}
    "example1": {
        "name": "example1",
        "field": {"family": "quadratic", "parameter": 5},
        "primes": {"mode": "generators", "generators": [[-1, 2], [3, 2]]},
        "sweep": _sweep([[], [1], [2]]),
    },
    # Q(sqrt -5), the two conjugate primes above 7
    "example2": {
        "name": "example2",
        "field": {"family": "quadratic", "parameter": -5},
        "primes": {"mode": "explicit", "ideals": [{"p": 7, "index": 0}, {"p": 7, "index": 1}]},
        "sweep": _sweep([[], [1], [2]]),
    },
    # Q(sqrt -7), phi_1 = sqrt -7 and phi_2 = 2 + sqrt -7 over the basis {1, (1 + sqrt -7)/2}
    "example3": {
        "name": "example3",
        "field": {"family": "quadratic", "parameter": -7},
        "primes": {"mode": "generators", "generators": [[-1, 2], [1, 2]]},
        "sweep": _sweep([[], [1], [2]]),
    },
    "cyclo-K4": {
        "name": "cyclo-K4",
        "field": {"family": "cyclotomic", "parameter": 5},
        "primes": {"mode": "split", "p": 11, "count": 4},
        "analyze_sets": [[1], [1, 2], [1, 2, 3]],
        "sweep": _sweep([[], [1], [1, 2]], stop_db=50.0),
    },
    "maxreal-K3": {
        "name": "maxreal-K3",
        "field": {"family": "maximal-real", "parameter": 7},
        "primes": {"mode": "split", "p": 13, "count": 3},
        "sweep": _sweep([[], [1], [1, 2]], stop_db=50.0),
    },
}


def preset_names():
    return sorted(PRESETS)


def get_preset(name) -> ExperimentSpec:
    if name not in PRESETS:
        raise InvalidArgumentError(f"Unknown preset '{name}', choose from {', '.join(preset_names())}")
    return parse_experiment(PRESETS[name])
