import math
from enum import Enum


class FieldFamily(Enum):
    QUADRATIC = "quadratic"
    CYCLOTOMIC = "cyclotomic"
    MAXIMAL_REAL = "maximal-real"


class PrimeKind(Enum):
    SPLIT = "split"
    INERT = "inert"
    PARTIAL = "partial"
    RAMIFIED = "ramified"


class Channel(Enum):
    AWGN = "awgn"
    RAYLEIGH = "rayleigh"


# Square-free d < 0 whose ring of integers is a principal ideal domain
PID_IMAGINARY_QUADRATIC = (-1, -2, -3, -7, -11, -19, -43, -67, -163)

# 20*log10(2), the per-bit-per-dimension gain a capacity-like code achieves
SIX_DB = 20 * math.log10(2)

DEFAULTS = {
    "ENUMERATION_CAP": 10 ** 6,
    "ENERGY_RADIUS_FACTOR": 1.0,
    "RADIUS_GROWTH": 1.25,
    "MAX_K": 20,
    "SPOT_CHECKS": 5,
    "EXHAUSTIVE_LIMIT": 10 ** 4,
    "RANDOM_PAIRS": 1000,
    "COORD_TOLERANCE": 1e-9,
    "CHUNK_SIZE": 4096,
    "MIN_ERRORS": 10 ** 4,
    "MAX_TRIALS": 10 ** 8,
    "WILSON_BELOW": 30,
    "CONFIDENCE": 0.95,
    "SLOPE_MIN_ERRORS": 100,
}

EXIT_CODES = {
    "OK": 0,
    "USAGE": 1,
    "VIOLATION": 2,
    "INFEASIBLE": 3,
}

THREADS_ENV = "LATTICEDEX_THREADS"

CODE_FILE_FORMAT = "latticedex.index-code"
CODE_FILE_VERSION = 1

CSV_COLUMNS = ["snr_db", "side_info_set", "errors", "trials", "ser", "ci_low", "ci_high", "seed"]
