from .curves import diversity_slope, si_gain_from_curves, snr_at_ser
from .detector import detect_indices, ml_detect
from .simulator import (PassThrough, SimConfig, SimPoint, SimResult, SymbolTransform, confidence_interval, draw_channel,
                        resolve_workers, run_sim, write_curve_csv)
