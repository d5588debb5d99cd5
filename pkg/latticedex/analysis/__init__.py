from .fading import FadingReport, diversity_and_product_distance
from .gains import (GainBounds, GainReport, all_side_info_sets, capacity_rhs, d_s_lower_bound, gain_bounds, min_distance,
                    minkowski_upper_bound, overall_gain, side_info_gain)
from .oklattice import OkLatticeCode, build_oklattice_code
