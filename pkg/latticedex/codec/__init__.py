from .checks import IsomorphismReport, verify_isomorphism
from .index_code import (Constellation, IndexCode, Message, build_index_code, crt_idempotents, decode_point, encode,
                         encode_representative, normalize_side_info, rate, subcode_points)
from .serialization import code_from_dict, code_to_dict, load_code, save_code, write_points_csv
from .lattice import lattice_min_energy, lattice_min_norm, min_energy_representatives
