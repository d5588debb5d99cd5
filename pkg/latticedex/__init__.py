from .constants import Channel, FieldFamily, PrimeKind
from .errors import LatticedexError
from .numberfield import make_cyclotomic_field, make_field, make_maximal_real_field, make_quadratic_field
from .codec import IndexCode, Message, build_index_code, load_code, save_code
