import os
import sys

import pytest

APP_DIR = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
ROOT_DIR = os.path.dirname(APP_DIR)
for path in (ROOT_DIR, APP_DIR):
    if path not in sys.path:
        sys.path.insert(0, path)

from latticedex.codec import build_index_code  # noqa: E402
from latticedex.numberfield import (make_quadratic_field, prime_ideal_from_principal,  # noqa: E402
                                    prime_ideals_above)


@pytest.fixture(scope="session")
def example1_code():
    """Q(sqrt 5) with phi_1 = sqrt 5 and phi_2 = 4 + sqrt 5: 55 points."""
    field = make_quadratic_field(5)
    primes = [prime_ideal_from_principal(field, field.from_sqrt(0, 1)),
              prime_ideal_from_principal(field, field.from_sqrt(4, 1))]
    return build_index_code(field, primes)


@pytest.fixture(scope="session")
def example2_code():
    """Q(sqrt -5) with the two primes above 7: 49 points."""
    field = make_quadratic_field(-5)
    return build_index_code(field, prime_ideals_above(field, 7))


@pytest.fixture(scope="session")
def example3_code():
    """Q(sqrt -7) with phi_1 = sqrt -7 and phi_2 = 2 + sqrt -7: 77 points."""
    field = make_quadratic_field(-7)
    primes = [prime_ideal_from_principal(field, field.from_sqrt(0, 1)),
              prime_ideal_from_principal(field, field.from_sqrt(2, 1))]
    return build_index_code(field, primes)
