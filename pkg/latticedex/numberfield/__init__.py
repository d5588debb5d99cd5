from .field import (AlgebraicInt, NumberField, canonical_embed, element_norm, field_from_descriptor, make_cyclotomic_field,
                    make_field, make_maximal_real_field, make_quadratic_field, minkowski_bound)
from .ideal import Ideal, ideal_add, ideal_multiply, ideal_product, is_coprime, principal_ideal
from .primes import (PrimeSplitting, classify_prime, kronecker_symbol, prime_ideal_from_principal, prime_ideals_above,
                     split_completely_primes)
