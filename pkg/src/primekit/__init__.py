"""primekit: prime generation with built-in independent verification.

Four engines, one oracle: generalized-Mersenne evaluation, a
residue-exclusion sieve, window-certified prime constructions, and a
coprimality-certified search above a seed prime. Every value any engine
emits is cross-checked against the oracle in `primekit.oracle`.
"""

__version__ = "0.1.0"

from .errors import InvariantViolation, PrimekitError, ResourceLimitError, ValidationError
from .oracle import (
    OracleVerdict,
    PrimeBasis,
    is_prime,
    odd_prime_product,
    primes_leq_sqrt,
    sieve_primes_below,
)

__all__ = [
    "__version__",
    "InvariantViolation",
    "PrimekitError",
    "ResourceLimitError",
    "ValidationError",
    "OracleVerdict",
    "PrimeBasis",
    "is_prime",
    "odd_prime_product",
    "primes_leq_sqrt",
    "sieve_primes_below",
]
