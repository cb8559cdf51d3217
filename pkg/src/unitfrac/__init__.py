"""Unit-fraction representations of integers with prescribed integral partial sums."""

from .config import RunConfig
from .construction import (
    Block,
    CompactSequence,
    Partition,
    construct,
    lift_to_prime,
    materialize,
    remainder,
    select_block,
    solve_bezout,
)
from .covering import ResidueSystem, classify, covering_function, reciprocal_sum, zhang_subset
from .errors import (
    CertificateFailure,
    CoprimalityError,
    FormatError,
    InternalInvariantViolation,
    NotACoverWarning,
    PartitionError,
    PeriodTooLarge,
    SearchExhausted,
    TooLarge,
)
from .primes import PrimeStream, find_prime_in_ap, is_prime, nth_prime
from .verification import (
    SubsetReport,
    brute_force_verify,
    certificate_verify,
    exact_sum,
    per_block_exhaustive,
)

__version__ = "0.1.0"
