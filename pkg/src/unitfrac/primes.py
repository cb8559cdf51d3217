"""Prime generation, primality testing and prime search in progressions.

Primes are produced by a segmented sieve of Eratosthenes whose output is
cached for the process; the cache only ever grows, so every query is a pure
function of its arguments.
"""

import random
import threading
from bisect import bisect_left
from itertools import compress
from math import isqrt, log

import gmpy2

from .errors import CoprimalityError, SearchExhausted

__all__ = [
    "PrimeStream",
    "nth_prime",
    "prime_slice",
    "primes_below",
    "is_prime",
    "find_prime_in_ap",
    "DEFAULT_ROUNDS",
    "DEFAULT_MAX_STEPS",
]

DEFAULT_ROUNDS = 64
DEFAULT_MAX_STEPS = 10**6

_SEGMENT = 1 << 20


class _SieveCache:
    def __init__(self):
        self.primes = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47]
        self.limit = 48  # every prime < limit is in self.primes
        self.lock = threading.Lock()

    def extend_to(self, bound):
        """Sieve until every prime below ``bound`` is cached."""
        if bound <= self.limit:
            return
        with self.lock:
            while self.limit < bound:
                lo = self.limit
                # base primes up to sqrt(hi - 1) must already be cached
                hi = min(max(bound, lo + _SEGMENT), lo * lo)
                self.primes.extend(_sieve_segment(lo, hi, self.primes, isqrt(hi - 1)))
                self.limit = hi

    def ensure_count(self, count):
        while len(self.primes) < count:
            n = max(count, 6)
            estimate = int(n * (log(n) + log(log(n)))) + 10
            self.extend_to(max(estimate, 2 * self.limit))


def _sieve_segment(lo, hi, base, root):
    size = hi - lo
    seg = bytearray(b"\x01") * size
    for p in base:
        if p > root:
            break
        start = max(p * p, -(-lo // p) * p)
        if start >= hi:
            continue
        off = start - lo
        seg[off::p] = bytes(len(range(off, size, p)))
    return compress(range(lo, hi), seg)


_cache = _SieveCache()


def nth_prime(j):
    """Return p_j, the j-th prime (p_1 = 2)."""
    if j < 1:
        raise ValueError(f"prime index must be >= 1, got {j}")
    _cache.ensure_count(j)
    return _cache.primes[j - 1]


def prime_slice(start, count):
    """Return the ``count`` consecutive primes p_start, p_start+1, ..."""
    if start < 1 or count < 0:
        raise ValueError("start must be >= 1 and count >= 0")
    _cache.ensure_count(start - 1 + count)
    return _cache.primes[start - 1:start - 1 + count]


def primes_below(n):
    """All primes p < n, in increasing order."""
    _cache.extend_to(n)
    return _cache.primes[:bisect_left(_cache.primes, n)]


class PrimeStream:
    """Iterator over the primes in increasing order.

    ``cursor`` is the 1-based index of the next prime to be emitted, so a
    stream can be resumed anywhere with ``PrimeStream(cursor=j)``.
    """

    def __init__(self, cursor=1):
        if cursor < 1:
            raise ValueError("cursor must be >= 1")
        self.cursor = cursor

    def __iter__(self):
        return self

    def __next__(self):
        p = nth_prime(self.cursor)
        self.cursor += 1
        return p

    def take(self, n):
        out = prime_slice(self.cursor, n)
        self.cursor += n
        return out

    def restart(self):
        self.cursor = 1

    def __repr__(self):
        return f"PrimeStream(cursor={self.cursor})"


_TRIAL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47,
                 53, 59, 61, 67, 71, 73, 79, 83, 89, 97)

# (bound, bases): the bases decide primality exactly for every n < bound.
_DETERMINISTIC_BASES = (
    (2_047, (2,)),
    (1_373_653, (2, 3)),
    (25_326_001, (2, 3, 5)),
    (3_215_031_751, (2, 3, 5, 7)),
    (2_152_302_898_747, (2, 3, 5, 7, 11)),
    (3_474_749_660_383, (2, 3, 5, 7, 11, 13)),
    (341_550_071_728_321, (2, 3, 5, 7, 11, 13, 17)),
    (3_825_123_056_546_413_051, (2, 3, 5, 7, 11, 13, 17, 19, 23)),
    (1 << 64, (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)),
)


def _is_witness(a, n, d, s):
    """True if ``a`` proves ``n`` composite (n - 1 = d * 2**s, d odd)."""
    x = pow(a, d, n)
    if x == 1 or x == n - 1:
        return False
    for _ in range(s - 1):
        x = x * x % n
        if x == n - 1:
            return False
        if x == 1:
            return True
    return True


def is_prime(n, rounds=DEFAULT_ROUNDS):
    """Miller-Rabin primality test.

    Exact for n < 2**64 (fixed witness sets). Above that ``rounds`` bases are
    drawn from a generator seeded by ``n`` itself, so the verdict is
    reproducible; a "prime" answer is wrong with probability at most
    4**-rounds. "Composite" answers are always correct.
    """
    if rounds < 1:
        raise ValueError("rounds must be >= 1")
    n = int(n)
    if n < 2:
        return False
    for p in _TRIAL_PRIMES:
        if n % p == 0:
            return n == p
    if n < 97 * 97:
        return True
    d, s = n - 1, 0
    while not d & 1:
        d >>= 1
        s += 1
    for bound, bases in _DETERMINISTIC_BASES:
        if n < bound:
            return not any(_is_witness(a, n, d, s) for a in bases)
    rng = random.Random(n & ((1 << 256) - 1))
    big_n, big_d = gmpy2.mpz(n), gmpy2.mpz(d)
    for _ in range(rounds):
        if _is_witness(gmpy2.mpz(rng.randrange(2, n - 1)), big_n, big_d, s):
            return False
    return True


def find_prime_in_ap(s0, modulus, lower_bound, max_steps=DEFAULT_MAX_STEPS,
                     rounds=DEFAULT_ROUNDS):
    """Least prime s0 + a*modulus (a >= 0) that exceeds ``lower_bound``.

    Returns ``(prime, a)``. Raises ``SearchExhausted`` once ``a`` would
    exceed ``max_steps``.
    """
    if not 0 < s0 < modulus:
        raise ValueError(f"need 0 < s0 < modulus, got s0={s0}, modulus={modulus}")
    if gmpy2.gcd(s0, modulus) != 1:
        raise CoprimalityError(f"gcd({s0}, {modulus}) != 1; progression holds at most one prime")
    a = 0 if s0 > lower_bound else (lower_bound - s0) // modulus + 1
    candidate = s0 + a * modulus
    while a <= max_steps:
        if is_prime(candidate, rounds):
            return candidate, a
        a += 1
        candidate += modulus
    raise SearchExhausted(
        f"no prime in {s0} + a*{modulus} above {lower_bound} with a <= {max_steps}",
        steps=max_steps,
    )
