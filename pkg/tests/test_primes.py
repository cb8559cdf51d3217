from math import isqrt

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from unitfrac.errors import CoprimalityError, SearchExhausted
from unitfrac.primes import (
    PrimeStream,
    find_prime_in_ap,
    is_prime,
    nth_prime,
    prime_slice,
    primes_below,
)


def simple_sieve(n):
    flags = [True] * (n + 1)
    flags[0] = flags[1] = False
    for i in range(2, isqrt(n) + 1):
        if flags[i]:
            for j in range(i * i, n + 1, i):
                flags[j] = False
    return [i for i, f in enumerate(flags) if f]


def test_nth_prime_examples():
    assert nth_prime(1) == 2
    assert nth_prime(2) == 3
    assert nth_prime(1000) == 7919


def test_nth_prime_matches_sieve_up_to_10_000():
    oracle = simple_sieve(105_000)
    assert len(oracle) >= 10_000
    assert prime_slice(1, 10_000) == oracle[:10_000]
    assert nth_prime(10_000) == oracle[9_999] == 104_729


def test_nth_prime_rejects_zero():
    with pytest.raises(ValueError):
        nth_prime(0)


def test_primes_below():
    assert primes_below(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert primes_below(2) == []
    assert primes_below(3) == [2]


def test_prime_stream_is_deterministic():
    stream = PrimeStream()
    first = [next(stream) for _ in range(500)]
    assert stream.cursor == 501
    stream.restart()
    assert stream.take(500) == first
    assert first[:5] == [2, 3, 5, 7, 11]
    assert all(a < b for a, b in zip(first, first[1:]))
    assert next(PrimeStream(cursor=1000)) == 7919


def test_is_prime_examples():
    assert is_prime(2)
    assert not is_prime(561)
    assert is_prime(7919)
    assert not is_prime(0) and not is_prime(1)


def test_is_prime_matches_trial_division_up_to_one_million():
    n = np.arange(10**6 + 1, dtype=np.int64)
    composite = n < 2
    for d in range(2, 1001):
        composite |= (n % d == 0) & (n != d)
    expected = ~composite
    got = np.array([is_prime(int(x)) for x in n])
    assert np.array_equal(got, expected)


@pytest.mark.parametrize("n, expected", [
    (3_215_031_751, False),  # strong pseudoprime to bases 2, 3, 5, 7
    (3_825_123_056_546_413_051, False),  # strong pseudoprime to bases 2..23
    (2**61 - 1, True),
    (2**64 - 59, True),  # largest prime below 2**64
    (2**89 - 1, True),
    (2**127 - 1, True),
    ((2**89 - 1) * (2**61 - 1), False),
    ((2**127 - 1) ** 2, False),
    (2**128 + 1, False),  # Fermat number F7
])
def test_is_prime_known_values(n, expected):
    assert is_prime(n) is expected


def test_is_prime_rounds_validated():
    with pytest.raises(ValueError):
        is_prime(7, rounds=0)


def test_find_prime_in_ap_examples():
    assert find_prime_in_ap(1, 6, 3, 10**6) == (7, 1)
    assert find_prime_in_ap(1, 6, 0, 10**6) == (7, 1)
    with pytest.raises(CoprimalityError):
        find_prime_in_ap(2, 6, 0, 10**6)


def test_find_prime_in_ap_step_cap():
    # 1 + 6a is prime at a = 1, 2, 3 (7, 13, 19); 25 = 1 + 6*4 is not
    with pytest.raises(SearchExhausted):
        find_prime_in_ap(1, 6, 19, max_steps=4)
    assert find_prime_in_ap(1, 6, 19, max_steps=5) == (31, 5)


def test_find_prime_in_ap_precondition():
    with pytest.raises(ValueError):
        find_prime_in_ap(7, 6, 0)


@settings(max_examples=200, deadline=None)
@given(st.integers(2, 10**6), st.integers(1, 10**6), st.integers(0, 10**4))
def test_find_prime_in_ap_properties(modulus, s0, multiple):
    # the step cap applies to a itself, so keep the bound a bounded multiple of the modulus
    s0 = s0 % modulus or 1
    lower_bound = multiple * modulus // 10
    if np.gcd(s0, modulus) != 1:
        with pytest.raises(CoprimalityError):
            find_prime_in_ap(s0, modulus, lower_bound)
        return
    p, a = find_prime_in_ap(s0, modulus, lower_bound)
    assert p == s0 + a * modulus
    assert p > lower_bound and is_prime(p)
    skipped = range(s0 + (a - 1) * modulus, lower_bound, -modulus) if a else ()
    assert not any(is_prime(x) for x in skipped if x > lower_bound)
