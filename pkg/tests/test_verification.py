import random
from dataclasses import replace
from fractions import Fraction
from itertools import chain, combinations

import pytest
from hypothesis import given, settings, strategies as st

from unitfrac.construction import CompactSequence, Partition, construct, materialize
from unitfrac.errors import CertificateFailure, TooLarge
from unitfrac.verification import (
    brute_force_verify,
    certificate_verify,
    exact_sum,
    iter_integral_subsets,
    per_block_exhaustive,
    subset_sum_counts,
)


def oracle_counts(denominators):
    """Every index subset, summed with Fractions."""
    counts = {}
    idx = range(len(denominators))
    for subset in chain.from_iterable(combinations(idx, r) for r in range(len(denominators) + 1)):
        total = sum((Fraction(1, denominators[i]) for i in subset), Fraction(0))
        if total.denominator == 1:
            counts[int(total)] = counts.get(int(total), 0) + 1
    return counts


def test_exact_sum_examples(seq_1):
    assert exact_sum(seq_1) == 1
    assert exact_sum(CompactSequence(())) == 0
    assert exact_sum(CompactSequence.from_entries([(2, 4)])) == 2


@pytest.mark.parametrize("method", ["naive", "mitm"])
@pytest.mark.parametrize("dens, count, values", [
    ([2, 3, 7, 42], 2, [0, 1]),
    ([2, 2], 2, [0, 1]),
    # six subsets reach 1: {2,3,7,42}, {3,7,42} with either extra 2, and any two of the three 2s
    ([2, 3, 7, 42, 2, 2], 8, [0, 1, 2]),
    ([], 1, [0]),
    ([1], 2, [0, 1]),
])
def test_brute_force_examples(method, dens, count, values):
    report = brute_force_verify(dens, method=method)
    assert report.count == count
    assert report.values == values
    assert report.evidence == "exhaustive"
    assert report.value_counts == oracle_counts(dens)


def test_brute_force_limits():
    with pytest.raises(TooLarge):
        brute_force_verify([2] * 26, method="naive")
    with pytest.raises(TooLarge):
        brute_force_verify([2] * 43)
    with pytest.raises(TooLarge):
        brute_force_verify([2, 3, 6], max_k=2)
    with pytest.raises(ValueError):
        brute_force_verify([2], method="other")


def test_mitm_at_default_cap():
    # 42 copies of 1/6: integral exactly when the number chosen is a multiple of 6
    from math import comb
    report = brute_force_verify([6] * 42)
    assert report.value_counts == {v: comb(42, 6 * v) for v in range(8)}


denominator_lists = st.lists(st.integers(1, 60), max_size=11)


@settings(max_examples=150, deadline=None)
@given(denominator_lists)
def test_naive_mitm_and_oracle_agree(dens):
    expected = oracle_counts(dens)
    assert brute_force_verify(dens, method="naive").value_counts == expected
    assert brute_force_verify(dens, method="mitm").value_counts == expected


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 100), min_size=17, max_size=22), st.randoms(use_true_random=False))
def test_naive_and_mitm_agree_past_the_split(dens, rnd):
    naive = brute_force_verify(dens, method="naive")
    shuffled = list(dens)
    rnd.shuffle(shuffled)
    assert brute_force_verify(shuffled, method="mitm").value_counts == naive.value_counts


@settings(max_examples=100, deadline=None)
@given(st.lists(st.integers(1, 12).map(lambda e: [1, 2, 3, 4, 6, 8, 9, 12, 16, 18, 24, 36][e - 1]), max_size=7),
       st.lists(st.sampled_from([5, 7, 25, 35, 49]), max_size=7))
def test_coprime_supports_multiply_counts(left, right):
    a = brute_force_verify(left).value_counts
    b = brute_force_verify(right).value_counts
    combined = brute_force_verify(left + right).value_counts
    assert sum(combined.values()) == sum(a.values()) * sum(b.values())
    convolved = {}
    for u, cu in a.items():
        for v, cv in b.items():
            convolved[u + v] = convolved.get(u + v, 0) + cu * cv
    assert combined == convolved


def test_subset_sum_counts():
    assert subset_sum_counts([1, 1]) == {0: 1, 1: 2, 2: 1}
    assert subset_sum_counts([1, 2]) == {0: 1, 1: 1, 2: 1, 3: 1}


def test_iter_integral_subsets_is_lexicographic():
    dens = [2, 3, 4, 6, 12, 2]
    got = list(iter_integral_subsets(dens))
    expected = sorted(
        s for r in range(1, 7) for s in combinations(range(6), r)
        if sum(Fraction(1, dens[i]) for i in s).denominator == 1
    )
    assert got == expected
    assert got[0] == (0, 1, 3)


# -- certificate -------------------------------------------------------------------

def test_certificate_one(seq_1):
    report = certificate_verify(seq_1)
    assert report.count == 2 and report.values == [0, 1]
    assert report.evidence == "certified-by-theorem"
    assert [c.name for c in report.checks] == ["C1", "C2", "C3", "C4", "C5"]
    assert all(c.passed for c in report.checks)


def test_certificate_one_plus_one(seq_11):
    report = certificate_verify(seq_11)
    assert report.count == 4
    assert report.values == [0, 1, 2]
    assert report.value_counts == {0: 1, 1: 2, 2: 1}


def test_certificate_two(seq_2):
    report = certificate_verify(seq_2)
    assert report.count == 2 and report.values == [0, 2]


def test_certificate_agrees_with_brute_force(seq_1):
    cert = certificate_verify(seq_1)
    dens = materialize(seq_1, 25)
    for method in ("naive", "mitm"):
        assert brute_force_verify(dens, method=method).value_counts == cert.value_counts


def _tamper_block(seq, c, **changes):
    blocks = list(seq.blocks)
    blocks[c] = replace(blocks[c], **changes)
    entries = sorted(pair for b in blocks for pair in b.entries())
    return CompactSequence(tuple(entries), tuple(blocks), seq.partition)


@pytest.mark.parametrize("changes, condition", [
    (lambda b: {"t_tilde": b.t_tilde + 1}, "C3"),
    (lambda b: {"s_tilde": b.s_tilde + 2 * b.P, "a": b.a + 2, "t_tilde": b.t_tilde + 2 * b.g}, "C3"),
    (lambda b: {"g": b.g + 1}, "C2"),
    (lambda b: {"primes": b.primes[:-1]}, "C1"),
    (lambda b: {"P": b.P * 5}, "C1"),
    (lambda b: {"s0": b.s0 + 1}, "C3"),
])
def test_certificate_rejects_tampering(seq_11, changes, condition):
    bad = _tamper_block(seq_11, 0, **changes(seq_11.blocks[0]))
    with pytest.raises(CertificateFailure) as info:
        certificate_verify(bad)
    assert info.value.condition == condition
    assert info.value.checks[-1].passed is False


def test_certificate_rejects_lift_below_block_primes(seq_11):
    # 7 = 1 + 6 is prime and satisfies the Bezout relation, but collides with block 2
    bad = _tamper_block(seq_11, 0, s_tilde=7, a=1, t_tilde=1)
    with pytest.raises(CertificateFailure) as info:
        certificate_verify(bad)
    assert info.value.condition == "C3" and info.value.block == 1


def test_certificate_rejects_foreign_entries(seq_1):
    bad = CompactSequence(seq_1.entries[:-1] + ((43, 1),), seq_1.blocks, seq_1.partition)
    with pytest.raises(CertificateFailure) as info:
        certificate_verify(bad)
    assert info.value.condition == "C5"


def test_certificate_needs_provenance():
    with pytest.raises(CertificateFailure):
        certificate_verify(CompactSequence.from_denominators([2, 3, 7, 42]))


# -- per-block enumeration ---------------------------------------------------------

def oracle_block_hits(block):
    hits = []
    for r in range(len(block.primes) + 1):
        for J in combinations(block.primes, r):
            base = sum((Fraction(1, p) for p in J), Fraction(0))
            for q in range(block.t_tilde + 1):
                for delta in (0, 1):
                    total = base + Fraction(q, block.s_tilde) + Fraction(delta, block.s_tilde * block.P)
                    if total.denominator == 1:
                        hits.append((J, q, delta))
    return hits


def test_per_block_one(seq_1):
    (block,) = seq_1.blocks
    assert block.combinations == 16
    assert per_block_exhaustive(block)
    assert oracle_block_hits(block) == [((), 0, 0), ((2, 3), 1, 1)]


def test_per_block_first_of_one_plus_one(seq_11):
    block = seq_11.blocks[0]
    assert block.combinations == 152
    assert per_block_exhaustive(block)
    assert oracle_block_hits(block) == [((), 0, 0), ((2, 3), 18, 1)]


def test_per_block_too_large(seq_11):
    with pytest.raises(TooLarge):
        per_block_exhaustive(seq_11.blocks[1])
    with pytest.raises(TooLarge):
        per_block_exhaustive(seq_11.blocks[0], combo_limit=151)


def test_per_block_detects_bad_block(seq_1):
    (block,) = seq_1.blocks
    # 1/2 + 1/3 + 1/6: the q = 1 step now lands on an integer with delta = 0
    bad = replace(block, s_tilde=6, t_tilde=1)
    assert not per_block_exhaustive(bad)
