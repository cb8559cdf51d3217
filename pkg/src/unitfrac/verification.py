"""Checking which index subsets of a unit-fraction sequence sum to integers.

Two independent routes: ``certificate_verify`` replays the hypotheses of the
construction on the block records, and ``brute_force_verify`` enumerates
index subsets of an explicit denominator list.
"""

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm

import gmpy2

from .construction import prime_reciprocal_sum
from .errors import CertificateFailure, TooLarge
from .primes import DEFAULT_ROUNDS, is_prime, prime_slice

__all__ = [
    "Check",
    "SubsetReport",
    "exact_sum",
    "subset_sum_counts",
    "certificate_verify",
    "brute_force_verify",
    "iter_integral_subsets",
    "per_block_exhaustive",
    "NAIVE_MAX_K",
    "MITM_MAX_K",
]

NAIVE_MAX_K = 25
MITM_MAX_K = 42

CERTIFIED = "certified-by-theorem"
EXHAUSTIVE = "exhaustive"


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self):
        return {"name": self.name, "pass": self.passed, "detail": self.detail}


@dataclass
class SubsetReport:
    """Integral index subsets of a sequence.

    ``value_counts`` maps each attained integer to the number of index
    subsets summing to it; ``count`` is their total.
    """

    mode: str
    value_counts: dict
    evidence: str
    checks: list = field(default_factory=list)

    @property
    def count(self):
        return sum(self.value_counts.values())

    @property
    def values(self):
        return sorted(self.value_counts)

    def to_dict(self, config=None):
        doc = {
            "mode": self.mode,
            "count": str(self.count),
            "values": [str(v) for v in self.values],
            "value_counts": {str(v): str(self.value_counts[v]) for v in self.values},
            "evidence": self.evidence,
            "checks": [c.to_dict() for c in self.checks],
        }
        if config is not None:
            doc["config"] = config.to_dict()
        return doc


def exact_sum(seq):
    return sum((Fraction(mult, den) for den, mult in seq.entries), Fraction(0))


def subset_sum_counts(values):
    """Counter mapping each subset sum of ``values`` to how many index subsets reach it."""
    counts = Counter({0: 1})
    for v in values:
        step = Counter()
        for s, c in counts.items():
            step[s] += c
            step[s + v] += c
        counts = step
    return counts


# -- certificate ------------------------------------------------------------

def certificate_verify(seq, rounds=DEFAULT_ROUNDS):
    """Check every hypothesis of the construction on the block records.

    Conditions, each checked with exact integer arithmetic:
      C1  blocks are consecutive disjoint prime runs from p_1, P is their
          product, and sum(1/p) < m_c < sum(1/p) + 1/p_next
      C2  g = (m_c - sum(1/p)) * P with 0 < g < P and gcd(g, P) = 1
      C3  g*s - t*P = 1 (also for the recorded s0, t0, a), s prime, s above
          every block prime, s_1 < ... < s_e, 0 < t < s
      C4  sum(1/p) + t/s + 1/(s*P) = m_c
      C5  entries are exactly the block terms and sum to m

    When all pass the integral subsets are those predicted for the
    partition: 2**e of them, valued at the subset sums of the parts.
    """
    checks = []

    def fail(name, block, detail):
        checks.append(Check(name, False, f"block {block}: {detail}" if block else detail))
        raise CertificateFailure(name, block, detail, checks)

    partition = seq.partition
    blocks = seq.blocks
    if partition is None or not blocks:
        fail("C1", None, "sequence carries no block provenance")
    if len(blocks) != partition.e:
        fail("C1", None, f"{len(blocks)} blocks for {partition.e} parts")

    # C1
    sums = []
    start = 1
    for b in blocks:
        expected = tuple(prime_slice(start, len(b.primes)))
        if tuple(b.primes) != expected:
            fail("C1", b.index, f"primes are not the consecutive run starting at p_{start}")
        n, q = prime_reciprocal_sum(b.primes)
        if q != b.P:
            fail("C1", b.index, "P is not the product of the block primes")
        p_next = prime_slice(start + len(b.primes), 1)[0]
        slack = b.part * q - n
        if not (slack > 0 and slack * p_next < q):
            fail("C1", b.index, f"sum(1/p) < {b.part} < sum(1/p) + 1/{p_next} does not hold")
        sums.append(n)
        start += len(b.primes)
    checks.append(Check("C1", True, f"{len(blocks)} consecutive maximal prime runs"))

    # C2
    for b, n in zip(blocks, sums):
        if b.g != b.part * b.P - n:
            fail("C2", b.index, "g != (m_c - sum(1/p)) * P")
        if not 0 < b.g < b.P:
            fail("C2", b.index, "g is not in (0, P)")
        if gmpy2.gcd(b.g, b.P) != 1:
            fail("C2", b.index, "gcd(g, P) != 1")
    checks.append(Check("C2", True, "0 < g < P and gcd(g, P) = 1 for every block"))

    # C3
    top = max(b.primes[-1] for b in blocks)
    previous = top
    for b in blocks:
        g, P, s, t = (gmpy2.mpz(x) for x in (b.g, b.P, b.s_tilde, b.t_tilde))
        if g * b.s0 - b.t0 * P != 1:
            fail("C3", b.index, "g*s0 - t0*P != 1")
        if b.s_tilde != b.s0 + b.a * b.P or b.t_tilde != b.t0 + b.a * b.g:
            fail("C3", b.index, "lifted pair is not (s0 + a*P, t0 + a*g)")
        if g * s - t * P != 1:
            fail("C3", b.index, "g*s - t*P != 1")
        if not 0 < b.t_tilde < b.s_tilde:
            fail("C3", b.index, "0 < t < s does not hold")
        if b.s_tilde <= previous:
            what = "every block prime" if previous == top else "the previous lifted prime"
            fail("C3", b.index, f"s = {b.s_tilde} does not exceed {what}")
        if not is_prime(b.s_tilde, rounds):
            fail("C3", b.index, f"s is composite (Miller-Rabin, {rounds} rounds)")
        previous = b.s_tilde
    checks.append(Check("C3", True, f"Bezout relations hold, lifted primes increasing, {rounds} Miller-Rabin rounds"))

    # C4
    for b, n in zip(blocks, sums):
        if b.part * b.s_tilde * b.P != n * b.s_tilde + b.t_tilde * b.P + 1:
            fail("C4", b.index, f"block terms do not sum to {b.part}")
    checks.append(Check("C4", True, "every block sums to its part"))

    # C5
    expected_entries = sorted(pair for b in blocks for pair in b.entries())
    if list(seq.entries) != expected_entries:
        fail("C5", None, "entries do not match the block records")
    total = exact_sum(seq)
    if total != partition.m:
        fail("C5", None, f"entries sum to {total}, not {partition.m}")
    checks.append(Check("C5", True, f"entries sum to {partition.m}"))

    return SubsetReport("certificate", dict(subset_sum_counts(partition.parts)), CERTIFIED, checks)


# -- brute force ------------------------------------------------------------

def _weights(denominators):
    L = lcm(*denominators) if denominators else 1
    return L, [L // n for n in denominators]


def _all_sums(weights):
    sums = [0]
    for w in weights:
        sums += [s + w for s in sums]
    return sums


def _naive_counts(weights, L):
    # every subset visited individually: low bits as a list, high bits as offsets
    low = _all_sums(weights[:16])
    counts = Counter()
    for offset in _all_sums(weights[16:]):
        counts.update((x + offset) // L for x in low if (x + offset) % L == 0)
    return counts


def _mitm_counts(weights, L):
    half = len(weights) // 2
    left = _all_sums(weights[:half])
    right = _all_sums(weights[half:])
    residues = Counter(x % L for x in left)
    matched = [y for y in right if (-y) % L in residues]
    wanted = {(-y) % L for y in matched}
    by_residue = {}
    for x in left:
        r = x % L
        if r in wanted:
            by_residue.setdefault(r, Counter())[x] += 1
    counts = Counter()
    for y in matched:
        for x, c in by_residue[(-y) % L].items():
            counts[(x + y) // L] += c
    return counts


def brute_force_verify(denominators, max_k=None, method="mitm"):
    """Count index subsets I with sum(1/n_i for i in I) integral, exhaustively.

    ``method`` is ``"naive"`` (all 2**k subsets one by one) or ``"mitm"``
    (meet in the middle on residues modulo the common denominator).
    Repeated denominators count as distinct indices.
    """
    denominators = [int(n) for n in denominators]
    if any(n < 1 for n in denominators):
        raise ValueError("denominators must be positive")
    if method == "naive":
        limit = NAIVE_MAX_K if max_k is None else max_k
        run = _naive_counts
    elif method == "mitm":
        limit = MITM_MAX_K if max_k is None else max_k
        run = _mitm_counts
    else:
        raise ValueError(f"unknown method {method!r}")
    if len(denominators) > limit:
        raise TooLarge(len(denominators), limit, "term count k")
    L, weights = _weights(denominators)
    counts = run(weights, L)
    return SubsetReport("brute", dict(counts), EXHAUSTIVE, [Check(method, True, f"k = {len(denominators)}")])


def iter_integral_subsets(denominators):
    """Yield nonempty index tuples with integral reciprocal sum, in lexicographic order."""
    L, weights = _weights([int(n) for n in denominators])
    k = len(weights)
    chosen = []

    def walk(start, total):
        for i in range(start, k):
            t = total + weights[i]
            chosen.append(i)
            if t % L == 0:
                yield tuple(chosen)
            yield from walk(i + 1, t)
            chosen.pop()

    return walk(0, 0)


def per_block_exhaustive(block, combo_limit=10**6):
    """Enumerate sum(1/p for p in J) + q/s + delta/(s*P) over every J, q <= t, delta.

    Passes when the only integral selections are the empty one and the full
    one (J = all primes, q = t, delta = 1).
    """
    combos = block.combinations
    if combos > combo_limit:
        raise TooLarge(combos, combo_limit, "combination count")
    W = block.s_tilde * block.P
    prime_weights = [W // p for p in block.primes]
    hits = []
    for mask, j_sum in enumerate(_all_sums(prime_weights)):
        for delta in (0, 1):
            x = (j_sum + delta) % W
            for q in range(block.t_tilde + 1):
                if x == 0:
                    hits.append((mask, q, delta))
                x = (x + block.P) % W
    full = (1 << len(block.primes)) - 1
    return sorted(hits) == [(0, 0, 0), (full, block.t_tilde, 1)]
