"""Build m = sum(1/n_i) so that the integral subset sums are the partition's subset sums.

Each part m_c gets a block: a maximal run of consecutive primes whose
reciprocals stay below m_c, closed off exactly by

    m_c = sum(1/p) + t/s + 1/(s*P)

where P is the product of the block primes, g = (m_c - sum(1/p)) * P,
g*s - t*P = 1 and s is a prime larger than every prime used elsewhere.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Optional

import gmpy2

from .errors import (
    CoprimalityError,
    FormatError,
    InternalInvariantViolation,
    PartitionError,
    TooLarge,
)
from .primes import (
    DEFAULT_MAX_STEPS,
    DEFAULT_ROUNDS,
    find_prime_in_ap,
    nth_prime,
    prime_slice,
)

__all__ = [
    "Partition",
    "Block",
    "CompactSequence",
    "prime_reciprocal_sum",
    "select_block",
    "remainder",
    "solve_bezout",
    "lift_to_prime",
    "select_blocks",
    "lift_blocks",
    "assemble",
    "construct",
    "materialize",
]


@dataclass(frozen=True)
class Partition:
    """m together with its parts m_1 <= ... <= m_e."""

    m: int
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        object.__setattr__(self, "parts", parts)
        if not parts:
            raise PartitionError("a partition needs at least one part")
        if any(not isinstance(x, int) or isinstance(x, bool) or x < 1 for x in parts):
            raise PartitionError(f"parts must be positive integers, got {list(parts)}")
        if any(a > b for a, b in zip(parts, parts[1:])):
            raise PartitionError(f"parts must be nondecreasing, got {list(parts)}")
        if sum(parts) != self.m:
            raise PartitionError(f"parts {list(parts)} sum to {sum(parts)}, not m = {self.m}")

    @classmethod
    def from_parts(cls, parts, m=None):
        """Sort ``parts`` and build the partition; ``m`` defaults to their sum."""
        parts = sorted(parts)
        return cls(sum(parts) if m is None else m, tuple(parts))

    @property
    def e(self):
        return len(self.parts)


@dataclass(frozen=True)
class Block:
    """Construction record for one part m_c."""

    index: int  # c, 1-based
    part: int  # m_c
    start: int  # 1-based prime index of primes[0]
    primes: tuple
    P: int
    g: int
    s0: int
    t0: int
    s_tilde: Optional[int] = None
    a: Optional[int] = None
    t_tilde: Optional[int] = None

    @property
    def end(self):
        return self.start + len(self.primes) - 1

    @property
    def lifted(self):
        return self.s_tilde is not None

    @cached_property
    def reciprocal_sum(self):
        """(N, Q) with sum(1/p over the block) = N / Q and Q = prod(primes)."""
        return prime_reciprocal_sum(self.primes)

    @property
    def partial_sum(self):
        return Fraction(*self.reciprocal_sum)

    @property
    def combinations(self):
        """Number of (J, q, delta) selections checked by the per-block enumeration."""
        return 2 ** len(self.primes) * (self.t_tilde + 1) * 2

    def entries(self):
        out = [(p, 1) for p in self.primes]
        out.append((self.s_tilde, self.t_tilde))
        out.append((self.s_tilde * self.P, 1))
        return out

    def to_dict(self):
        return {
            "primes": list(self.primes),
            "P": str(self.P),
            "g": str(self.g),
            "s0": str(self.s0),
            "t0": str(self.t0),
            "a": str(self.a),
            "s_tilde": str(self.s_tilde),
            "t_tilde": str(self.t_tilde),
        }


@dataclass(frozen=True)
class CompactSequence:
    """Run-length encoded unit-fraction sequence: sum of mult/den over entries."""

    entries: tuple
    blocks: tuple = ()
    partition: Optional[Partition] = None

    @classmethod
    def from_entries(cls, pairs, partition=None, blocks=()):
        merged = {}
        for den, mult in pairs:
            if den < 1 or mult < 1:
                raise ValueError(f"bad entry ({den}, {mult})")
            merged[den] = merged.get(den, 0) + mult
        return cls(tuple(sorted(merged.items())), tuple(blocks), partition)

    @classmethod
    def from_denominators(cls, denominators):
        return cls.from_entries((n, 1) for n in denominators)

    @property
    def k(self):
        return sum(mult for _, mult in self.entries)

    def to_dict(self, config=None):
        doc = {}
        if self.partition is not None:
            doc["m"] = self.partition.m
            doc["parts"] = list(self.partition.parts)
        doc["entries"] = [
            {"denominator": str(den), "multiplicity": str(mult)} for den, mult in self.entries
        ]
        doc["blocks"] = [b.to_dict() for b in self.blocks]
        doc["k"] = str(self.k)
        if config is not None:
            doc["config"] = config.to_dict()
        return doc

    @classmethod
    def from_dict(cls, doc):
        try:
            return _sequence_from_dict(doc)
        except FormatError:
            raise
        except (KeyError, TypeError, ValueError, AttributeError) as exc:
            raise FormatError(f"malformed sequence document: {exc!r}") from exc


def _big(value, name):
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise FormatError(f"{name} must be a decimal string, got {value!r}")
    if isinstance(value, str) and not value.isdigit():
        raise FormatError(f"{name} must be a nonnegative decimal string, got {value!r}")
    return int(value)


def _sequence_from_dict(doc):
    if not isinstance(doc, dict):
        raise FormatError("sequence document must be a JSON object")
    partition = None
    if "m" in doc or "parts" in doc:
        partition = Partition(int(doc["m"]), tuple(int(x) for x in doc["parts"]))
    entries = []
    for item in doc["entries"]:
        den = _big(item["denominator"], "denominator")
        mult = _big(item["multiplicity"], "multiplicity")
        if den < 1 or mult < 1:
            raise FormatError(f"entry ({den}, {mult}) must be positive")
        entries.append((den, mult))
    if len({d for d, _ in entries}) != len(entries):
        raise FormatError("denominators in entries must be distinct")
    blocks = []
    start = 1
    for c, raw in enumerate(doc.get("blocks", []), start=1):
        if partition is None or c > partition.e:
            raise FormatError("block records need a partition with a matching part")
        primes = tuple(_big(p, "prime") for p in raw["primes"])
        if not primes:
            raise FormatError(f"block {c} has no primes")
        blocks.append(Block(
            index=c,
            part=partition.parts[c - 1],
            start=start,
            primes=primes,
            P=_big(raw["P"], "P"),
            g=_big(raw["g"], "g"),
            s0=_big(raw["s0"], "s0"),
            t0=_big(raw["t0"], "t0"),
            s_tilde=_big(raw["s_tilde"], "s_tilde"),
            a=_big(raw["a"], "a"),
            t_tilde=_big(raw["t_tilde"], "t_tilde"),
        ))
        start += len(primes)
    if "k" in doc and _big(doc["k"], "k") != sum(m for _, m in entries):
        raise FormatError("k does not match the entry multiplicities")
    return CompactSequence(tuple(sorted(entries)), tuple(blocks), partition)


def prime_reciprocal_sum(primes):
    """Exact sum of 1/p over ``primes`` as ``(N, Q)`` with Q = prod(primes).

    Pairwise (product tree) combination keeps the operands balanced.
    """
    layer = [(gmpy2.mpz(1), gmpy2.mpz(p)) for p in primes]
    if not layer:
        return 0, 1
    while len(layer) > 1:
        nxt = [(a * d + c * b, b * d) for (a, b), (c, d) in zip(layer[::2], layer[1::2])]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    n, q = layer[0]
    return int(n), int(q)


def _scan_run_length(m_c, start):
    # float estimate only; the exact pass below corrects it
    total = 0.0
    j = start
    while True:
        r = 1.0 / nth_prime(j)
        if total + r > m_c:
            return j - start
        total += r
        j += 1


def _select_run(m_c, start):
    primes = prime_slice(start, max(1, _scan_run_length(m_c, start)))
    n, q = (gmpy2.mpz(x) for x in prime_reciprocal_sum(primes))
    while m_c * q <= n and len(primes) > 1:
        p = primes.pop()
        q //= p
        n = (n - q) // p
    while True:
        nxt = nth_prime(start + len(primes))
        if (m_c * q - n) * nxt < q:
            break
        primes.append(nxt)
        n, q = n * nxt + q, q * nxt
    if m_c * q <= n:
        raise InternalInvariantViolation(f"no prime run starting at index {start} stays below {m_c}")
    return primes, int(n), int(q)


def select_block(m_c, start_index):
    """Maximal run p_start, ..., p_end with sum(1/p) < m_c.

    Returns ``(primes, end_index, partial_sum)``; adding the next prime would
    push the sum past m_c. Equality never occurs for distinct primes.
    """
    if m_c < 1 or start_index < 1:
        raise ValueError("need m_c >= 1 and start_index >= 1")
    primes, n, q = _select_run(m_c, start_index)
    return primes, start_index + len(primes) - 1, Fraction(n, q)


def _remainder(m_c, n, q):
    g = m_c * q - n
    if not 0 < g < q:
        raise InternalInvariantViolation(f"remainder g = {g} is outside (0, {q})")
    if gmpy2.gcd(g, q) != 1:
        raise InternalInvariantViolation(f"remainder g = {g} shares a factor with the block product")
    return g


def remainder(m_c, primes):
    """g = (m_c - sum(1/p)) * prod(primes), checked to satisfy 0 < g < P and gcd(g, P) = 1.

    Maximality of the run is not re-checked.
    """
    n, q = prime_reciprocal_sum(primes)
    return _remainder(m_c, n, q)


def solve_bezout(g, P):
    """Smallest (s0, t0) with g*s0 - t0*P = 1, 0 < s0 <= P, t0 >= 0."""
    if not 0 < g < P:
        raise ValueError(f"need 0 < g < P, got g={g}, P={P}")
    if gmpy2.gcd(g, P) != 1:
        raise CoprimalityError(f"gcd({g}, {P}) != 1")
    s0 = gmpy2.invert(g, P)
    t0 = (gmpy2.mpz(g) * s0 - 1) // P
    return int(s0), int(t0)


def lift_to_prime(s0, t0, g, P, lower_bound, max_steps=DEFAULT_MAX_STEPS, rounds=DEFAULT_ROUNDS):
    """Move s0 along s0 + a*P to the least prime above ``lower_bound``.

    Returns ``(s_tilde, t_tilde, a)`` with t_tilde = t0 + a*g, so the Bezout
    relation g*s_tilde - t_tilde*P = 1 still holds and
    g/P = t_tilde/s_tilde + 1/(s_tilde*P).
    """
    if g * s0 - t0 * P != 1:
        raise InternalInvariantViolation(f"g*s0 - t0*P != 1 for g={g}, s0={s0}, t0={t0}, P={P}")
    bound = lower_bound
    while True:
        s_tilde, a = find_prime_in_ap(s0, P, bound, max_steps, rounds)
        t_tilde = t0 + a * g
        if t_tilde > 0:
            break
        # only possible when a = 0 and t0 = 0; keep walking the progression
        bound = s_tilde
    if t_tilde * P != g * s_tilde - 1:
        raise InternalInvariantViolation("lifted pair breaks the Bezout relation")
    if not 0 < t_tilde < s_tilde:
        raise InternalInvariantViolation(f"need 0 < t_tilde < s_tilde, got {t_tilde}, {s_tilde}")
    if Fraction(g, P) != Fraction(t_tilde, s_tilde) + Fraction(1, s_tilde * P):
        raise InternalInvariantViolation("g/P != t/s + 1/(s*P)")
    return s_tilde, t_tilde, a


def select_blocks(partition):
    """Phase 1: consecutive, disjoint prime runs for every part, starting at p_1."""
    blocks = []
    start = 1
    for c, part in enumerate(partition.parts, start=1):
        primes, n, q = _select_run(part, start)
        g = _remainder(part, n, q)
        s0, t0 = solve_bezout(g, q)
        block = Block(index=c, part=part, start=start, primes=tuple(primes), P=q, g=g, s0=s0, t0=t0)
        block.__dict__["reciprocal_sum"] = (n, q)
        blocks.append(block)
        start += len(primes)
    return blocks


def lift_blocks(blocks, rounds=DEFAULT_ROUNDS, max_steps=DEFAULT_MAX_STEPS):
    """Phase 2: lift each block in order, yielding the completed blocks.

    Each lifted prime exceeds every block prime of every part and the
    previously lifted prime, so s_1 < s_2 < ... < s_e.
    """
    bound = max(b.primes[-1] for b in blocks)
    for block in blocks:
        s_tilde, t_tilde, a = lift_to_prime(block.s0, block.t0, block.g, block.P, bound, max_steps, rounds)
        lifted = Block(
            index=block.index, part=block.part, start=block.start, primes=block.primes,
            P=block.P, g=block.g, s0=block.s0, t0=block.t0,
            s_tilde=s_tilde, a=a, t_tilde=t_tilde,
        )
        lifted.__dict__["reciprocal_sum"] = block.reciprocal_sum
        n, q = block.reciprocal_sum
        if block.part * s_tilde * q != n * s_tilde + t_tilde * q + 1:
            raise InternalInvariantViolation(f"block {block.index} does not sum to {block.part}")
        bound = s_tilde
        yield lifted


def assemble(partition, blocks):
    """Collect the lifted blocks into a CompactSequence and check its sum is m."""
    pairs = [pair for b in blocks for pair in b.entries()]
    if len({d for d, _ in pairs}) != len(pairs):
        raise InternalInvariantViolation("two blocks produced the same denominator")
    seq = CompactSequence.from_entries(pairs, partition, blocks)
    if sum(Fraction(mult, den) for den, mult in seq.entries) != partition.m:
        raise InternalInvariantViolation(f"sequence does not sum to m = {partition.m}")
    return seq


def construct(partition, rounds=DEFAULT_ROUNDS, max_steps=DEFAULT_MAX_STEPS):
    blocks = list(lift_blocks(select_blocks(partition), rounds, max_steps))
    return assemble(partition, blocks)


def materialize(seq, limit):
    """Expand the run-length encoding into a nondecreasing list of denominators."""
    k = seq.k
    if k > limit:
        raise TooLarge(k, limit, "term count k")
    return [den for den, mult in seq.entries for _ in range(mult)]
