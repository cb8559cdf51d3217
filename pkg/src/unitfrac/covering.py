"""Finite systems of residue classes a + nZ and their covering multiplicities."""

import warnings
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Optional

import numpy as np

from .errors import FormatError, NotACoverWarning, PeriodTooLarge, TooLarge
from .verification import iter_integral_subsets

__all__ = [
    "ResidueSystem",
    "CoverClass",
    "covering_function",
    "classify",
    "reciprocal_sum",
    "zhang_subset",
    "find_split",
    "random_exact_cover",
    "DEFAULT_PERIOD_LIMIT",
]

DEFAULT_PERIOD_LIMIT = 10**7


@dataclass(frozen=True)
class ResidueSystem:
    """Classes ``(a, n)`` meaning a + nZ, with residues reduced into [0, n)."""

    classes: tuple = ()

    def __post_init__(self):
        normalized = []
        for a, n in self.classes:
            if isinstance(n, bool) or not isinstance(n, int) or n < 1:
                raise ValueError(f"modulus must be a positive integer, got {n!r}")
            if isinstance(a, bool) or not isinstance(a, int):
                raise ValueError(f"residue must be an integer, got {a!r}")
            normalized.append((a % n, n))
        object.__setattr__(self, "classes", tuple(normalized))

    def __len__(self):
        return len(self.classes)

    @property
    def moduli(self):
        return [n for _, n in self.classes]

    @property
    def period(self):
        return lcm(*self.moduli) if self.classes else 1

    def subsystem(self, indices):
        return ResidueSystem(tuple(self.classes[i] for i in indices))

    def __add__(self, other):
        return ResidueSystem(self.classes + other.classes)

    def to_dict(self):
        return {"classes": [{"a": a, "n": n} for a, n in self.classes]}

    @classmethod
    def from_dict(cls, doc):
        try:
            return cls(tuple((item["a"], item["n"]) for item in doc["classes"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise FormatError(f"malformed residue system: {exc!r}") from exc


@dataclass(frozen=True)
class CoverClass:
    min_cover: int
    exact: bool
    m: Optional[int]
    period: int

    def to_dict(self):
        return {"min_cover": self.min_cover, "exact": self.exact, "m": self.m, "period": self.period}


def covering_function(system, x):
    """Number of classes of ``system`` containing the integer ``x``."""
    return sum(1 for a, n in system.classes if (x - a) % n == 0)


def _coverage(system, period):
    w = np.zeros(period, dtype=np.int64)
    for a, n in system.classes:
        w[a::n] += 1
    return w


def classify(system, period_limit=DEFAULT_PERIOD_LIMIT):
    """Scan one full period and report min coverage and whether it is constant."""
    period = system.period
    if period > period_limit:
        raise PeriodTooLarge(period, period_limit, "period")
    w = _coverage(system, period)
    lo, hi = int(w.min()), int(w.max())
    return CoverClass(lo, lo == hi, lo if lo == hi else None, period)


def reciprocal_sum(system):
    return sum((Fraction(1, n) for n in system.moduli), Fraction(0))


def zhang_subset(system, max_k=20, period_limit=DEFAULT_PERIOD_LIMIT):
    """First index tuple (lexicographic) whose moduli have a positive integral reciprocal sum.

    Every cover admits one. For non-covers a ``NotACoverWarning`` is issued
    and the search still runs; ``None`` means no such subset exists.
    """
    if len(system) > max_k:
        raise TooLarge(len(system), max_k, "class count")
    if classify(system, period_limit).min_cover < 1:
        warnings.warn("system is not a cover; an integral subset is not guaranteed", NotACoverWarning)
    return next(iter_integral_subsets(system.moduli), None)


def find_split(system, max_k=20, period_limit=DEFAULT_PERIOD_LIMIT):
    """Experimental: split an exact m-cover into an exact n-cover plus an exact (m-n)-cover.

    Returns the index tuple of the n-cover part (1 <= n < m) or ``None``
    when the system is unsplittable. Brute force over candidate subsets.
    """
    if len(system) > max_k:
        raise TooLarge(len(system), max_k, "class count")
    info = classify(system, period_limit)
    if not info.exact or info.m < 2:
        raise ValueError("find_split needs an exact m-cover with m >= 2")
    everything = set(range(len(system)))
    # a proper subsystem that is an exact cover has integral reciprocal sum
    for chosen in iter_integral_subsets(system.moduli):
        if len(chosen) == len(system):
            continue
        part = classify(system.subsystem(chosen), period_limit)
        if not part.exact:
            continue
        rest = classify(system.subsystem(sorted(everything - set(chosen))), period_limit)
        if rest.exact:
            return chosen
    return None


def random_exact_cover(rng, max_period=10**4, splits=None, primes=(2, 3, 5)):
    """Exact 1-cover grown from {0 mod 1} by splitting classes.

    A split replaces a + nZ by the p classes a + i*n mod p*n, which keeps
    every integer covered exactly once.
    """
    classes = [(0, 1)]
    steps = rng.randint(0, 8) if splits is None else splits
    for _ in range(steps):
        idx = rng.randrange(len(classes))
        a, n = classes[idx]
        options = [p for p in primes if lcm(*(m for _, m in classes), p * n) <= max_period]
        if not options:
            continue
        p = rng.choice(options)
        classes[idx:idx + 1] = [(a + i * n, p * n) for i in range(p)]
    return ResidueSystem(tuple(classes))

