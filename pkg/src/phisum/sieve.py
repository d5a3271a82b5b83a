"""Segmented Mobius sieve.

Produces mu(x) for x = 1..limit in increasing order while holding only the
prime table (primes <= sqrt(limit)) and one block-sized scratch array, so the
working set stays at pi(sqrt(limit)) + block elements.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import isqrt

# Cache-friendly cap on sieve blocks; correctness holds for any block >= 1.
DEFAULT_BLOCK_CAP = 1 << 18


@dataclass(frozen=True)
class PrimeTable:
    """Ascending array of primes, complete up to the construction bound."""

    primes: np.ndarray

    def __len__(self):
        return int(self.primes.size)


@dataclass(frozen=True)
class SieveSegment:
    """mu values on [lo, hi]; mu[i] = mobius(lo + i), stored as int8."""

    lo: int
    hi: int
    mu: np.ndarray


@dataclass(frozen=True)
class SieveStats:
    """Peak auxiliary element counts for one streaming pass."""

    prime_count: int
    block_size: int

    @property
    def peak_elements(self):
        return self.prime_count + self.block_size


def primes_upto(limit):
    """All primes <= limit, ascending."""
    if limit < 1:
        raise ValueError("limit must be positive")
    if limit < 2:
        return PrimeTable(np.empty(0, dtype=np.int64))
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, isqrt(limit) + 1):
        if flags[p]:
            flags[p * p :: p] = False
    return PrimeTable(np.flatnonzero(flags).astype(np.int64))


def default_block_size(limit):
    """Power of two covering isqrt(limit), capped at a cache-sized block."""
    r = isqrt(max(limit, 1))
    block = 1
    while block < r:
        block <<= 1
    return min(block, DEFAULT_BLOCK_CAP)


def _check_prime_table(primes, hi):
    r = isqrt(hi)
    if r >= 2:
        arr = primes.primes
        # Bertrand: the largest prime <= r exceeds r/2, so a complete table
        # must reach past r/2. Catches grossly undersized tables cheaply.
        if arr.size == 0 or int(arr[-1]) * 2 < r:
            raise ValueError("prime table incomplete for sieving up to %d" % hi)


def mobius_segment(lo, hi, primes):
    """Exact mu on [lo, hi] using one scratch block plus the prime table."""
    if not 1 <= lo <= hi:
        raise ValueError("need 1 <= lo <= hi")
    _check_prime_table(primes, hi)
    count = hi - lo + 1
    scratch = np.empty(count, dtype=np.int64)
    _kernels.mobius_block(lo, hi, primes.primes, scratch)
    mu = np.empty(count, dtype=np.int8)
    _kernels.mu_extract(scratch, lo, count, mu)
    return SieveSegment(lo, hi, mu)


def mobius_prefix(limit):
    """mu as a 1-indexed int8 array of length limit + 1 (index 0 unused)."""
    seg = mobius_segment(1, limit, primes_upto(isqrt(limit)))
    out = np.zeros(limit + 1, dtype=np.int8)
    out[1:] = seg.mu
    return out


def stream_mobius(limit, block=None, visitor=None):
    """Call visitor(x, mu(x)) for x = 1..limit in increasing order.

    Never materializes more than one scratch block plus the prime table;
    returns the SieveStats describing that working set. A visitor exception
    propagates and the sieve state is discarded with it.
    """
    if visitor is None:
        raise TypeError("visitor callback is required")
    if limit < 1:
        raise ValueError("limit must be positive")
    if block is None:
        block = default_block_size(limit)
    if block < 1:
        raise ValueError("block must be positive")
    table = primes_upto(isqrt(limit))
    width = min(block, limit)
    scratch = np.empty(width, dtype=np.int64)
    lo = 1
    while lo <= limit:
        hi = min(lo + block - 1, limit)
        count = hi - lo + 1
        _kernels.mobius_block(lo, hi, table.primes, scratch[:count])
        vals = scratch[:count].tolist()
        for i in range(count):
            x = lo + i
            w = vals[i]
            if w == 0:
                mu = 0
            elif w > 0:
                mu = 1 if w == x else -1
            else:
                mu = -1 if w == -x else 1
            visitor(x, mu)
        lo = hi + 1
    return SieveStats(prime_count=len(table), block_size=width)
