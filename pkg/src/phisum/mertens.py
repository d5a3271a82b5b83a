"""Mertens-function utilities.

Prefix tables of M(x) = sum of mu(1..x), a dict of M at quotient points
n//y, a standalone evaluator of the hyperbola recursion

    M(n) = 1 + B*M(alpha) - sum_{x<=alpha} mu(x)*(n//x) - sum_{y=2..B} M(n//y)

with B = n//alpha (valid for any positive alpha <= n), and a streamed
brute-force oracle for differential tests.
"""

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .core import isqrt
from .sieve import default_block_size, primes_upto

ORACLE_MAX_N = 10**9


@dataclass(frozen=True)
class MertensTable:
    """values[x] = M(x) for 1 <= x <= limit (index 0 unused)."""

    limit: int
    values: np.ndarray


@dataclass(frozen=True)
class LargeMertensMap:
    """entries[y] = M(n//y) for 1 <= y <= beta."""

    n: int
    entries: dict


def mertens_table(limit):
    """Exact prefix sums of mu up to limit."""
    if limit < 1:
        raise ValueError("limit must be positive")
    table = primes_upto(isqrt(limit))
    block = default_block_size(limit)
    width = min(block, limit)
    scratch = np.empty(width, dtype=np.int64)
    mu8 = np.empty(width, dtype=np.int8)
    values = np.zeros(limit + 1, dtype=np.int64)
    running = 0
    lo = 1
    while lo <= limit:
        hi = min(lo + block - 1, limit)
        count = hi - lo + 1
        _kernels.mobius_block(lo, hi, table.primes, scratch[:count])
        _kernels.mu_extract(scratch[:count], lo, count, mu8[:count])
        np.cumsum(mu8[:count], dtype=np.int64, out=values[lo : hi + 1])
        values[lo : hi + 1] += running
        running = int(values[hi])
        lo = hi + 1
    return MertensTable(limit=limit, values=values)


def mertens_oracle(n):
    """M(n) by direct summation of streamed mu; guarded desk-scale oracle."""
    if n < 1:
        raise ValueError("n must be positive")
    if n > ORACLE_MAX_N:
        raise ValueError("mertens_oracle supports n <= 10^9")
    table = primes_upto(isqrt(n))
    block = default_block_size(n)
    width = min(block, n)
    scratch = np.empty(width, dtype=np.int64)
    mu8 = np.empty(width, dtype=np.int8)
    total = 0
    lo = 1
    while lo <= n:
        hi = min(lo + block - 1, n)
        count = hi - lo + 1
        _kernels.mobius_block(lo, hi, table.primes, scratch[:count])
        _kernels.mu_extract(scratch[:count], lo, count, mu8[:count])
        total += int(np.sum(mu8[:count], dtype=np.int64))
        lo = hi + 1
    return total


def mertens_hyperbola(n, alpha, small, large, mu_prefix):
    """M(n) via the hyperbola recursion at split point alpha.

    small must cover [1, alpha], large must hold M(n//y) for 2 <= y <= beta,
    and mu_prefix must be indexable for x in [1, alpha].
    """
    if n < 1 or alpha < 1 or alpha > n:
        raise ValueError("need 1 <= alpha <= n")
    if small.limit < alpha:
        raise ValueError("small Mertens table does not cover alpha")
    beta = n // alpha
    total = 1 + beta * int(small.values[alpha])
    mus = list(mu_prefix[1 : alpha + 1])
    for i in range(alpha):
        mu = mus[i]
        if mu:
            total -= int(mu) * (n // (i + 1))
    entries = large.entries
    for y in range(2, beta + 1):
        if y not in entries:
            raise ValueError("large Mertens map missing entry for y=%d" % y)
        total -= entries[y]
    return total


def large_mertens_map(n, alpha, small, mu_prefix):
    """Build M(n//y) for y = 1..n//alpha by descending recursion.

    Requires alpha >= isqrt(n) so every sub-read lands either in small
    (arguments <= alpha) or in an entry already finalized (larger y).
    """
    if alpha < isqrt(n):
        raise ValueError("need alpha >= isqrt(n) for the recursive fill")
    if small.limit < alpha:
        raise ValueError("small Mertens table does not cover alpha")
    beta = n // alpha
    entries = {}
    for y in range(beta, 0, -1):
        v = n // y
        if v <= small.limit:
            entries[y] = int(small.values[v])
            continue
        r = isqrt(v)
        total = 1 + (v // r) * int(small.values[r])
        for x in range(1, r + 1):
            mu = int(mu_prefix[x])
            if mu:
                total -= mu * (v // x)
        for t in range(2, v // r + 1):
            key = y * t
            if key <= beta:
                total -= entries[key]
            else:
                total -= int(small.values[n // key])
        entries[y] = total
    return LargeMertensMap(n=n, entries=entries)
