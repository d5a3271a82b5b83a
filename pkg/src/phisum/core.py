"""Exact integer primitives shared by every other module.

All arithmetic that assembles final results happens in Python ints, which are
exact at any size; the compiled kernels elsewhere in the package work on int64
arrays with separately justified bounds.  WideInt in the type contracts below
means plain `int`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

# Below this, the cube-root-space algorithm is bypassed in favor of the oracle
# (its loop-bound simplifications are only analyzed for large n; the region
# below is exhaustively differential-tested instead).
FALLBACK_THRESHOLD = 100_000

# Largest n served by the compiled int64 kernels.  Intermediate per-entry
# partial sums in the small Mertens table are bounded by ~n*(ln(n)/2 + 2),
# which still clears int64 with >2x margin here.  Larger n (the CLI accepts up
# to MAX_N) runs through the exact pure-Python path.
FAST_PATH_MAX_N = 2 * 10**17

# Parse limit for the fixed-width configuration.
MAX_N = 10**19

WideInt = int


def isqrt(n: int) -> int:
    """Integer square root: the r with r*r <= n < (r+1)*(r+1)."""
    if n < 0:
        raise ValueError("isqrt requires n >= 0")
    return math.isqrt(n)


def floor_div(n: int, d: int) -> int:
    """Floor quotient n//d for n >= 0, d >= 1."""
    if d < 1:
        raise ValueError("floor_div requires d >= 1")
    if n < 0:
        raise ValueError("floor_div requires n >= 0")
    return n // d


@dataclass(frozen=True)
class TuningConfig:
    """Hyperbola split for one run: n, split point a, and b = n//a.

    Invariants: 1 <= b <= isqrt(n) <= a <= n, and a > isqrt(n) whenever
    n > FALLBACK_THRESHOLD.  use_oracle_fallback marks configs produced for n
    below the threshold, where the driver should dispatch to the oracle.
    """

    n: int
    a: int
    b: int
    use_oracle_fallback: bool = False

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ValueError("TuningConfig requires n >= 1")
        r = isqrt(self.n)
        if not (1 <= self.b <= r <= self.a <= self.n):
            raise ValueError(
                f"invalid split for n={self.n}: need 1 <= b <= {r} <= a <= n, "
                f"got a={self.a}, b={self.b}"
            )
        if self.b != self.n // self.a:
            raise ValueError(f"b must equal n//a = {self.n // self.a}, got {self.b}")
        if self.n > FALLBACK_THRESHOLD and self.a <= r:
            raise ValueError(f"a must exceed isqrt(n) = {r} for n above {FALLBACK_THRESHOLD}")


def make_config(n: int, a: int) -> TuningConfig:
    """Config with an explicit split point a (validated)."""
    return TuningConfig(n=n, a=a, b=n // a, use_oracle_fallback=n < FALLBACK_THRESHOLD)


def default_split(n: int, c: Fraction | int = 1) -> TuningConfig:
    """Tuned split a ~ c*(n/ln ln n)^(2/3), clamped into (isqrt(n), n].

    ln ln n is clamped below at 1 so small n cannot produce a non-positive or
    undefined scale; the coefficient only moves the Theta-constant, which is a
    free knob (default c = 1).
    """
    if n < 1:
        raise ValueError("default_split requires n >= 1")
    if c <= 0:
        raise ValueError("default_split requires c > 0")
    if n == 1:
        return TuningConfig(n=1, a=1, b=1, use_oracle_fallback=True)
    loglog = math.log(math.log(n)) if n >= 3 else 1.0
    base = (n / max(1.0, loglog)) ** (2.0 / 3.0)
    a = round(float(c) * base)
    a = min(max(a, isqrt(n) + 1), n)
    return TuningConfig(n=n, a=a, b=n // a, use_oracle_fallback=n < FALLBACK_THRESHOLD)


def triangular(v: int) -> int:
    """v-th triangular number v*(v+1)//2, exact."""
    return v * (v + 1) // 2


def iter_chunks(lo: int, hi: int, size: int):
    """Yield (start, stop) pairs covering [lo, hi] in runs of at most size."""
    if size < 1:
        raise ValueError("chunk size must be positive")
    start = lo
    while start <= hi:
        stop = min(start + size - 1, hi)
        yield start, stop
        start = stop + 1
