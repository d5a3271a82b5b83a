"""Reference totient-summatory algorithms.

Two correctness anchors for the cube-root-space algorithm:

* phi_oracle: a segmented totient sieve summed directly, exact to 10^9.
* phi_mertens_first: the sqrt-space hyperbola algorithm.  It sieves mu once
  up to the split point a, keeping mu and Mertens tables to isqrt(n), saves
  Mertens values at the quotient checkpoints x = chi beyond isqrt(n), and
  finishes with the hyperbola recursion for M(n//y), y = b..1.

The final identity is Phi(n) = X + Y - Z with
X = sum_{x<=a} mu(x)*T(n//x), Y = sum_{y<=b} y*M(n//y), Z = M(a)*T(b),
where T is the triangular number.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .core import (
    FAST_PATH_MAX_N,
    TuningConfig,
    WideInt,
    default_split,
    isqrt,
    iter_chunks,
    triangular,
)
from .mertens import ORACLE_MAX_N
from .sieve import default_block_size, primes_upto

# x-range handled per compiled-kernel call; only affects progress granularity.
CHUNK = 4 << 20


@dataclass(frozen=True)
class PhiResult:
    """One totient-summatory computation with its reporting metadata."""

    n: int
    value: WideInt
    config: TuningConfig
    phase_times: dict = field(default_factory=dict)
    peak_elements: dict = field(default_factory=dict)
    instrumentation: dict | None = None


def phi_oracle_at_points(points):
    """Phi at several checkpoints from one streamed totient-sieve pass.

    Returns {point: Phi(point)}; cost is one pass to max(points).
    """
    pts = sorted({int(p) for p in points})
    if not pts:
        return {}
    if pts[0] < 1:
        raise ValueError("points must be positive")
    n = pts[-1]
    if n > ORACLE_MAX_N:
        raise ValueError("phi_oracle supports n <= 10^9")
    table = primes_upto(isqrt(n))
    block = default_block_size(n)
    width = min(block, n)
    phi = np.empty(width, dtype=np.int64)
    prod = np.empty(width, dtype=np.int64)
    out = {}
    total = 0
    nxt = 0
    for lo, hi in iter_chunks(1, n, block):
        count = hi - lo + 1
        block_sum = _kernels.totient_block(lo, hi, table.primes, phi[:count], prod[:count])
        if nxt < len(pts) and pts[nxt] <= hi:
            partial = np.cumsum(phi[:count], dtype=np.int64)
            while nxt < len(pts) and pts[nxt] <= hi:
                out[pts[nxt]] = total + int(partial[pts[nxt] - lo])
                nxt += 1
        total += int(block_sum)
    return out


def phi_oracle(n):
    """Phi(n) by summing a segmented totient sieve; desk-scale guard 10^9."""
    if n < 1:
        raise ValueError("n must be positive")
    return phi_oracle_at_points([n])[n]


def phi_oracle_prefix(limit):
    """Phi(k) for every k <= limit as an int64 array (index 0 unused)."""
    if not 1 <= limit <= 10**7:
        raise ValueError("phi_oracle_prefix supports limit <= 10^7")
    table = primes_upto(isqrt(limit))
    block = default_block_size(limit)
    width = min(block, limit)
    phi = np.empty(width, dtype=np.int64)
    prod = np.empty(width, dtype=np.int64)
    out = np.zeros(limit + 1, dtype=np.int64)
    running = 0
    for lo, hi in iter_chunks(1, limit, block):
        count = hi - lo + 1
        _kernels.totient_block(lo, hi, table.primes, phi[:count], prod[:count])
        np.cumsum(phi[:count], dtype=np.int64, out=out[lo : hi + 1])
        out[lo : hi + 1] += running
        running = int(out[hi])
    return out


def phi_oracle_report(n):
    """phi_oracle packaged as a PhiResult for uniform reporting.

    The oracle has no hyperbola split, so config is None and the whole
    streamed pass is reported as phase1.
    """
    t0 = time.perf_counter()
    value = phi_oracle(n)
    t1 = time.perf_counter()
    block = min(default_block_size(n), n)
    peaks = {
        "m_prime": 0,
        "batch": 0,
        # totient sieving keeps two block-sized scratch arrays live
        "sieve": len(primes_upto(isqrt(n))) + 2 * block,
    }
    times = {"init": 0.0, "phase1": t1 - t0, "phase2": 0.0, "phase3": 0.0}
    return PhiResult(n=n, value=value, config=None,
                     phase_times=times, peak_elements=peaks)


def _decode_acc128(hi, lo):
    # two's-complement decode of the (hi, lo) uint64 accumulator pair
    value = (int(hi) << 64) | int(lo)
    if value >= 1 << 127:
        value -= 1 << 128
    return value


def phi_mertens_first(n, config=None, instrument=False, progress=None):
    """Phi(n) via the sqrt-space hyperbola algorithm, exact.

    With instrument=True the result carries the final per-index Mertens
    values {y: M(n//y)} for consistency checks.  progress, when given, is
    called as progress(phase, x_done, x_total) after each compiled chunk.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if n > FAST_PATH_MAX_N:
        raise ValueError("phi_mertens_first supports n <= %d" % FAST_PATH_MAX_N)
    t0 = time.perf_counter()
    if config is None:
        config = default_split(n)
    if config.n != n:
        raise ValueError("config was built for a different n")
    if n == 1:
        times = {"init": 0.0, "phase1": 0.0, "phase2": 0.0, "phase3": 0.0}
        instr = {"mertens_final": {1: 1}} if instrument else None
        return PhiResult(n=1, value=1, config=config, phase_times=times,
                         peak_elements={"m_prime": 1, "batch": 0, "sieve": 0},
                         instrumentation=instr)

    a, b = config.a, config.b
    rt = isqrt(n)
    table = primes_upto(isqrt(a))
    block = min(default_block_size(a), a)
    scratch = np.empty(block, dtype=np.int64)
    mu_small = np.zeros(rt + 1, dtype=np.int8)
    mertens_small = np.zeros(rt + 1, dtype=np.int64)
    m_prime = np.zeros(n // rt + 1, dtype=np.int64)
    m = 0
    xhi = np.uint64(0)
    xlo = np.uint64(0)
    t1 = time.perf_counter()

    for lo, hi in iter_chunks(1, rt, CHUNK):
        # numba unboxes returned uint64 limbs to Python ints; rewrap so the
        # dispatcher keeps typing them as uint64 instead of overflowing int64
        m, xhi, xlo = _kernels.mf_phase1_chunk(
            n, lo, hi, table.primes, scratch, mu_small, mertens_small,
            m, np.uint64(xhi), np.uint64(xlo))
        if progress is not None:
            progress("phase1", hi, a)
    t2 = time.perf_counter()

    s = rt
    if n // s == s:
        s -= 1
    chi = n // s if s >= 1 else a + 1
    for lo, hi in iter_chunks(rt + 1, a, CHUNK):
        m, s, chi, xhi, xlo = _kernels.mf_phase2_chunk(
            n, a, b, lo, hi, table.primes, scratch, m_prime,
            m, s, chi, np.uint64(xhi), np.uint64(xlo))
        if progress is not None:
            progress("phase2", hi, a)
    big_z = m * triangular(b)
    t3 = time.perf_counter()

    _kernels.mf_phase3(n, b, rt, mu_small, mertens_small, m_prime)
    finals = m_prime[1 : b + 1].tolist()
    big_y = sum(y * my for y, my in enumerate(finals, start=1))
    big_x = _decode_acc128(xhi, xlo)
    value = big_x + big_y - big_z
    t4 = time.perf_counter()

    times = {"init": t1 - t0, "phase1": t2 - t1, "phase2": t3 - t2, "phase3": t4 - t3}
    peaks = {
        "m_prime": n // rt,
        "batch": 0,
        "mobius_small": rt,
        "mertens_small": rt,
        "sieve": len(table) + block,
    }
    instr = None
    if instrument:
        instr = {
            "mertens_final": {y: my for y, my in enumerate(finals, start=1)},
            "x_value": big_x,
            "z_value": big_z,
        }
    return PhiResult(n=n, value=value, config=config, phase_times=times,
                     peak_elements=peaks, instrumentation=instr)
