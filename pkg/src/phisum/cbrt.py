"""Cube-root-space totient summation.

Same hyperbola identity as the baseline (Phi = X + Y - Z), but the sqrt-sized
Mertens tables are replaced by a size-b sliding window of recent Mertens
values whose contributions to the small table M' are flushed in bulk:

* phase 1 (x <= isqrt(n)): stream mu; store M(x) in the window; subtract the
  direct mu(x)*floor terms from M'; at hyperbola checkpoints x = gamma seed
  M'_d with the recursion head; flush the window whenever b | x.
* phase 2 (isqrt(n) < x <= a): store M at the quotient checkpoints x = chi
  into the window (descending consecutive indexes) and flush when full.
* phase 3 (y = b..1): finish each M'_y with the few remaining small reads,
  accumulating Y.

Long-lived state is M' (b entries), the window (b entries), and the sieve
working set; nothing else grows with n.

The default path runs compiled int64 kernels (n <= FAST_PATH_MAX_N); the
instrumented path is pure Python over stream_mobius with every structural
assertion live, and is also the exact fallback for larger n.
"""

import time
from dataclasses import dataclass, field

import numpy as np

from . import _kernels
from .baseline import PhiResult, _decode_acc128
from .core import (
    FAST_PATH_MAX_N,
    default_split,
    isqrt,
    iter_chunks,
    triangular,
)
from .sieve import default_block_size, primes_upto, stream_mobius

# The instrumented path runs the visitor loop in Python; above this it would
# take hours, and every instrumentation test lives far below it.
INSTRUMENT_MAX_N = 10**8

# Accumulator bound asserted in checked mode: |X| <= ~0.83*n^2 < 2^126 for
# every n the fixed-width kernels accept.
_ACC_BOUND = 1 << 126

# x-range per compiled-kernel call (progress granularity only)
_CHUNK = 4 << 20


@dataclass
class SmallTable:
    """M' accumulator, index y in [1, b] (slot 0 unused)."""

    values: list

    @property
    def width(self):
        return len(self.values) - 1


@dataclass
class MertensBatch:
    """Sliding window of recent Mertens values.

    Phase one: holds M(x) for x in [base, B] with base = A.
    Phase two: holds M(n//s) for s in [B, A], stored in descending s order,
    so entry for s sits at values[A - s]; base = B.
    """

    phase: str
    base: int | None = None
    values: list = field(default_factory=list)
    A: int | None = None
    B: int | None = None

    def store_phase1(self, x, m, width):
        if self.values and x != self.B + 1:
            raise AssertionError("phase-1 window not contiguous")
        if not self.values:
            self.base = x if self.base is None else self.base
            self.A = self.base
        self.values.append(m)
        self.B = x
        if len(self.values) > width:
            raise AssertionError("phase-1 window exceeded b entries")

    def store_phase2(self, v, m, width):
        if not self.values:
            self.A = v
        elif v != self.B - 1:
            raise AssertionError("phase-2 checkpoint indexes not consecutive")
        self.values.append(m)
        self.B = v
        self.base = v
        if len(self.values) > width:
            raise AssertionError("phase-2 window exceeded b entries")

    def clear(self):
        self.values.clear()
        self.base = None
        self.A = None
        self.B = None


@dataclass
class PhaseState:
    """Scalar state threaded through the streaming pass."""

    x: int = 0
    v: int = 0
    m: int = 0
    s: int = 0
    chi: int = 0
    d: int = 0
    gamma: int = 0
    X: int = 0
    Y: int = 0
    Z: int = 0


@dataclass
class ContributionLog:
    """Instrumentation: every windowed Mertens subtraction, as (target, k)
    meaning M(k) was subtracted from M'_target, plus peak window fill."""

    phase1_events: list = field(default_factory=list)
    phase2_events: list = field(default_factory=list)
    phase3_events: list = field(default_factory=list)
    batch_peak: int = 0


def phase1_accumulate(state, x, mu, m_prime, n, b):
    """Direct mu-term subtractions plus hyperbola-head checkpoints."""
    if x > 1 and mu != 0:
        v = state.v
        for y in range(1, min(b, v // x) + 1):
            m_prime.values[y] -= mu * (v // y)
    while state.d >= 1 and x == state.gamma:
        # at x = isqrt(n//d) the running m is M(x): seed the recursion head
        m_prime.values[state.d] += 1 - (n // state.d) + state.m * x
        state.d -= 1
        state.gamma = isqrt(n // state.d) if state.d >= 1 else 0


def phase1_flush(batch, n, b, m_prime, log=None):
    """Subtract every in-window M(n//(l*t)) from M'_t and clear the window."""
    if not batch.values:
        batch.clear()
        return
    low = batch.A
    top = batch.B
    for t in range(1, b + 1):
        q = n // t
        lmin = 1 + q // (top + 1)
        if lmin < 2:
            raise AssertionError("flush quotient l below 2")
        lmax = min(isqrt(q), q // low)
        row = m_prime.values[t]
        for l in range(lmin, lmax + 1):
            k = q // l
            if not low <= k <= top:
                raise AssertionError("flush read outside the live window")
            row -= batch.values[k - low]
            if log is not None:
                log.phase1_events.append((t, k))
        m_prime.values[t] = row
    if log is not None:
        _check_table_bound(m_prime)
    batch.clear()


def phase2_collect(state, x, batch, n, a, b, width, log=None):
    """At checkpoint x = chi, store m = M(x) at index v (unless v = b)."""
    v = state.v
    if v != b:
        batch.store_phase2(v, state.m, width)
        if log is not None and len(batch.values) > log.batch_peak:
            log.batch_peak = len(batch.values)
    state.s -= 1
    state.chi = n // state.s if state.s >= 1 else a + 1


def phase2_flush(batch, n, b, m_prime, rt, log=None):
    """Subtract the window's M(n//(t*y)) contributions from M'_y and clear."""
    if not batch.values:
        batch.clear()
        return
    first, last = batch.A, batch.B
    for y in range(1, b + 1):
        t = max(2, last // y)
        t_hi = first // y + 1
        if t > t_hi:
            continue
        q = n // y
        rq = isqrt(q)
        row = m_prime.values[y]
        while t <= t_hi:
            if t > rq:
                break
            k = q // t
            if k <= rt:
                break
            sp = n // k
            if last <= sp <= first:
                if sp != t * y:
                    raise AssertionError("canonical window index mismatch")
                row -= batch.values[first - sp]
                if log is not None:
                    log.phase2_events.append((y, k))
            t += 1
        m_prime.values[y] = row
    if log is not None:
        _check_table_bound(m_prime)
    batch.clear()


def phase3_finalize(m_prime, n, b, state, log=None):
    """Complete M'_y = M(n//y) for y = b..1 and accumulate Y."""
    big_y = 0
    for y in range(b, 0, -1):
        v = n // y
        m = 0
        t = 2
        while True:
            k = v // t
            if k * (b + 1) <= n:
                break
            idx = n // k
            if idx > b:
                raise AssertionError("phase-3 read beyond the small table")
            m -= m_prime.values[idx]
            if log is not None:
                log.phase3_events.append((y, k))
            t += 1
        m_prime.values[y] += m
        big_y += y * m_prime.values[y]
    state.Y = big_y
    return big_y


def _check_table_bound(m_prime):
    # checked mode: partial sums must stay clear of int64, mirroring the
    # bound the compiled path relies on
    for val in m_prime.values:
        if not -_ACC_BOUND <= val <= _ACC_BOUND:
            raise AssertionError("small-table partial sum out of bounds")


def _phi_space_saving_pure(n, config, instrument):
    t0 = time.perf_counter()
    a, b = config.a, config.b
    rt = isqrt(n)
    if a <= rt:
        raise ValueError("space-saving run requires a > isqrt(n)")
    m_prime = SmallTable(values=[0] * (b + 1))
    batch = MertensBatch(phase="one", base=1)
    log = ContributionLog() if instrument else None
    st = PhaseState(d=b, gamma=isqrt(n // b))
    st.s = rt
    if n // st.s == st.s:
        st.s -= 1
    st.chi = n // st.s if st.s >= 1 else a + 1

    def visit(x, mu):
        st.x = x
        st.v = n // x
        st.m += mu
        if mu != 0:
            st.X += mu * triangular(st.v)
            if instrument and not -_ACC_BOUND <= st.X <= _ACC_BOUND:
                raise AssertionError("X accumulator out of bounds")
        if x <= rt:
            batch.store_phase1(x, st.m, b)
            if log is not None and len(batch.values) > log.batch_peak:
                log.batch_peak = len(batch.values)
            phase1_accumulate(st, x, mu, m_prime, n, b)
            if x % b == 0 or x == rt:
                phase1_flush(batch, n, b, m_prime, log=log)
                batch.base = x + 1
                if x == rt:
                    batch.phase = "two"
                    batch.base = None
        else:
            if x == st.chi:
                phase2_collect(st, x, batch, n, a, b, b, log=log)
            if len(batch.values) >= b or x == a:
                phase2_flush(batch, n, b, m_prime, rt, log=log)
        if x == a:
            st.Z = st.m * triangular(b)

    stats = stream_mobius(a, visitor=visit)
    t1 = time.perf_counter()
    phase3_finalize(m_prime, n, b, st, log=log)
    value = st.X + st.Y - st.Z
    t2 = time.perf_counter()

    times = {"init": 0.0, "phase1": t1 - t0, "phase2": 0.0, "phase3": t2 - t1}
    peaks = {
        "m_prime": b,
        "batch": log.batch_peak if log is not None else b,
        "sieve": stats.peak_elements,
    }
    instr = None
    if instrument:
        instr = {
            "log": log,
            "mertens_final": {y: m_prime.values[y] for y in range(1, b + 1)},
            "x_value": st.X,
            "z_value": st.Z,
            "batch_peak": log.batch_peak,
            "sieve_prime_count": stats.prime_count,
            "sieve_block": stats.block_size,
        }
    return PhiResult(n=n, value=value, config=config, phase_times=times,
                     peak_elements=peaks, instrumentation=instr)


def _phi_space_saving_fast(n, config, progress):
    t0 = time.perf_counter()
    a, b = config.a, config.b
    rt = isqrt(n)
    if a <= rt:
        raise ValueError("space-saving run requires a > isqrt(n)")
    table = primes_upto(isqrt(a))
    block = min(default_block_size(a), a)
    scratch = np.empty(block, dtype=np.int64)
    m_prime = np.zeros(b + 1, dtype=np.int64)
    window = np.zeros(b, dtype=np.int64)
    m = 0
    d = b
    gamma = isqrt(n // b)
    base = 1
    xhi = np.uint64(0)
    xlo = np.uint64(0)
    t1 = time.perf_counter()

    for lo, hi in iter_chunks(1, rt, _CHUNK):
        # rewrap the 128-bit accumulator limbs: numba returns them as Python
        # ints, which must go back in as uint64, not int64
        m, d, gamma, base, xhi, xlo = _kernels.ss_phase1_chunk(
            n, b, rt, lo, hi, table.primes, scratch, m_prime, window,
            m, d, gamma, base, np.uint64(xhi), np.uint64(xlo))
        if progress is not None:
            progress("phase1", hi, a)
    t2 = time.perf_counter()

    s = rt
    if n // s == s:
        s -= 1
    chi = n // s if s >= 1 else a + 1
    b_a = 0
    b_b = 0
    count = 0
    for lo, hi in iter_chunks(rt + 1, a, _CHUNK):
        m, s, chi, b_a, b_b, count, xhi, xlo, err = _kernels.ss_phase2_chunk(
            n, a, b, rt, lo, hi, table.primes, scratch, m_prime, window,
            m, s, chi, b_a, b_b, count, np.uint64(xhi), np.uint64(xlo))
        if err:
            raise AssertionError("phase-2 checkpoint indexes not consecutive")
        if progress is not None:
            progress("phase2", hi, a)
    big_z = m * triangular(b)
    t3 = time.perf_counter()

    _kernels.ss_phase3(n, b, n // (b + 1), m_prime)
    finals = m_prime[1 : b + 1].tolist()
    big_y = sum(y * my for y, my in enumerate(finals, start=1))
    big_x = _decode_acc128(xhi, xlo)
    value = big_x + big_y - big_z
    t4 = time.perf_counter()

    times = {"init": t1 - t0, "phase1": t2 - t1, "phase2": t3 - t2, "phase3": t4 - t3}
    peaks = {"m_prime": b, "batch": b, "sieve": len(table) + block}
    return PhiResult(n=n, value=value, config=config,
                     phase_times=times, peak_elements=peaks)


def phi_space_saving(n, config=None, instrument=False, progress=None):
    """Phi(n) in cube-root space.

    instrument=True switches to the checked pure-Python path (n <= 10^8) and
    attaches the contribution log, final Mertens values, and accumulator
    snapshots to the result.  n beyond the fixed-width kernel range also runs
    the pure path, which is exact at any size.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if config is None:
        config = default_split(n)
    if config.n != n:
        raise ValueError("config was built for a different n")
    if n == 1:
        times = {"init": 0.0, "phase1": 0.0, "phase2": 0.0, "phase3": 0.0}
        instr = {"log": ContributionLog(), "mertens_final": {1: 1},
                 "x_value": 1, "z_value": 1, "batch_peak": 0,
                 "sieve_prime_count": 0, "sieve_block": 0} if instrument else None
        return PhiResult(n=1, value=1, config=config, phase_times=times,
                         peak_elements={"m_prime": 1, "batch": 0, "sieve": 0},
                         instrumentation=instr)
    if instrument:
        if n > INSTRUMENT_MAX_N:
            raise ValueError("instrumented runs support n <= %d" % INSTRUMENT_MAX_N)
        return _phi_space_saving_pure(n, config, instrument=True)
    if n > FAST_PATH_MAX_N:
        return _phi_space_saving_pure(n, config, instrument=False)
    return _phi_space_saving_fast(n, config, progress)
