"""Compiled int64 inner loops (numba).

Everything here assumes n <= FAST_PATH_MAX_N (2e17) so that all intermediate
values provably fit int64, except the triangular-number accumulator which is
kept as an explicit 128-bit two's-complement (hi, lo) uint64 pair: single terms
v*(v+1)/2 reach ~n^2/2 and the running sum is bounded by ~0.83*n^2 < 2^126.

The sieve writes into one reusable int64 scratch block holding, per slot, the
signed product of the distinct primes removed so far (0 once a square divisor
is seen).  mu is decoded on the fly: a residual prime > sqrt(hi) exists iff
|product| != x, flipping the sign once more.
"""

import numpy as np
from numba import njit

U32 = np.uint64(32)
MASK32 = np.uint64(0xFFFFFFFF)
U0 = np.uint64(0)
U1 = np.uint64(1)


@njit(cache=True, inline="always")
def _isqrt64(v):
    # exact integer sqrt for 0 <= v <= 2e17; float drift is corrected and the
    # (r+1)^2 probe cannot overflow at this cap
    if v <= 0:
        return np.int64(0)
    r = np.int64(np.sqrt(np.float64(v)))
    while r > 0 and r * r > v:
        r -= 1
    while (r + 1) * (r + 1) <= v:
        r += 1
    return r


@njit(cache=True, inline="always")
def _tri_split(v):
    # v*(v+1)/2 as a 128-bit (hi, lo) uint64 pair, via 32-bit limbs
    if v & 1:
        p = np.uint64(v)
        q = np.uint64(v + 1) >> U1
    else:
        p = np.uint64(v) >> U1
        q = np.uint64(v + 1)
    p0 = p & MASK32
    p1 = p >> U32
    q0 = q & MASK32
    q1 = q >> U32
    ll = p0 * q0
    m1 = p1 * q0 + (ll >> U32)
    m2 = p0 * q1 + (m1 & MASK32)
    hi = p1 * q1 + (m1 >> U32) + (m2 >> U32)
    lo = (m2 << U32) | (ll & MASK32)
    return hi, lo


@njit(cache=True, inline="always")
def _acc_add(xhi, xlo, thi, tlo):
    lo = xlo + tlo
    if lo < tlo:
        return xhi + thi + U1, lo
    return xhi + thi, lo


@njit(cache=True, inline="always")
def _acc_sub(xhi, xlo, thi, tlo):
    lo = xlo - tlo
    if xlo < tlo:
        return xhi - thi - U1, lo
    return xhi - thi, lo


@njit(cache=True, inline="always")
def _mu_from(w, x):
    # decode mu from the signed removed-prime product
    if w == 0:
        return 0
    if w > 0:
        return 1 if w == x else -1
    return -1 if -w == x else 1


@njit(cache=True)
def mobius_block(lo, hi, primes, w):
    """Fill w[0:hi-lo+1] with signed removed-prime products for [lo, hi]."""
    for i in range(hi - lo + 1):
        w[i] = 1
    for idx in range(primes.size):
        p = primes[idx]
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        for j in range(start, hi + 1, p):
            w[j - lo] = -w[j - lo] * p
        pp = p * p
        start = ((lo + pp - 1) // pp) * pp
        for j in range(start, hi + 1, pp):
            w[j - lo] = 0


@njit(cache=True)
def mu_extract(w, lo, count, out):
    """Decode mu values from a sieved scratch block into int8."""
    for i in range(count):
        out[i] = _mu_from(w[i], lo + i)


@njit(cache=True)
def totient_block(lo, hi, primes, phi, prod):
    """phi[i] = totient(lo+i) for the block; returns the block's phi sum."""
    ln = hi - lo + 1
    for i in range(ln):
        phi[i] = lo + i
        prod[i] = 1
    for idx in range(primes.size):
        p = primes[idx]
        if p * p > hi:
            break
        start = ((lo + p - 1) // p) * p
        for j in range(start, hi + 1, p):
            i = j - lo
            phi[i] -= phi[i] // p
            prod[i] *= p
        pp = p * p
        while pp <= hi:
            start = ((lo + pp - 1) // pp) * pp
            for j in range(start, hi + 1, pp):
                prod[j - lo] *= p
            pp *= p
    total = np.int64(0)
    for i in range(ln):
        x = lo + i
        if prod[i] != x:
            # residual prime > sqrt(hi), present exactly once
            r = x // prod[i]
            phi[i] -= phi[i] // r
        total += phi[i]
    return total


# ---------------------------------------------------------------------------
# Mertens-first algorithm (sqrt-space baseline)
# ---------------------------------------------------------------------------

@njit(cache=True)
def mf_phase1_chunk(n, lo, hi, primes, w, mu_t, m_t, m, xhi, xlo):
    """x in [lo, hi] <= isqrt(n): store mu and M tables, accumulate X."""
    blo = lo
    bs = w.size
    while blo <= hi:
        bhi = blo + bs - 1
        if bhi > hi:
            bhi = hi
        mobius_block(blo, bhi, primes, w)
        for x in range(blo, bhi + 1):
            mu = _mu_from(w[x - blo], x)
            mu_t[x] = mu
            m += mu
            if mu != 0:
                thi, tlo = _tri_split(n // x)
                if mu > 0:
                    xhi, xlo = _acc_add(xhi, xlo, thi, tlo)
                else:
                    xhi, xlo = _acc_sub(xhi, xlo, thi, tlo)
            m_t[x] = m
        blo = bhi + 1
    return m, xhi, xlo


@njit(cache=True)
def mf_phase2_chunk(n, a, b, lo, hi, primes, w, mp, m, s, chi, xhi, xlo):
    """x in [lo, hi] in (isqrt(n), a]: checkpoint M' saves, X accumulation."""
    blo = lo
    bs = w.size
    while blo <= hi:
        bhi = blo + bs - 1
        if bhi > hi:
            bhi = hi
        mobius_block(blo, bhi, primes, w)
        for x in range(blo, bhi + 1):
            mu = _mu_from(w[x - blo], x)
            m += mu
            if mu != 0:
                thi, tlo = _tri_split(n // x)
                if mu > 0:
                    xhi, xlo = _acc_add(xhi, xlo, thi, tlo)
                else:
                    xhi, xlo = _acc_sub(xhi, xlo, thi, tlo)
            if x == chi:
                v = n // x
                if v != b:
                    mp[v] = m
                s -= 1
                if s >= 1:
                    chi = n // s
                else:
                    chi = a + 1
        blo = bhi + 1
    return m, s, chi, xhi, xlo


@njit(cache=True)
def mf_phase3(n, b, rt, mu_t, m_t, mp):
    """Hyperbola recursion for M(n//y), y = b..1, into mp[1..b]."""
    for y in range(b, 0, -1):
        v = n // y
        r = _isqrt64(v)
        m = 1 - v + r * m_t[r]
        for x in range(2, r + 1):
            k = v // x
            if k <= rt:
                m -= mu_t[x] * k + m_t[k]
            else:
                m -= mu_t[x] * k + mp[n // k]
        mp[y] = m


# ---------------------------------------------------------------------------
# Space-saving algorithm (cbrt-space)
# ---------------------------------------------------------------------------

@njit(cache=True)
def ss_phase1_chunk(n, b, rt, lo, hi, primes, w, mp, batch,
                    m, d, gamma, base, xhi, xlo):
    """x in [lo, hi] <= isqrt(n): window stores, direct mu subtractions,
    hyperbola checkpoints, and batched window flushes at b | x or x = isqrt(n).
    """
    blo = lo
    bs = w.size
    while blo <= hi:
        bhi = blo + bs - 1
        if bhi > hi:
            bhi = hi
        mobius_block(blo, bhi, primes, w)
        for x in range(blo, bhi + 1):
            mu = _mu_from(w[x - blo], x)
            m += mu
            if mu != 0:
                v = n // x
                thi, tlo = _tri_split(v)
                if mu > 0:
                    xhi, xlo = _acc_add(xhi, xlo, thi, tlo)
                else:
                    xhi, xlo = _acc_sub(xhi, xlo, thi, tlo)
                if x > 1:
                    ymax = v // x
                    if ymax > b:
                        ymax = b
                    if mu > 0:
                        for y in range(1, ymax + 1):
                            mp[y] -= v // y
                    else:
                        for y in range(1, ymax + 1):
                            mp[y] += v // y
            batch[x - base] = m
            while d >= 1 and x == gamma:
                # head of the recursion for target d: m here is M(isqrt(n//d))
                mp[d] += 1 - (n // d) + m * x
                d -= 1
                if d >= 1:
                    gamma = _isqrt64(n // d)
                else:
                    gamma = 0
            if x % b == 0 or x == rt:
                # flush window [base, x]: quotients n//(l*t) land in-window by
                # the l bounds; l >= 2 holds because b*(isqrt(n)+1) <= n
                for t in range(1, b + 1):
                    q = n // t
                    lmin = 1 + q // (x + 1)
                    lmax = _isqrt64(q)
                    l2 = q // base
                    if l2 < lmax:
                        lmax = l2
                    acc = np.int64(0)
                    for l in range(lmin, lmax + 1):
                        acc += batch[q // l - base]
                    mp[t] -= acc
                base = x + 1
        blo = bhi + 1
    return m, d, gamma, base, xhi, xlo


@njit(cache=True)
def ss_phase2_chunk(n, a, b, rt, lo, hi, primes, w, mp, batch,
                    m, s, chi, b_a, b_b, count, xhi, xlo):
    """x in [lo, hi] in (isqrt(n), a]: batched checkpoint collection and
    window flushes when the batch fills or x = a.  Returns err != 0 if the
    stored checkpoint indexes ever fail to descend by exactly 1.
    """
    err = np.int64(0)
    blo = lo
    bs = w.size
    while blo <= hi:
        bhi = blo + bs - 1
        if bhi > hi:
            bhi = hi
        mobius_block(blo, bhi, primes, w)
        for x in range(blo, bhi + 1):
            mu = _mu_from(w[x - blo], x)
            m += mu
            if mu != 0:
                thi, tlo = _tri_split(n // x)
                if mu > 0:
                    xhi, xlo = _acc_add(xhi, xlo, thi, tlo)
                else:
                    xhi, xlo = _acc_sub(xhi, xlo, thi, tlo)
            if x == chi:
                v = n // x
                if v != b:
                    if count == 0:
                        b_a = v
                    elif v != b_b - 1:
                        err = 1
                    batch[count] = m
                    count += 1
                    b_b = v
                s -= 1
                if s >= 1:
                    chi = n // s
                else:
                    chi = a + 1
            if (count >= b or x == a) and count > 0:
                # flush window [b_b, b_a]; batch[i] holds M at index b_a - i
                for y in range(1, b + 1):
                    t = b_b // y
                    if t < 2:
                        t = 2
                    t_hi = b_a // y + 1
                    if t > t_hi:
                        continue
                    q = n // y
                    rny = _isqrt64(q)
                    acc = np.int64(0)
                    while t <= t_hi:
                        if t > rny:
                            break
                        k = q // t
                        if k <= rt:
                            break
                        sp = n // k
                        if b_b <= sp <= b_a:
                            acc += batch[b_a - sp]
                        t += 1
                    mp[y] -= acc
                count = 0
                b_a = 0
                b_b = 0
        blo = bhi + 1
    return m, s, chi, b_a, b_b, count, xhi, xlo, err


@njit(cache=True)
def ss_phase3(n, b, kmax, mp):
    """Final assembly of mp[y] = M(n//y) for y = b..1.

    kmax = n // (b+1); the break test k <= kmax is the overflow-safe integer
    form of k*(b+1) <= n.
    """
    for y in range(b, 0, -1):
        v = n // y
        m = np.int64(0)
        t = 2
        while True:
            k = v // t
            if k <= kmax:
                break
            m -= mp[n // k]
            t += 1
        mp[y] += m
