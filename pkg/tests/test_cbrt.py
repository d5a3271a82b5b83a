"""Cube-root-space algorithm: phase operations and end-to-end behavior."""

from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phisum import (
    ContributionLog,
    MertensBatch,
    PhaseState,
    SmallTable,
    default_block_size,
    default_split,
    isqrt,
    make_config,
    mertens_oracle,
    mertens_table,
    mobius_prefix,
    phase1_accumulate,
    phase1_flush,
    phase2_collect,
    phase2_flush,
    phase3_finalize,
    phi_mertens_first,
    phi_oracle,
    phi_oracle_prefix,
    phi_space_saving,
    primes_upto,
    triangular,
)
from phisum.cbrt import INSTRUMENT_MAX_N, _phi_space_saving_pure

PHI_1E6 = 303963552392


def condition_events(n, b, rt):
    """Brute-force contribution classes: for every (y, t) with y <= b and
    2 <= t <= isqrt(n//y), the Mertens argument k = n//(t*y), split by where
    the algorithm must supply it (small table, phase-2 window, phase 3)."""
    small, windowed, residual = Counter(), Counter(), Counter()
    for y in range(1, b + 1):
        v = n // y
        for t in range(2, isqrt(v) + 1):
            k = v // t
            if k <= rt:
                small[(y, k)] += 1
            elif k * (b + 1) <= n:
                windowed[(y, k)] += 1
            else:
                residual[(y, k)] += 1
    return small, windowed, residual


class TestMertensBatch:
    def test_phase1_contiguity_enforced(self):
        batch = MertensBatch(phase="one")
        batch.store_phase1(5, -2, 4)
        with pytest.raises(AssertionError):
            batch.store_phase1(7, -2, 4)

    def test_phase1_width_enforced(self):
        batch = MertensBatch(phase="one")
        batch.store_phase1(1, 1, 2)
        batch.store_phase1(2, 0, 2)
        with pytest.raises(AssertionError):
            batch.store_phase1(3, -1, 2)

    def test_phase2_descending_consecutive_enforced(self):
        batch = MertensBatch(phase="two")
        batch.store_phase2(9, -2, 5)
        batch.store_phase2(8, -2, 5)
        with pytest.raises(AssertionError):
            batch.store_phase2(6, -1, 5)

    def test_clear(self):
        batch = MertensBatch(phase="two")
        batch.store_phase2(9, -2, 5)
        batch.clear()
        assert batch.values == [] and batch.A is None and batch.B is None


class TestPhase1Accumulate:
    def test_x_equals_one_is_noop(self):
        n, b = 100, 4
        mp = SmallTable(values=[0] * (b + 1))
        state = PhaseState(x=1, v=n, m=1, d=0, gamma=0)
        phase1_accumulate(state, 1, 1, mp, n, b)
        assert mp.values == [0] * (b + 1)

    def test_mu_zero_is_noop(self):
        n, b = 100, 4
        mp = SmallTable(values=[0] * (b + 1))
        state = PhaseState(x=4, v=25, m=0, d=0, gamma=0)
        phase1_accumulate(state, 4, 0, mp, n, b)
        assert mp.values == [0] * (b + 1)

    def test_direct_subtraction(self):
        n, b = 100, 4
        mp = SmallTable(values=[0] * (b + 1))
        state = PhaseState(x=2, v=50, m=0, d=0, gamma=0)
        phase1_accumulate(state, 2, -1, mp, n, b)
        # -mu(2)*(v//y) for y = 1..min(b, v//x)
        assert mp.values[1:] == [50, 25, 16, 12]

    def test_checkpoint_head_fires_repeatedly(self):
        # n=100, b=4: gamma hits x=5 for both d=4 and d=3
        n, b = 100, 4
        mp = SmallTable(values=[0] * (b + 1))
        state = PhaseState(x=5, v=20, m=-2, d=b, gamma=isqrt(n // b))
        assert state.gamma == 5
        phase1_accumulate(state, 5, -1, mp, n, b)
        direct = [20, 10, 6, 5]
        head4 = 1 - (100 // 4) + (-2) * 5
        head3 = 1 - (100 // 3) + (-2) * 5
        assert mp.values[1:] == [direct[0], direct[1], direct[2] + head3, direct[3] + head4]
        assert (state.d, state.gamma) == (2, 7)


class TestPhase1Flush:
    def build_batch(self, first_x, last_x, table):
        batch = MertensBatch(phase="one")
        for x in range(first_x, last_x + 1):
            batch.store_phase1(x, int(table.values[x]), last_x - first_x + 1)
        return batch

    def test_empty_l_range_at_small_x(self):
        # n=100, b=4, window M(1..4): at t=1 the l-range is [21, 10], empty;
        # every other t is empty as well, so the flush is a no-op
        n, b = 100, 4
        top, low = 4, 1
        assert 1 + (n // 1) // (top + 1) == 21
        assert min(isqrt(n // 1), (n // 1) // low) == 10
        mp = SmallTable(values=[0] * (b + 1))
        log = ContributionLog()
        batch = self.build_batch(1, 4, mertens_table(4))
        phase1_flush(batch, n, b, mp, log=log)
        assert log.phase1_events == []
        assert mp.values == [0] * (b + 1)
        assert batch.values == []

    def test_empty_batch_is_noop(self):
        mp = SmallTable(values=[0] * 5)
        phase1_flush(MertensBatch(phase="one"), 100, 4, mp)
        assert mp.values == [0] * 5

    def test_final_window_events(self):
        # n=100, b=4, final window M(9..10): exactly (1,10) and (2,10)
        n, b = 100, 4
        table = mertens_table(10)
        mp = SmallTable(values=[0] * (b + 1))
        log = ContributionLog()
        batch = self.build_batch(9, 10, table)
        phase1_flush(batch, n, b, mp, log=log)
        assert log.phase1_events == [(1, 10), (2, 10)]
        m10 = int(table.values[10])
        assert mp.values[1:] == [-m10, -m10, 0, 0]

    def test_all_flushes_cover_small_class(self):
        # drive phase 1 completely for one n and compare the union of flush
        # events against the brute-force k <= isqrt(n) class
        n = 10**4
        cfg = default_split(n)
        b, rt = cfg.b, isqrt(n)
        table = mertens_table(rt)
        mu = mobius_prefix(rt)
        mp = SmallTable(values=[0] * (b + 1))
        log = ContributionLog()
        batch = MertensBatch(phase="one", base=1)
        state = PhaseState(d=b, gamma=isqrt(n // b))
        for x in range(1, rt + 1):
            state.x, state.v, state.m = x, n // x, int(table.values[x])
            batch.store_phase1(x, state.m, b)
            phase1_accumulate(state, x, int(mu[x]), mp, n, b)
            if x % b == 0 or x == rt:
                phase1_flush(batch, n, b, mp, log=log)
                batch.base = x + 1
        small, _, _ = condition_events(n, b, rt)
        assert Counter(log.phase1_events) == small


class TestPhase2Collect:
    def test_gatekeeping_v_equals_b(self):
        # n=100, a=20: the checkpoint at x=20 has v=5=b and must not store
        n, a, b = 100, 20, 5
        state = PhaseState(x=20, v=5, m=mertens_oracle(20), s=5, chi=20)
        batch = MertensBatch(phase="two")
        phase2_collect(state, 20, batch, n, a, b, b)
        assert batch.values == []
        assert (state.s, state.chi) == (4, 25)

    def test_first_store_sets_both_ends(self):
        n, a, b = 100, 20, 5
        state = PhaseState(x=11, v=9, m=mertens_oracle(11), s=9, chi=11)
        batch = MertensBatch(phase="two")
        phase2_collect(state, 11, batch, n, a, b, b)
        assert batch.A == batch.B == 9
        assert batch.values == [mertens_oracle(11)]
        assert (state.s, state.chi) == (8, 12)

    def test_descending_consecutive_stores(self):
        n, a, b = 100, 20, 5
        state = PhaseState(x=11, v=9, m=mertens_oracle(11), s=9, chi=11)
        batch = MertensBatch(phase="two")
        phase2_collect(state, 11, batch, n, a, b, b)
        state.x, state.v, state.m = 12, 8, mertens_oracle(12)
        phase2_collect(state, 12, batch, n, a, b, b)
        assert (batch.A, batch.B) == (9, 8)
        assert batch.values == [mertens_oracle(11), mertens_oracle(12)]

    def test_window_contents_trace_1e6(self):
        # full phase-2 drive at n=10^6: every window holds M(n//s) for
        # consecutive descending s, and the flushed contributions equal the
        # brute-force phase-2 class
        n = 10**6
        cfg = default_split(n)
        a, b, rt = cfg.a, cfg.b, isqrt(n)
        table = mertens_table(a)
        mp = SmallTable(values=[0] * (b + 1))
        log = ContributionLog()
        batch = MertensBatch(phase="two")
        state = PhaseState(s=rt, chi=0)
        if n // state.s == state.s:
            state.s -= 1
        state.chi = n // state.s if state.s >= 1 else a + 1
        windows = 0

        def check_window_and_flush():
            nonlocal windows
            if batch.values:
                windows += 1
                for i, value in enumerate(batch.values):
                    s = batch.A - i
                    assert value == table.values[n // s], s
            phase2_flush(batch, n, b, mp, rt, log=log)

        while state.chi <= a:
            x = state.chi
            state.x, state.v, state.m = x, n // x, int(table.values[x])
            phase2_collect(state, x, batch, n, a, b, b, log=log)
            if len(batch.values) >= b:
                check_window_and_flush()
        check_window_and_flush()

        assert windows >= 2
        _, windowed, _ = condition_events(n, b, rt)
        assert Counter(log.phase2_events) == windowed
        assert log.batch_peak <= b
        # spot-check stored values against the streamed oracle
        assert mertens_oracle(n // 999) == table.values[n // 999]


class TestPhase2Flush:
    def build_window_100(self):
        # n=100, a=20, b=5: checkpoints store v=9,8,7,6; v=5=b is gatekept
        n, a, b = 100, 20, 5
        batch = MertensBatch(phase="two")
        state = PhaseState(s=9, chi=11)
        for x in (11, 12, 14, 16, 20):
            state.x, state.v, state.m = x, n // x, mertens_oracle(x)
            phase2_collect(state, x, batch, n, a, b, b)
        assert (batch.A, batch.B) == (9, 6)
        return batch

    def test_empty_batch_is_noop(self):
        mp = SmallTable(values=[0] * 6)
        phase2_flush(MertensBatch(phase="two"), 100, 5, mp, 10)
        assert mp.values == [0] * 6

    def test_events_match_brute_force(self):
        n, b, rt = 100, 5, 10
        batch = self.build_window_100()
        first, last = batch.A, batch.B
        expected = Counter()
        for y in range(1, b + 1):
            v = n // y
            for t in range(2, isqrt(v) + 1):
                k = v // t
                if k > rt and last <= n // k <= first:
                    expected[(y, k)] += 1
        mp = SmallTable(values=[0] * (b + 1))
        log = ContributionLog()
        phase2_flush(batch, n, b, mp, rt, log=log)
        assert Counter(log.phase2_events) == expected
        table = mertens_table(20)
        for y in range(1, b + 1):
            delta = -sum(int(table.values[k]) for (yy, k) in expected if yy == y)
            assert mp.values[y] == delta, y

    def test_y_with_small_quotient_gets_no_t(self):
        # A//y < 2 leaves no candidate t, so y=5 contributes nothing
        batch = self.build_window_100()
        assert batch.A // 5 < 2
        mp = SmallTable(values=[0] * 6)
        log = ContributionLog()
        phase2_flush(batch, 100, 5, mp, 10, log=log)
        assert all(y != 5 for y, _ in log.phase2_events)
        assert mp.values[5] == 0


class TestPhase3Finalize:
    def test_y_equals_b_breaks_immediately(self):
        # (v//2)*(b+1) <= n holds at y=b, so no subtraction can occur there
        for n in (100, 10**4, 10**5):
            res = phi_space_saving(n, instrument=True)
            b = res.config.b
            v = n // b
            assert (v // 2) * (b + 1) <= n
            log = res.instrumentation["log"]
            assert all(y != b for y, _ in log.phase3_events)

    def test_residual_class_and_y_accumulation(self):
        # seed M' with the recursion head, the direct mu terms, and the
        # small/windowed Mertens classes; phase 3 must then supply exactly
        # the residual class and finish every entry to the true M(n//y)
        n = 10**4
        cfg = default_split(n)
        b, rt = cfg.b, isqrt(n)
        table = mertens_table(n)
        mu = mobius_prefix(rt)
        small, windowed, residual = condition_events(n, b, rt)
        mp = SmallTable(values=[0] * (b + 1))
        for y in range(1, b + 1):
            v = n // y
            r = isqrt(v)
            total = 1 - v + r * int(table.values[r])
            total -= sum(int(mu[x]) * (v // x) for x in range(2, r + 1))
            for counter in (small, windowed):
                for (yy, k), count in counter.items():
                    if yy == y:
                        total -= count * int(table.values[k])
            mp.values[y] = total
        state = PhaseState()
        log = ContributionLog()
        big_y = phase3_finalize(mp, n, b, state, log=log)
        assert Counter(log.phase3_events) == residual
        for y in range(1, b + 1):
            assert mp.values[y] == table.values[n // y], y
        assert big_y == sum(y * int(table.values[n // y]) for y in range(1, b + 1))
        assert state.Y == big_y


class TestEndToEnd:
    def test_n_equals_one(self):
        res = phi_space_saving(1)
        assert res.value == 1
        instr = phi_space_saving(1, instrument=True).instrumentation
        assert instr["mertens_final"] == {1: 1}

    def test_exhaustive_small(self):
        prefix = phi_oracle_prefix(1500)
        for n in range(2, 1501):
            assert phi_space_saving(n).value == prefix[n], n

    def test_threshold_window_sample(self):
        lo, hi = 10**5, 10**5 + 500
        prefix = phi_oracle_prefix(hi)
        for n in range(lo, hi + 1):
            assert phi_space_saving(n).value == prefix[n], n

    def test_just_above_threshold_matches_oracle(self):
        assert phi_space_saving(10**5).value == phi_oracle(10**5)

    @given(st.integers(min_value=2, max_value=50000))
    @settings(deadline=None, derandomize=True, max_examples=60)
    def test_agrees_with_mertens_first(self, n):
        assert phi_space_saving(n).value == phi_mertens_first(n).value

    def test_pure_equals_fast(self):
        for n in (10**5 + 7, 10**6 + 1):
            cfg = default_split(n)
            pure = _phi_space_saving_pure(n, cfg, instrument=False)
            assert pure.value == phi_space_saving(n, cfg).value, n

    def test_instrumented_value_matches_fast(self):
        n = 10**5 + 3
        assert phi_space_saving(n, instrument=True).value == phi_space_saving(n).value

    def test_config_robustness(self):
        n = 10**6
        values = set()
        for a in (1001, 2000, 5254, 20000, 63095):
            values.add(phi_space_saving(n, make_config(n, a)).value)
        assert values == {PHI_1E6}

    def test_side_by_side_with_mertens_first(self):
        # n=100, a=22: both algorithms expose identical X, Z, and final
        # Mertens values under instrumentation
        cfg = make_config(100, 22)
        mf = phi_mertens_first(100, cfg, instrument=True)
        ss = phi_space_saving(100, cfg, instrument=True)
        assert ss.value == mf.value == 3044
        assert ss.instrumentation["mertens_final"] == mf.instrumentation["mertens_final"]
        assert ss.instrumentation["x_value"] == mf.instrumentation["x_value"]
        assert ss.instrumentation["z_value"] == mf.instrumentation["z_value"]

    def test_instrumented_mertens_finals(self):
        n = 10**5
        res = phi_space_saving(n, instrument=True)
        table = mertens_table(n)
        finals = res.instrumentation["mertens_final"]
        assert sorted(finals) == list(range(1, res.config.b + 1))
        for y, value in finals.items():
            assert value == table.values[n // y], y

    def test_instrumented_x_and_z(self):
        n = 10**6
        res = phi_space_saving(n, instrument=True)
        a, b = res.config.a, res.config.b
        mu = mobius_prefix(a)
        x_direct = sum(int(mu[x]) * triangular(n // x) for x in range(1, a + 1))
        z_direct = int(mertens_table(a).values[a]) * triangular(b)
        assert res.instrumentation["x_value"] == x_direct
        assert res.instrumentation["z_value"] == z_direct
        assert res.value == PHI_1E6

    def test_determinism(self):
        n = 10**5 + 11
        r1 = phi_space_saving(n, instrument=True)
        r2 = phi_space_saving(n, instrument=True)
        assert r1.value == r2.value
        l1, l2 = r1.instrumentation["log"], r2.instrumentation["log"]
        assert Counter(l1.phase1_events) == Counter(l2.phase1_events)
        assert Counter(l1.phase2_events) == Counter(l2.phase2_events)
        assert Counter(l1.phase3_events) == Counter(l2.phase3_events)
        assert l1.batch_peak == l2.batch_peak
        f1 = phi_space_saving(10**8 + 7)
        f2 = phi_space_saving(10**8 + 7)
        assert f1.value == f2.value

    def test_fast_peaks(self):
        n = 10**9
        res = phi_space_saving(n)
        a, b = res.config.a, res.config.b
        pi = len(primes_upto(isqrt(a)))
        block = min(default_block_size(a), a)
        assert res.peak_elements["m_prime"] == b
        assert res.peak_elements["batch"] == b
        assert res.peak_elements["sieve"] <= pi + block

    def test_instrumented_peaks(self):
        n = 10**5
        res = phi_space_saving(n, instrument=True)
        b = res.config.b
        assert res.peak_elements["m_prime"] == b
        assert res.peak_elements["batch"] <= b
        assert res.instrumentation["batch_peak"] <= b

    def test_guards(self):
        with pytest.raises(ValueError):
            phi_space_saving(0)
        with pytest.raises(ValueError):
            phi_space_saving(10**6, default_split(10**5))
        with pytest.raises(ValueError):
            phi_space_saving(INSTRUMENT_MAX_N + 1, instrument=True)
