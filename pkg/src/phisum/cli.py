"""Command-line driver.

Two invocation shapes:

    phisum <n> [--alg oracle|mertens-first|space-saving|auto] [--c <rational>]
               [--a <int>] [--json] [--verify <int>] [--progress] [--instrument]
    phisum selftest [--limit <int>] [--random <int>] [--seed <int>]

Exit codes: 0 success, 1 invalid arguments or guard violations (one-line
diagnostic on stderr), 2 verification mismatch.  Progress lines go to stderr
at most once per second and never into the JSON payload.  Selftest output is
deterministic (no timings), so repeated seeded runs are byte-identical.
"""

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from fractions import Fraction

from .baseline import (
    phi_mertens_first,
    phi_oracle_at_points,
    phi_oracle_prefix,
    phi_oracle_report,
)
from .cbrt import phi_space_saving
from .core import FALLBACK_THRESHOLD, MAX_N, default_split, make_config
from .mertens import ORACLE_MAX_N

ALGORITHMS = ("oracle", "mertens-first", "space-saving", "auto")

SELFTEST_LIMIT_MAX = 10**6
SELFTEST_RANDOM_RANGE = (10**5, 10**9)


@dataclass(frozen=True)
class RunRequest:
    n: int
    algorithm: str = "auto"
    c: Fraction = Fraction(1)
    a_override: int | None = None
    output: str = "text"
    verify: int | None = None
    progress: bool = False
    instrument: bool = False


@dataclass(frozen=True)
class RunReport:
    request: RunRequest
    algorithm: str
    a: int | None
    b: int | None
    result: str
    phase_times_ms: dict
    peak_elements: dict
    wall_time_ms: float
    verified: bool | None
    rss_kb: int | None


def _rss_kb():
    try:
        import resource
    except ImportError:
        return None
    return int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)


def _progress_printer():
    last = [0.0]

    def callback(phase, done, total):
        now = time.monotonic()
        if now - last[0] >= 1.0:
            last[0] = now
            print("phisum: %s x=%d/%d" % (phase, done, total), file=sys.stderr)

    return callback


def run(request):
    """Execute one computation per the request; raises ValueError on guard
    violations (bad n, bad split, oracle range, instrument range)."""
    n = request.n
    if not 1 <= n <= MAX_N:
        raise ValueError("n must be in [1, 10^19]")
    if request.c <= 0:
        raise ValueError("c must be a positive rational")
    algorithm = request.algorithm
    if algorithm == "auto":
        algorithm = "oracle" if n < FALLBACK_THRESHOLD else "space-saving"
    if algorithm == "oracle":
        if request.a_override is not None:
            raise ValueError("--a only applies to the table algorithms")
        if request.instrument:
            raise ValueError("--instrument only applies to the table algorithms")
        if n > ORACLE_MAX_N:
            raise ValueError("oracle supports n <= 10^9; pick another --alg")

    progress = _progress_printer() if request.progress else None
    t0 = time.perf_counter()
    if algorithm == "oracle":
        result = phi_oracle_report(n)
        a = b = None
    else:
        if request.a_override is not None:
            config = make_config(n, request.a_override)
        else:
            config = default_split(n, request.c)
        if algorithm == "mertens-first":
            result = phi_mertens_first(n, config, instrument=request.instrument,
                                       progress=progress)
        else:
            result = phi_space_saving(n, config, instrument=request.instrument,
                                      progress=progress)
        a, b = config.a, config.b
    wall_ms = (time.perf_counter() - t0) * 1000.0

    verified = None
    if request.verify is not None:
        verified = result.value == request.verify
    times_ms = {k: round(result.phase_times.get(k, 0.0) * 1000.0, 3)
                for k in ("init", "phase1", "phase2", "phase3")}
    peaks = {k: int(result.peak_elements.get(k, 0))
             for k in ("m_prime", "batch", "sieve")}
    return RunReport(request=request, algorithm=algorithm, a=a, b=b,
                     result=str(result.value), phase_times_ms=times_ms,
                     peak_elements=peaks, wall_time_ms=round(wall_ms, 3),
                     verified=verified, rss_kb=_rss_kb())


def _report_json(report):
    payload = {
        "n": report.request.n,
        "algorithm": report.algorithm,
        "a": report.a,
        "b": report.b,
        "c": str(report.request.c),
        "phi": report.result,
        "phase_times_ms": report.phase_times_ms,
        "peak_elements": report.peak_elements,
        "wall_time_ms": report.wall_time_ms,
        "verified": report.verified,
    }
    return json.dumps(payload)


def _report_text(report):
    req = report.request
    lines = []
    ab = "" if report.a is None else " a=%d b=%d" % (report.a, report.b)
    lines.append("phisum: n=%d algorithm=%s%s c=%s"
                 % (req.n, report.algorithm, ab, req.c))
    lines.append("phi(%d) = %s" % (req.n, report.result))
    lines.append("phase_times_ms: " + " ".join(
        "%s=%.3f" % (k, report.phase_times_ms[k])
        for k in ("init", "phase1", "phase2", "phase3")))
    lines.append("peak_elements: " + " ".join(
        "%s=%d" % (k, report.peak_elements[k])
        for k in ("m_prime", "batch", "sieve")))
    lines.append("wall_time_ms: %.3f" % report.wall_time_ms)
    if report.rss_kb is not None:
        lines.append("rss_kb: %d (informational)" % report.rss_kb)
    if report.verified is not None:
        lines.append("verified: %s" % ("true" if report.verified else "false"))
    return "\n".join(lines)


def selftest(limit=20000, random_count=0, seed=0):
    """Differential triple-equivalence suite; returns the process exit code.

    Runs the real table algorithms (no oracle fallback) against the streamed
    totient oracle, exhaustively on [1, limit] and on random_count seeded
    draws from [10^5, 10^9].  Output is deterministic byte-for-byte.
    """
    if not 1 <= limit <= SELFTEST_LIMIT_MAX:
        print("selftest: error: limit must be in [1, 10^6]")
        return 1
    if random_count < 0:
        print("selftest: error: random count must be >= 0")
        return 1

    prefix = phi_oracle_prefix(limit)
    for n in range(1, limit + 1):
        expected = int(prefix[n])
        got_mf = phi_mertens_first(n).value
        got_ss = phi_space_saving(n).value
        if got_mf != expected or got_ss != expected:
            print("selftest: FAIL n=%d oracle=%d mertens-first=%d space-saving=%d"
                  % (n, expected, got_mf, got_ss))
            return 1
    print("selftest: exhaustive [1, %d] ok" % limit)

    lo, hi = SELFTEST_RANDOM_RANGE
    rng = random.Random(seed)
    draws = [rng.randrange(lo, hi + 1) for _ in range(random_count)]
    if draws:
        expected_at = phi_oracle_at_points(draws)
        for n in draws:
            expected = expected_at[n]
            got_mf = phi_mertens_first(n).value
            got_ss = phi_space_saving(n).value
            if got_mf != expected or got_ss != expected:
                print("selftest: FAIL n=%d oracle=%d mertens-first=%d space-saving=%d"
                      % (n, expected, got_mf, got_ss))
                return 1
    print("selftest: random %d draws in [%d, %d] seed=%d ok"
          % (random_count, lo, hi, seed))
    print("selftest: PASS")
    return 0


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on bad usage by default; the CLI contract reserves 2
    # for verification mismatch, so argument errors exit 1
    def error(self, message):
        print("%s: error: %s" % (self.prog, message), file=sys.stderr)
        raise SystemExit(1)


def _run_parser():
    p = _Parser(prog="phisum",
                description="Totient-summatory function Phi(n), exactly.")
    p.add_argument("n", type=int, help="argument of Phi, decimal, up to 10^19")
    p.add_argument("--alg", choices=ALGORITHMS, default="auto",
                   help="algorithm (auto = oracle below %d, else space-saving)"
                        % FALLBACK_THRESHOLD)
    p.add_argument("--c", type=Fraction, default=Fraction(1), metavar="RATIONAL",
                   help="tuning coefficient for the split point (e.g. 2/3)")
    p.add_argument("--a", type=int, default=None, metavar="INT",
                   help="explicit split point (overrides --c)")
    p.add_argument("--json", action="store_true", help="machine-readable output")
    p.add_argument("--verify", type=int, default=None, metavar="INT",
                   help="expected value; exit 2 on mismatch")
    p.add_argument("--progress", action="store_true",
                   help="progress to stderr, at most once per second")
    p.add_argument("--instrument", action="store_true",
                   help="run the checked instrumented path (table algorithms)")
    return p


def _selftest_parser():
    p = _Parser(prog="phisum selftest",
                description="Differential self-test: oracle vs both algorithms.")
    p.add_argument("--limit", type=int, default=20000,
                   help="exhaustive upper bound (default 20000, max 10^6)")
    p.add_argument("--random", type=int, default=0, metavar="COUNT",
                   help="extra seeded random draws from [10^5, 10^9]")
    p.add_argument("--seed", type=int, default=0, help="PRNG seed")
    return p


def main(argv=None):
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    if argv and argv[0] == "selftest":
        args = _selftest_parser().parse_args(argv[1:])
        return selftest(limit=args.limit, random_count=args.random, seed=args.seed)

    args = _run_parser().parse_args(argv)
    request = RunRequest(n=args.n, algorithm=args.alg, c=args.c,
                         a_override=args.a,
                         output="json" if args.json else "text",
                         verify=args.verify, progress=args.progress,
                         instrument=args.instrument)
    try:
        report = run(request)
    except ValueError as exc:
        print("phisum: error: %s" % exc, file=sys.stderr)
        return 1
    if request.output == "json":
        print(_report_json(report))
    else:
        print(_report_text(report))
    if report.verified is False:
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
