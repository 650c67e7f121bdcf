"""Timing harness: closed-form powers against repeated multiplication."""

from __future__ import annotations

import math
import statistics
import time
from dataclasses import dataclass, field

import numpy as np

from .sp2 import Mat2, boost, multiply, rel_diff, rotation
from .wigner import closed_power, naive_power, wigner_decompose

DEVIATION_BOUND = 1e-8
O1_RATIO_BOUND = 3.0
NAIVE_CAP = 10**7


@dataclass
class BenchRow:
    n: int
    closed_ns: float
    naive_ns: float
    naive_extrapolated: bool
    rel_deviation: float | None


@dataclass
class BenchReport:
    seed: int
    matrix: Mat2
    rows: list[BenchRow] = field(default_factory=list)

    @property
    def max_rel_deviation(self) -> float:
        devs = [r.rel_deviation for r in self.rows if r.rel_deviation is not None]
        return max(devs) if devs else 0.0

    @property
    def deviation_ok(self) -> bool:
        return self.max_rel_deviation <= DEVIATION_BOUND

    @property
    def closed_ratio(self) -> float:
        times = [r.closed_ns for r in self.rows]
        return max(times) / min(times)

    @property
    def o1_ok(self) -> bool:
        return self.closed_ratio <= O1_RATIO_BOUND


def elliptic_workload(seed: int, max_lam: float = 0.5) -> Mat2:
    """Random elliptic ``rotation(a) @ boost(l) @ rotation(b)``, reproducible from ``seed``."""
    rng = np.random.default_rng(seed)
    while True:
        a, b = rng.uniform(-math.pi, math.pi, size=2)
        lam = rng.uniform(0.0, max_lam)
        m = multiply(multiply(rotation(a), boost(lam)), rotation(b))
        # keep clear of the band edge so roundoff growth stays modest
        if abs(m.half_trace) < 0.9:
            return m


def _median_ns(fn, repeats: int, inner: int) -> float:
    samples = []
    for _ in range(repeats):
        t0 = time.perf_counter_ns()
        for _ in range(inner):
            fn()
        samples.append((time.perf_counter_ns() - t0) / inner)
    return statistics.median(samples)


def run_bench(
    ns: list[int],
    seed: int = 0,
    repeats: int = 5,
    naive_cap: int = NAIVE_CAP,
    timings: bool = True,
) -> BenchReport:
    """Median per-call times for both methods at each ``N``.

    Naive timings above ``naive_cap`` are extrapolated linearly from the
    largest measured ``N`` and flagged; their deviation is not measured.
    """
    if not ns:
        raise ValueError("bench needs at least one N")
    if any(n < 0 for n in ns):
        raise ValueError("N values must be non-negative")
    m = elliptic_workload(seed)
    dec = wigner_decompose(m)
    report = BenchReport(seed=seed, matrix=m)
    measured: list[tuple[int, float]] = []
    for n in ns:
        closed = dec.power(n)
        closed_ns = naive_ns = 0.0
        if timings:
            closed_ns = _median_ns(lambda: closed_power(m, n), repeats, inner=200)
        if n <= naive_cap:
            naive = naive_power(m, n)
            dev = rel_diff(closed, naive)
            if timings:
                naive_ns = _median_ns(lambda: naive_power(m, n), repeats, inner=max(1, 20000 // max(n, 1)))
                measured.append((n, naive_ns))
            report.rows.append(BenchRow(n, closed_ns, naive_ns, False, dev))
        else:
            report.rows.append(BenchRow(n, closed_ns, 0.0, True, None))
    if timings and measured:
        ref_n, ref_ns = max(measured)
        for row in report.rows:
            if row.naive_extrapolated:
                row.naive_ns = ref_ns * row.n / max(ref_n, 1)
    return report


def report_to_dict(report: BenchReport, timings: bool = True) -> dict:
    rows = []
    for r in report.rows:
        d = {"N": r.n, "naive_extrapolated": r.naive_extrapolated, "rel_deviation": r.rel_deviation}
        if timings:
            d["closed_ns"] = r.closed_ns
            d["naive_ns"] = r.naive_ns
        rows.append(d)
    out = {
        "command": "bench",
        "seed": report.seed,
        "matrix": list(report.matrix.entries()),
        "rows": rows,
        "max_rel_deviation": report.max_rel_deviation,
        "deviation_ok": report.deviation_ok,
    }
    if timings:
        out["closed_ratio"] = report.closed_ratio
        out["o1_ok"] = report.o1_ok
    return out
