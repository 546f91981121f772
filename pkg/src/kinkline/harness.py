"""Benchmark harness: bracket generation, rate metric, experiment runners.

Everything here is deterministic given a seed: per-trial random streams
are derived from (seed, stream tag, function index, trial index), so runs
can be parallelized or re-ordered without changing a single output byte.
"""

from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import IO, Sequence

import numpy as np

from .baselines import (
    INVPHI,
    BaselineConfig,
    brent_minimize,
    golden_section_minimize,
    mifflin_strodiot_minimize,
)
from .brackets import (
    BracketError,
    Bracket3,
    ExtendedBracket5,
    ExtendedBracket7,
    inner3,
    inner5,
    make_extended5,
    make_extended7,
)
from .dupm import DupmConfig, dupm_minimize
from .eupm import eupm_minimize, gap_apply_binary, gap_inner
from .result import SolverResult, Status
from .supm import SupmConfig, supm_minimize
from .testfuncs import CountingOracle, TestFunction, get_function, list_functions

_BENCH_STREAM = 1
_SEQEXP_STREAM = 2
_ONCE_STREAM = 3

#: Algorithm specs in the order the benchmark tables use.
PAPER_ALGORITHMS = (
    "supm:0",
    "supm:0.1",
    "supm:1",
    "supm:10",
    "eupm",
    "dupm",
    "brent",
    "mifflin",
)

_COLUMN_NAMES = {
    "supm:0": "0",
    "supm:0.1": "0.1",
    "supm:1": "1",
    "supm:10": "10",
    "eupm": "EUPM",
    "dupm": "DUPM",
    "brent": "Brent",
    "mifflin": "Mifflin",
    "golden": "Golden",
}

SUITES = {
    "su": ("SU1", "SU2", "SU3", "SU4", "SU5", "SU6", "SU7"),
    "nu": ("NU1", "NU2", "NU3", "NU4", "NU5"),
    "sm": ("SM1", "SM2", "SM3", "SM4", "SM5", "SM6", "SM7"),
}
SUITES["all"] = SUITES["su"] + SUITES["nu"] + SUITES["sm"]


class ResampleLimitExceededError(RuntimeError):
    """Bracket generation kept failing; the function/domain pair does not
    admit the sampling scheme (e.g. the minimum sits on the boundary)."""


def column_name(spec: str) -> str:
    return _COLUMN_NAMES.get(spec, spec)


def _function_index(fid: str) -> int:
    for i, f in enumerate(list_functions()):
        if f.fid == fid:
            return i
    raise KeyError(fid)


def generate_bracket(
    f: TestFunction, rng: np.random.Generator, max_attempts: int = 1000
) -> ExtendedBracket7:
    """Random seven-point bracket by the two-cluster sampling scheme.

    Four points are drawn uniformly from the first fifth of the domain and
    four from its upper half; the sample with the smallest value becomes
    the incumbent and the three nearest remaining points on each side
    become its flanks (the eighth point is dropped).  The centre condition
    holds by construction; the full draw is repeated whenever the incumbent
    has fewer than three points on either side.
    """
    a, b = f.domain
    span = b - a
    for _ in range(max_attempts):
        pts = np.concatenate(
            [
                rng.uniform(a, a + span / 5.0, 4),
                rng.uniform(b - span / 2.0, b, 4),
            ]
        )
        vals = [f.evaluator(float(x)) for x in pts]
        k = int(np.argmin(vals))
        xm, fm = float(pts[k]), vals[k]
        rest = sorted(
            ((float(x), v) for j, (x, v) in enumerate(zip(pts, vals)) if j != k),
            key=lambda p: p[0],
        )
        lefts = [p for p in rest if p[0] < xm]
        rights = [p for p in rest if p[0] > xm]
        if len(lefts) < 3 or len(rights) < 3:
            continue
        chosen = lefts[-3:] + [(xm, fm)] + rights[:3]
        try:
            return make_extended7([p[0] for p in chosen], [p[1] for p in chosen])
        except BracketError:
            continue
    raise ResampleLimitExceededError(
        f"no valid bracket for {f.fid} in {max_attempts} attempts"
    )


def convergence_rate(result: SolverResult) -> float:
    """Per-iteration geometric-mean reduction of the inner length.

    ``(d_final / d_initial) ** (1/n)`` for a converged run of n >= 1
    iterations, 0 for immediate convergence, and infinity for a run that
    hit its budget (or stalled): a single failure is not averaged away.
    This is the only reading of an average rate in (0, 1) consistent with
    golden section measuring its known 0.618 reduction ratio.
    """
    if result.status is not Status.CONVERGED:
        return math.inf
    if result.iterations == 0:
        return 0.0
    d0 = result.trace[0][1]
    df = result.trace[-1][1]
    return (df / d0) ** (1.0 / result.iterations)


def parse_algorithm(spec: str) -> tuple[str, float]:
    """Split an algorithm spec into (kind, alpha); alpha only for supm."""
    s = spec.strip().lower()
    if s.startswith("supm"):
        rest = s[4:].lstrip(":")
        return "supm", float(rest) if rest else 0.0
    if s in ("eupm", "dupm", "brent", "golden", "mifflin"):
        return s, 0.0
    raise ValueError(f"unknown algorithm spec {spec!r}")


def run_algorithm(
    spec: str,
    oracle,
    bracket: ExtendedBracket7,
    eps: float,
    budget: int,
    record_brackets: bool = False,
) -> SolverResult:
    """Run one algorithm from a shared seven-point bracket.

    Each solver consumes the part of the bracket it is defined on: all
    seven points for the underestimator solvers, the inner five for the
    extremal and Mifflin-Strodiot ones, the inner triple for golden
    section and Brent.
    """
    kind, alpha = parse_algorithm(spec)
    if kind == "supm":
        cfg = SupmConfig(alpha=alpha, eps=eps, budget=budget)
        return supm_minimize(oracle, bracket, cfg, record_brackets)
    if kind == "dupm":
        return dupm_minimize(
            oracle, bracket, DupmConfig(eps=eps, budget=budget), record_brackets
        )
    if kind == "eupm":
        return eupm_minimize(
            oracle, inner5(bracket), eps=eps, budget=budget, record_brackets=record_brackets
        )
    bcfg = BaselineConfig(eps=eps, budget=budget)
    if kind == "brent":
        return brent_minimize(oracle, inner3(bracket), bcfg, record_brackets)
    if kind == "golden":
        return golden_section_minimize(oracle, inner3(bracket), bcfg, record_brackets)
    return mifflin_strodiot_minimize(oracle, inner5(bracket), bcfg, record_brackets)


@dataclass(frozen=True)
class TrialConfig:
    functions: tuple[str, ...]
    algorithms: tuple[str, ...] = PAPER_ALGORITHMS
    trials: int = 1000
    eps: float = 1e-8
    budget: int = 500
    seed: int = 0

    def __post_init__(self):
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.eps > 0.0:
            raise ValueError("eps must be > 0")
        if self.budget < 1:
            raise ValueError("budget must be >= 1")
        for spec in self.algorithms:
            parse_algorithm(spec)
        for fid in self.functions:
            get_function(fid)


@dataclass(frozen=True)
class CellStats:
    """One (function, algorithm) table cell.

    ``mean_rate`` is the arithmetic mean of the per-trial rates, infinity
    as soon as any trial failed to converge.
    """

    mean_rate: float
    trials: int
    failures: int


@dataclass
class BenchmarkReport:
    config: TrialConfig
    cells: dict[tuple[str, str], CellStats]

    def cell(self, fid: str, spec: str) -> CellStats:
        return self.cells[(fid, spec)]


def _bench_function(cfg: TrialConfig, fid: str) -> dict[tuple[str, str], CellStats]:
    func = get_function(fid)
    fidx = _function_index(fid)
    rates: dict[str, list[float]] = {spec: [] for spec in cfg.algorithms}
    for t in range(cfg.trials):
        rng = np.random.default_rng([cfg.seed, _BENCH_STREAM, fidx, t])
        bracket = generate_bracket(func, rng)
        for spec in cfg.algorithms:
            oracle = CountingOracle(func.evaluator, func.domain)
            res = run_algorithm(spec, oracle, bracket, cfg.eps, cfg.budget)
            rates[spec].append(convergence_rate(res))
    out = {}
    for spec, rs in rates.items():
        failures = sum(1 for r in rs if math.isinf(r))
        mean = math.inf if failures else sum(rs) / len(rs)
        out[(fid, spec)] = CellStats(mean, len(rs), failures)
    return out


def run_benchmark(cfg: TrialConfig, jobs: int = 1) -> BenchmarkReport:
    """Run every configured algorithm on every function.

    Within a trial all algorithms start from the same bracket but get
    independent oracles and counters.  With ``jobs > 1`` the per-function
    rows run in separate processes; outputs are identical either way.
    """
    cells: dict[tuple[str, str], CellStats] = {}
    if jobs > 1 and len(cfg.functions) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for part in pool.map(_bench_function, itertools.repeat(cfg), cfg.functions):
                cells.update(part)
    else:
        for fid in cfg.functions:
            cells.update(_bench_function(cfg, fid))
    return BenchmarkReport(cfg, cells)


def _format_rate(r: float) -> str:
    return "inf" if math.isinf(r) else f"{r:.6f}"


def _row_label(fid: str, latex: bool) -> str:
    if not latex:
        return fid
    return f"$f^{{{fid[:2]}}}_{fid[2:]}$"


def write_benchmark_csv(
    report: BenchmarkReport, out: IO[str], latex_labels: bool = False
) -> None:
    """Table of mean rates, one row per function, one column per algorithm.

    The first line is a ``#`` comment recording the run settings, so every
    CSV carries its own provenance.
    """
    cfg = report.config
    out.write(
        f"# kinkline bench seed={cfg.seed} trials={cfg.trials} "
        f"eps={cfg.eps:g} budget={cfg.budget}\n"
    )
    out.write("Functions," + ",".join(column_name(s) for s in cfg.algorithms) + "\n")
    for fid in cfg.functions:
        row = [_row_label(fid, latex_labels)]
        row += [_format_rate(report.cell(fid, s).mean_rate) for s in cfg.algorithms]
        out.write(",".join(row) + "\n")


def sample_simplex(rng: np.random.Generator, n: int) -> np.ndarray:
    """Uniform samples from the positive unit-sum 4-simplex (n, 4)."""
    e = rng.standard_exponential((n, 4))
    return e / e.sum(axis=1, keepdims=True)


def run_sequence_experiment(
    bits: int = 10, samples: int = 1000, seed: int = 0
) -> list[tuple[str, int, float, float]]:
    """Mean oracle-free contraction rate for every improving/non-improving
    bit pattern of the given length.

    Each pattern drives the five-point update machinery from ``samples``
    random unit-sum gap vectors (1 = the trial improved, 0 = it did not;
    the side is decided by the step offset's sign as in a real run).  The
    returned rows are (pattern, bits, mean rate, golden reference rate),
    slowest patterns first.  The golden reference is its constant
    reduction ratio, which no bit pattern can alter.
    """
    if bits < 1:
        raise ValueError("bits must be >= 1")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rows = []
    for idx, pattern in enumerate(itertools.product((1, 0), repeat=bits)):
        rng = np.random.default_rng([seed, _SEQEXP_STREAM, idx])
        p = sample_simplex(rng, samples)
        d0 = gap_inner(p)
        for bit in pattern:
            p = gap_apply_binary(p, bit == 1)
        rates = (gap_inner(p) / d0) ** (1.0 / bits)
        rows.append(("".join(map(str, pattern)), bits, float(rates.mean()), INVPHI))
    rows.sort(key=lambda r: (-r[2], r[0]))
    return rows


def write_sequence_csv(
    rows: list[tuple[str, int, float, float]], out: IO[str], seed: int, samples: int
) -> None:
    out.write(f"# kinkline seqexp seed={seed} samples={samples}\n")
    out.write("sequence,bits,eupm_rate,golden_rate\n")
    for seq, bits, er, gr in rows:
        out.write(f"{seq},{bits},{er:.6f},{gr:.6f}\n")


def minimize_once(
    fid: str,
    algorithm: str,
    seed: int = 0,
    eps: float = 1e-8,
    budget: int = 500,
    bracket_points: Sequence[float] | None = None,
) -> tuple[SolverResult, ExtendedBracket7]:
    """One seeded run of one algorithm on one function.

    Without ``bracket_points`` the starting bracket comes from the random
    generator; with them, the seven given abscissae are sorted ascending,
    evaluated, and validated.  Injected points may extend beyond the
    function's nominal domain (the oracle's domain check widens to their
    hull); the values must still satisfy the centre condition.
    """
    func = get_function(fid)
    fidx = _function_index(func.fid)
    a, b = func.domain
    if bracket_points is None:
        rng = np.random.default_rng([seed, _ONCE_STREAM, fidx])
        bracket = generate_bracket(func, rng)
    else:
        pts = sorted(float(x) for x in bracket_points)
        if len(pts) != 7:
            raise ValueError(f"need exactly 7 bracket points, got {len(pts)}")
        bracket = make_extended7(pts, [func.evaluator(x) for x in pts])
        a, b = min(a, pts[0]), max(b, pts[-1])
    oracle = CountingOracle(func.evaluator, (a, b))
    result = run_algorithm(
        algorithm, oracle, bracket, eps, budget, record_brackets=True
    )
    return result, bracket


def _triple(b) -> tuple[float, float, float]:
    if isinstance(b, Bracket3):
        return b.xl, b.xm, b.xr
    return b.xl1, b.xm, b.xr1


def write_trace_csv(result: SolverResult, out: IO[str], header: str = "") -> None:
    """Per-iteration positions and progress of a recorded run."""
    if result.bracket_trace is None:
        raise ValueError("run the solver with record_brackets=True to dump a trace")
    if header:
        out.write(f"# {header}\n")
    out.write("iteration,xl1,xm,xr1,d,fm\n")
    for (i, d, fm), br in zip(result.trace, result.bracket_trace):
        xl1, xm, xr1 = _triple(br)
        out.write(f"{i},{xl1!r},{xm!r},{xr1!r},{d!r},{fm!r}\n")


# ---------------------------------------------------------------------------
# Random brackets for verification and property tests.
# ---------------------------------------------------------------------------


def random_bracket5(
    rng: np.random.Generator,
    gap_range: tuple[float, float] = (0.1, 2.0),
    centre_range: tuple[float, float] = (-10.0, 10.0),
) -> ExtendedBracket5:
    """Five-point bracket with uniform gaps and arbitrary cached values
    satisfying the centre condition."""
    g = rng.uniform(*gap_range, 4)
    xm = rng.uniform(*centre_range)
    x = (xm - g[1] - g[0], xm - g[1], xm, xm + g[2], xm + g[2] + g[3])
    fm = rng.uniform(-1.0, 1.0)
    fv = (
        rng.uniform(-1.0, 1.0),
        fm + rng.uniform(0.0, 1.0),
        fm,
        fm + rng.uniform(0.0, 1.0),
        rng.uniform(-1.0, 1.0),
    )
    return make_extended5(x, fv)


def random_bracket7(
    rng: np.random.Generator,
    gap_range: tuple[float, float] = (0.1, 2.0),
    centre_range: tuple[float, float] = (-10.0, 10.0),
    value_range: tuple[float, float] = (0.0, 1.0),
) -> ExtendedBracket7:
    """Seven-point bracket with uniform gaps and uniform cached values,
    centre value pushed below its neighbours."""
    g = rng.uniform(*gap_range, 6)
    xm = rng.uniform(*centre_range)
    x = (
        xm - g[2] - g[1] - g[0],
        xm - g[2] - g[1],
        xm - g[2],
        xm,
        xm + g[3],
        xm + g[3] + g[4],
        xm + g[3] + g[4] + g[5],
    )
    fv = list(rng.uniform(*value_range, 7))
    width = value_range[1] - value_range[0]
    fv[3] = min(fv[2], fv[4]) - rng.uniform(0.0, width / 2.0)
    return make_extended7(x, tuple(fv))
