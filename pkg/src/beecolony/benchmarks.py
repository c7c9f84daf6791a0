"""Continuous test functions and a repeated-trial statistics harness."""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .colony import Bounds, ColonyConfig, EvaluationError, RunResult, run

__all__ = [
    "BenchmarkFunction",
    "TrialStats",
    "FUNCTIONS",
    "get_function",
    "bent_cigar",
    "sum_diff_power",
    "rosenbrock",
    "rastrigin",
    "step",
    "run_campaign",
    "stats_csv",
]

_TWO_PI = 2.0 * math.pi


def _vector(x, min_dims: int = 1) -> np.ndarray:
    if not (type(x) is np.ndarray and x.dtype == np.float64):
        x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < min_dims:
        raise ValueError(f"expected a 1-D vector with at least {min_dims} element(s), got shape {x.shape}")
    return x


def bent_cigar(x) -> float:
    x = _vector(x)
    tail = x[1:]
    return float(x[0] * x[0] + 1e6 * (tail @ tail))


def sum_diff_power(x) -> float:
    """``sum |x_i|^(i+1)`` with 1-based ``i``; overflow yields ``inf``."""
    x = _vector(x)
    with np.errstate(over="ignore"):
        return float(np.sum(np.abs(x) ** np.arange(2, x.size + 2)))


def rosenbrock(x) -> float:
    # D = 1 has an empty sum and evaluates to 0.
    x = _vector(x)
    head, tail = x[:-1], x[1:]
    a = head * head - tail
    b = head - 1.0
    return float(100.0 * (a @ a) + b @ b)


def rastrigin(x) -> float:
    x = _vector(x)
    return float(x @ x - 10.0 * np.sum(np.cos(_TWO_PI * x)) + 10.0 * x.size)


def step(x) -> float:
    # Shifted sphere, exactly as tabulated; not the floor-based step function.
    y = _vector(x) + 0.5
    return float(y @ y)


@dataclass(frozen=True)
class BenchmarkFunction:
    name: str
    evaluate: Callable[[np.ndarray], float]
    low: float
    high: float
    min_dims: int = 1
    known_optimum: float = 0.0
    optimum_coordinate: float = 0.0

    def __call__(self, x) -> float:
        return self.evaluate(x)

    def search_range(self, dims: int) -> Bounds:
        if dims < self.min_dims:
            raise ValueError(f"{self.name} needs at least {self.min_dims} dimension(s)")
        return Bounds.uniform(self.low, self.high, dims)

    def optimum_point(self, dims: int) -> np.ndarray:
        return np.full(dims, self.optimum_coordinate)


FUNCTIONS: dict[str, BenchmarkFunction] = {
    f.name: f
    for f in (
        BenchmarkFunction("bent_cigar", bent_cigar, -100.0, 100.0),
        BenchmarkFunction("sum_diff_power", sum_diff_power, -100.0, 100.0),
        BenchmarkFunction("rosenbrock", rosenbrock, -100.0, 100.0, optimum_coordinate=1.0),
        BenchmarkFunction("rastrigin", rastrigin, -500.0, 500.0),
        BenchmarkFunction("step", step, -100.0, 100.0, optimum_coordinate=-0.5),
    )
}


def get_function(name: str) -> BenchmarkFunction:
    try:
        return FUNCTIONS[name.strip().lower()]
    except KeyError:
        raise KeyError(f"unknown function {name!r}; valid names: {', '.join(FUNCTIONS)}") from None


@dataclass
class TrialStats:
    """Aggregates over independent trials (population variance of the bests)."""

    function: str
    strategy: str
    dims: int
    bests: list[float]
    runtimes: list[float]
    results: list[RunResult] = field(default_factory=list, repr=False)

    @property
    def trials(self) -> int:
        return len(self.bests)

    @property
    def average_best(self) -> float:
        return float(np.mean(self.bests))

    @property
    def best_best(self) -> float:
        return float(np.min(self.bests))

    @property
    def variance_best(self) -> float:
        return float(np.var(self.bests))

    @property
    def average_runtime(self) -> float:
        return float(np.mean(self.runtimes))

    @property
    def shortest_runtime(self) -> float:
        return float(np.min(self.runtimes))


def run_campaign(
    function: "BenchmarkFunction | str",
    dims: int,
    config: ColonyConfig,
    trials: int,
    seed: Optional[int] = None,
    concurrent: int = 1,
) -> TrialStats:
    """Run ``trials`` independent optimizations; trial ``t`` uses seed ``seed + t``.

    ``seed`` defaults to ``config.seed``. With ``concurrent > 1`` trials run in
    a thread pool; results are identical because each trial is seeded alone.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    fn = get_function(function) if isinstance(function, str) else function
    base = config.seed if seed is None else seed
    bounds = fn.search_range(dims)

    def one(t: int) -> RunResult:
        cfg = replace(config, dims=dims, seed=base + t)
        try:
            return run(fn.evaluate, bounds, cfg)
        except EvaluationError as exc:
            raise EvaluationError(f"trial {t} of {fn.name}: {exc}", exc.index) from exc

    if concurrent > 1:
        with ThreadPoolExecutor(max_workers=concurrent) as pool:
            results = list(pool.map(one, range(trials)))
    else:
        results = [one(t) for t in range(trials)]
    return TrialStats(
        function=fn.name,
        strategy=config.strategy.label,
        dims=dims,
        bests=[r.best_value for r in results],
        runtimes=[r.wall_time for r in results],
        results=results,
    )


STATS_COLUMNS = [
    "function",
    "strategy",
    "dims",
    "trials",
    "average_runtime_s",
    "average_best",
    "best_best",
    "shortest_runtime_s",
    "variance_best",
]


def stats_csv(rows: Sequence[TrialStats]) -> str:
    """CSV mirroring the published results tables.

    Numbers use ``%.6e``; ``variance_best`` is the population variance (divide
    by the number of trials).
    """
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(STATS_COLUMNS)
    for s in rows:
        writer.writerow(
            [
                s.function,
                s.strategy,
                s.dims,
                s.trials,
                f"{s.average_runtime:.6e}",
                f"{s.average_best:.6e}",
                f"{s.best_best:.6e}",
                f"{s.shortest_runtime:.6e}",
                f"{s.variance_best:.6e}",
            ]
        )
    return buf.getvalue()
