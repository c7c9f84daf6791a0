"""Artificial bee colony optimizer and its multi-dimensional search variants.

Four search strategies share one engine:

* ``SINGLE_DIM`` (ABC): one random coordinate is perturbed per move.
* ``FULL_DIM`` (fdABC): the employed and onlooker bees walk every coordinate
  in order, keeping each improving step before trying the next one.
* ``PARALLEL_FULL_DIM`` (PfdABC): the full-dimensional employed phase and the
  initial evaluation are split across worker threads; onlookers and scouts
  behave as in classic ABC.
* ``RANDOM_MULTI_DIM`` (RmdABC): the employed bee walks a random-size random
  subset of coordinates; onlookers make a single-coordinate move.

Every food source owns an independent random stream spawned from the run
seed, so a run is reproducible and its result does not depend on how the
parallel phase is partitioned.
"""

from __future__ import annotations

import csv
import enum
import io
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "Strategy",
    "Bounds",
    "ColonyConfig",
    "FoodSource",
    "Swarm",
    "RunResult",
    "ConfigError",
    "EvaluationError",
    "DegeneratePopulationError",
    "spawn_streams",
    "init_population",
    "neighbor_move",
    "fitness_transform",
    "selection_probabilities",
    "roulette_select",
    "employed_phase",
    "onlooker_phase",
    "scout_phase",
    "run",
]

Objective = Callable[[np.ndarray], float]


class ConfigError(ValueError):
    pass


class EvaluationError(RuntimeError):
    """The objective returned NaN (or raised) for a candidate solution."""

    def __init__(self, message: str, index: Optional[int] = None):
        super().__init__(message)
        self.index = index


class DegeneratePopulationError(RuntimeError):
    pass


class Strategy(enum.Enum):
    SINGLE_DIM = "abc"
    FULL_DIM = "fdabc"
    PARALLEL_FULL_DIM = "pfdabc"
    RANDOM_MULTI_DIM = "rmdabc"

    @classmethod
    def parse(cls, name: "str | Strategy") -> "Strategy":
        if isinstance(name, cls):
            return name
        key = str(name).strip().lower()
        for member in cls:
            if key in (member.value, member.name.lower()):
                return member
        raise ConfigError(f"unknown strategy {name!r}; expected one of {[m.value for m in cls]}")

    @property
    def label(self) -> str:
        return {"abc": "ABC", "fdabc": "fdABC", "pfdabc": "PfdABC", "rmdabc": "RmdABC"}[self.value]


@dataclass(frozen=True)
class Bounds:
    """Box constraints. Zero-width coordinates (``lower == upper``) are allowed."""

    lower: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        lower = np.atleast_1d(np.asarray(self.lower, dtype=float)).copy()
        upper = np.atleast_1d(np.asarray(self.upper, dtype=float)).copy()
        if lower.shape != upper.shape or lower.ndim != 1:
            raise ConfigError("lower and upper bounds must be 1-D and of equal length")
        if np.any(lower > upper) or not (np.all(np.isfinite(lower)) and np.all(np.isfinite(upper))):
            raise ConfigError("bounds must be finite with lower <= upper")
        lower.setflags(write=False)
        upper.setflags(write=False)
        object.__setattr__(self, "lower", lower)
        object.__setattr__(self, "upper", upper)

    @classmethod
    def uniform(cls, low: float, high: float, dims: int) -> "Bounds":
        return cls(np.full(dims, float(low)), np.full(dims, float(high)))

    @property
    def dims(self) -> int:
        return self.lower.size

    def contains(self, x: np.ndarray) -> bool:
        return bool(np.all(x >= self.lower) and np.all(x <= self.upper))


@dataclass
class ColonyConfig:
    swarm_size: int = 200
    dims: int = 10
    limit: int = 100
    max_iters: int = 1000
    strategy: Strategy = Strategy.SINGLE_DIM
    workers: int = 1
    seed: int = 0

    def __post_init__(self):
        self.strategy = Strategy.parse(self.strategy)
        if self.swarm_size < 2:
            raise ConfigError("swarm_size must be at least 2 (a partner source is needed)")
        if self.dims < 1:
            raise ConfigError("dims must be at least 1")
        if self.limit < 1:
            raise ConfigError("limit must be at least 1")
        if self.max_iters < 0:
            raise ConfigError("max_iters must be non-negative")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")


@dataclass
class FoodSource:
    position: np.ndarray
    objective_value: float
    trial: int = 0

    @property
    def fitness(self) -> float:
        return fitness_transform(self.objective_value)


class Swarm:
    """Population state stored as arrays; row ``i`` is food source ``i``."""

    def __init__(self, positions: np.ndarray, values: np.ndarray, trials: Optional[np.ndarray] = None):
        self.positions = np.array(positions, dtype=float)
        self.values = np.array(values, dtype=float)
        if trials is None:
            trials = np.zeros(len(self.values), dtype=np.int64)
        self.trials = np.array(trials, dtype=np.int64)
        self.evaluations = 0

    @classmethod
    def from_sources(cls, sources: Sequence[FoodSource]) -> "Swarm":
        return cls(
            np.array([s.position for s in sources]),
            np.array([s.objective_value for s in sources]),
            np.array([s.trial for s in sources]),
        )

    def __len__(self):
        return len(self.values)

    @property
    def dims(self) -> int:
        return self.positions.shape[1]

    @property
    def fitness(self) -> np.ndarray:
        return np.array([fitness_transform(v) for v in self.values])

    @property
    def sources(self) -> list[FoodSource]:
        return [FoodSource(p.copy(), float(v), int(t)) for p, v, t in zip(self.positions, self.values, self.trials)]

    def best_index(self) -> int:
        return int(np.argmin(self.values))

    def copy(self) -> "Swarm":
        out = Swarm(self.positions, self.values, self.trials)
        out.evaluations = self.evaluations
        return out


@dataclass
class RunResult:
    best_position: np.ndarray
    best_value: float
    history: list = field(default_factory=list)
    evaluations: int = 0
    wall_time: float = 0.0
    strategy: Optional[Strategy] = None

    def history_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["iteration", "best_value"])
        for it, value in self.history:
            writer.writerow([it, repr(float(value))])
        return buf.getvalue()


def spawn_streams(seed: int, swarm_size: int) -> tuple[np.random.Generator, list[np.random.Generator]]:
    """A colony-level generator plus one independent generator per source."""
    children = np.random.SeedSequence(seed).spawn(swarm_size + 1)
    return np.random.default_rng(children[0]), [np.random.default_rng(c) for c in children[1:]]


def _evaluate(objective: Objective, x: np.ndarray, index: int) -> float:
    try:
        value = float(objective(x))
    except EvaluationError:
        raise
    except Exception as exc:
        raise EvaluationError(f"objective failed for source {index}: {exc}", index) from exc
    if math.isnan(value):
        raise EvaluationError(f"objective returned NaN for source {index}", index)
    return value


def _random_position(bounds: Bounds, rng: np.random.Generator) -> np.ndarray:
    return rng.uniform(bounds.lower, bounds.upper)


def _map_groups(fn, indices: Sequence[int], workers: int, pool: Optional[ThreadPoolExecutor]) -> list:
    """Apply ``fn`` to contiguous index groups, concurrently when a pool is given."""
    if pool is None or workers == 1:
        return [fn(list(indices))]
    groups = [list(g) for g in np.array_split(np.asarray(indices, dtype=int), workers) if len(g)]
    return list(pool.map(fn, groups))


def init_population(
    config: ColonyConfig,
    bounds: Bounds,
    objective: Objective,
    streams: Sequence[np.random.Generator],
    pool: Optional[ThreadPoolExecutor] = None,
) -> Swarm:
    """Uniform random sources inside ``bounds``, each drawn from its own stream."""
    if bounds.dims != config.dims:
        raise ConfigError(f"bounds have {bounds.dims} dims but config.dims = {config.dims}")
    n = config.swarm_size
    positions = np.empty((n, config.dims))
    values = np.empty(n)

    def work(group):
        for i in group:
            positions[i] = _random_position(bounds, streams[i])
            values[i] = _evaluate(objective, positions[i], i)
        return len(group)

    parallel = config.strategy is Strategy.PARALLEL_FULL_DIM
    evals = sum(_map_groups(work, range(n), config.workers, pool if parallel else None))
    swarm = Swarm(positions, values)
    swarm.evaluations = evals
    return swarm


def neighbor_move(
    x_i: np.ndarray,
    x_j: np.ndarray,
    k: int,
    bounds: Bounds,
    rng: "np.random.Generator | None" = None,
    phi: Optional[float] = None,
) -> np.ndarray:
    """Perturb coordinate ``k`` of ``x_i`` relative to partner ``x_j``.

    ``x'_k = x_k + phi * (x_k - x_jk)`` with ``phi ~ U(-1, 1)`` unless given,
    clamped into the box. All other coordinates are copied unchanged.
    """
    x_i = np.asarray(x_i, dtype=float)
    if not 0 <= k < x_i.size:
        raise IndexError(f"dimension {k} out of range for {x_i.size}-dim vector")
    if phi is None:
        phi = rng.uniform(-1.0, 1.0)
    out = x_i.copy()
    v = x_i[k] + phi * (x_i[k] - x_j[k])
    out[k] = min(max(v, bounds.lower[k]), bounds.upper[k])
    return out


def fitness_transform(objective_value: float) -> float:
    if math.isnan(objective_value):
        raise EvaluationError("cannot compute fitness of NaN")
    if objective_value >= 0:
        return 1.0 / (1.0 + objective_value)
    return 1.0 + abs(objective_value)


def selection_probabilities(fitness) -> np.ndarray:
    """Fitness-proportional selection weights.

    Accepts a :class:`Swarm`, a sequence of :class:`FoodSource`, or raw
    fitness values.
    """
    if isinstance(fitness, Swarm):
        fit = fitness.fitness
    else:
        items = list(fitness)
        if items and isinstance(items[0], FoodSource):
            fit = np.array([s.fitness for s in items])
        else:
            fit = np.asarray(items, dtype=float)
    if fit.size == 0:
        raise DegeneratePopulationError("empty population")
    total = fit.sum()
    if not total > 0:
        raise DegeneratePopulationError("all fitness values are zero")
    return fit / total


def roulette_select(probabilities: np.ndarray, rng: np.random.Generator) -> int:
    cumulative = np.cumsum(probabilities)
    r = rng.random() * cumulative[-1]
    return min(int(np.searchsorted(cumulative, r, side="right")), len(cumulative) - 1)


def _greedy_chain(
    swarm: Swarm,
    i: int,
    dims: Sequence[int],
    partners: np.ndarray,
    bounds: Bounds,
    objective: Objective,
    rng: np.random.Generator,
) -> tuple[bool, int]:
    """Sequential greedy moves on source ``i`` over the listed coordinates.

    Each accepted step is kept and the next coordinate is tried from it.
    ``partners`` supplies the other sources' positions (live or a snapshot).
    Returns ``(improved, evaluations)``.
    """
    n = len(dims)
    n_sources = partners.shape[0]
    js = rng.integers(0, n_sources - 1, size=n)
    js += js >= i
    phis = rng.uniform(-1.0, 1.0, size=n)
    x = swarm.positions[i]
    # Python floats: scalar indexing into ndarrays dominates this loop otherwise.
    lo, hi = bounds.lower.tolist(), bounds.upper.tolist()
    item = partners.item
    best = swarm.values[i]
    improved = False
    evals = 0
    for k, j, phi in zip(dims, js.tolist(), phis.tolist()):
        old = x.item(k)
        new = old + phi * (old - item(j, k))
        if new < lo[k]:
            new = lo[k]
        elif new > hi[k]:
            new = hi[k]
        if new == old:
            continue
        x[k] = new
        value = _evaluate(objective, x, i)
        evals += 1
        if value < best:
            best = value
            improved = True
        else:
            x[k] = old
    swarm.values[i] = best
    return improved, evals


def _book(swarm: Swarm, i: int, improved: bool) -> None:
    if improved:
        swarm.trials[i] = 0
    else:
        swarm.trials[i] += 1


def _employed_dims(strategy: Strategy, d: int, rng: np.random.Generator) -> list[int]:
    if strategy is Strategy.SINGLE_DIM:
        return [int(rng.integers(d))]
    if strategy is Strategy.RANDOM_MULTI_DIM:
        count = int(rng.integers(1, d + 1))
        return rng.choice(d, size=count, replace=False).tolist()
    return list(range(d))


def employed_phase(
    swarm: Swarm,
    strategy: Strategy,
    bounds: Bounds,
    objective: Objective,
    streams: Sequence[np.random.Generator],
    workers: int = 1,
    pool: Optional[ThreadPoolExecutor] = None,
) -> Swarm:
    """One employed bee per source; updates ``swarm`` in place and returns it.

    Under ``PARALLEL_FULL_DIM`` partners are read from a snapshot taken at the
    start of the phase, so the outcome is independent of the worker split.
    """
    strategy = Strategy.parse(strategy)
    d = swarm.dims
    parallel = strategy is Strategy.PARALLEL_FULL_DIM
    partners = swarm.positions.copy() if parallel else swarm.positions

    def work(group):
        evals = 0
        for i in group:
            ks = _employed_dims(strategy, d, streams[i])
            improved, n = _greedy_chain(swarm, i, ks, partners, bounds, objective, streams[i])
            _book(swarm, i, improved)
            evals += n
        return evals

    swarm.evaluations += sum(_map_groups(work, range(len(swarm)), workers, pool if parallel else None))
    return swarm


def onlooker_phase(
    swarm: Swarm,
    strategy: Strategy,
    bounds: Bounds,
    objective: Objective,
    streams: Sequence[np.random.Generator],
    colony_rng: np.random.Generator,
) -> Swarm:
    """Fitness-proportional re-exploitation of the food sources.

    ``FULL_DIM`` sends ``len(swarm)`` onlookers, each picking a source by
    roulette and walking all coordinates. The other strategies make a single
    pass over the sources, exploiting source ``i`` with one single-coordinate
    move when a uniform draw falls below its selection probability.
    """
    strategy = Strategy.parse(strategy)
    probs = selection_probabilities(swarm)
    d = swarm.dims
    evals = 0
    if strategy is Strategy.FULL_DIM:
        all_dims = list(range(d))
        for _ in range(len(swarm)):
            i = roulette_select(probs, colony_rng)
            improved, n = _greedy_chain(swarm, i, all_dims, swarm.positions, bounds, objective, streams[i])
            _book(swarm, i, improved)
            evals += n
    else:
        for i in range(len(swarm)):
            if streams[i].random() < probs[i]:
                k = [int(streams[i].integers(d))]
                improved, n = _greedy_chain(swarm, i, k, swarm.positions, bounds, objective, streams[i])
                _book(swarm, i, improved)
                evals += n
    swarm.evaluations += evals
    return swarm


def scout_phase(
    swarm: Swarm,
    limit: int,
    bounds: Bounds,
    objective: Objective,
    streams: Sequence[np.random.Generator],
) -> Swarm:
    """Replace every source whose trial counter exceeds ``limit``."""
    for i in np.flatnonzero(swarm.trials > limit).tolist():
        swarm.positions[i] = _random_position(bounds, streams[i])
        swarm.values[i] = _evaluate(objective, swarm.positions[i], i)
        swarm.trials[i] = 0
        swarm.evaluations += 1
    return swarm


PhaseCallback = Callable[[int, str, Swarm], None]


def _keep_best(swarm: Swarm, best_value: float, best_position: np.ndarray):
    b = swarm.best_index()
    if swarm.values[b] < best_value:
        return float(swarm.values[b]), swarm.positions[b].copy()
    return best_value, best_position


def run(
    objective: Objective,
    bounds: Bounds,
    config: ColonyConfig,
    callback: Optional[PhaseCallback] = None,
) -> RunResult:
    """Minimize ``objective`` over ``bounds``.

    Parameters
    ----------
    objective : callable
        Maps a 1-D float array to a float. It must not keep a reference to
        its argument and, for ``PARALLEL_FULL_DIM``, must be thread-safe.
    bounds : Bounds
        Search box; its length must equal ``config.dims``.
    config : ColonyConfig
        Swarm size, abandonment limit, iteration budget, strategy, worker
        count and seed.
    callback : callable, optional
        Called as ``callback(iteration, phase, swarm)`` after the initial
        evaluation (phase ``"init"``, iteration 0) and after every
        ``"employed"``, ``"onlooker"`` and ``"scout"`` phase. The swarm is live;
        copy it if it must be kept.

    Returns
    -------
    RunResult
        Best solution seen over the whole run and the per-iteration history
        of the best value, starting with iteration 0 (initial population).
    """
    strategy = config.strategy
    colony_rng, streams = spawn_streams(config.seed, config.swarm_size)
    parallel = strategy is Strategy.PARALLEL_FULL_DIM and config.workers > 1
    onlooker_strategy = Strategy.SINGLE_DIM if strategy is Strategy.PARALLEL_FULL_DIM else strategy

    t0 = time.perf_counter()
    pool = ThreadPoolExecutor(max_workers=config.workers) if parallel else None
    try:
        swarm = init_population(config, bounds, objective, streams, pool)
        if callback:
            callback(0, "init", swarm)
        b = swarm.best_index()
        best_value = float(swarm.values[b])
        best_position = swarm.positions[b].copy()
        history = [(0, best_value)]
        for it in range(1, config.max_iters + 1):
            try:
                employed_phase(swarm, strategy, bounds, objective, streams, config.workers, pool)
                if callback:
                    callback(it, "employed", swarm)
                onlooker_phase(swarm, onlooker_strategy, bounds, objective, streams, colony_rng)
                if callback:
                    callback(it, "onlooker", swarm)
                # Record before scouts can abandon the current best source.
                best_value, best_position = _keep_best(swarm, best_value, best_position)
                scout_phase(swarm, config.limit, bounds, objective, streams)
                if callback:
                    callback(it, "scout", swarm)
            except EvaluationError as exc:
                raise EvaluationError(f"iteration {it}: {exc}", exc.index) from exc
            best_value, best_position = _keep_best(swarm, best_value, best_position)
            history.append((it, best_value))
    finally:
        if pool is not None:
            pool.shutdown()
    wall = time.perf_counter() - t0
    return RunResult(best_position, best_value, history, swarm.evaluations, wall, strategy)
