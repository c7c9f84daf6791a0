"""Command-line front end: ``bench``, ``schedule`` and ``matrix`` subcommands.

Settings come from built-in defaults, then an optional ``key = value`` config
file (``--config``), then command-line flags, each overriding the previous.
Exit codes: 0 success, 2 usage or validation error, 3 I/O error, 4 numerical
failure.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import benchmarks, scheduling
from .colony import ColonyConfig, ConfigError, DegeneratePopulationError, EvaluationError, Strategy, run
from .kinematics import KinematicParams, ParameterError, build_time_matrix

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_IO = 3
EXIT_NUMERIC = 4

ALL_STRATEGIES = (
    Strategy.SINGLE_DIM,
    Strategy.FULL_DIM,
    Strategy.PARALLEL_FULL_DIM,
    Strategy.RANDOM_MULTI_DIM,
)

_MODE_DEFAULTS = {
    "bench": dict(iters=1000, trials=10, dims=60),
    "schedule": dict(iters=1500, trials=1, dims=60),
}


class UsageError(Exception):
    pass


@dataclass
class ExperimentConfig:
    mode: str
    strategy: str = "abc"
    dims: int = 60
    swarm: int = 200
    limit: int = 100
    iters: int = 1000
    trials: int = 1
    workers: int = 1
    seed: int = 0
    function: Optional[str] = None
    tasks: Optional[str] = None
    layout: Optional[str] = None
    kinematics: Optional[str] = None
    out: Optional[str] = None

    def strategies(self) -> list[Strategy]:
        if self.strategy.strip().lower() == "all":
            return list(ALL_STRATEGIES)
        return [Strategy.parse(self.strategy)]

    def colony(self, strategy: Strategy, dims: int) -> ColonyConfig:
        return ColonyConfig(
            swarm_size=self.swarm,
            dims=dims,
            limit=self.limit,
            max_iters=self.iters,
            strategy=strategy,
            workers=self.workers,
            seed=self.seed,
        )

    def validate(self) -> None:
        for name in ("dims", "swarm", "limit", "iters", "trials", "workers"):
            if getattr(self, name) < 1:
                raise UsageError(f"{name} must be positive, got {getattr(self, name)}")
        if self.seed < 0:
            raise UsageError("seed must be non-negative")
        try:
            self.strategies()
        except ConfigError as exc:
            raise UsageError(str(exc)) from None
        if self.mode == "bench":
            if not self.function:
                raise UsageError("bench mode needs a function name (--function)")
            try:
                benchmarks.get_function(self.function)
            except KeyError as exc:
                raise UsageError(exc.args[0]) from None


def read_keyvalue(path) -> dict[str, str]:
    """Parse a flat ``key = value`` file; ``#`` starts a comment."""
    out = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_").lower()] = value
    return out


_INT_KEYS = {"dims", "swarm", "limit", "iters", "trials", "workers", "seed"}
_KEY_ALIASES = {"swarm_size": "swarm", "max_iters": "iters", "strategy_name": "strategy"}


def build_config(mode: str, args: argparse.Namespace) -> ExperimentConfig:
    values: dict = dict(_MODE_DEFAULTS[mode])
    if args.config:
        for key, value in read_keyvalue(args.config).items():
            key = _KEY_ALIASES.get(key, key)
            if key == "mode":
                continue
            if key not in {f.name for f in fields(ExperimentConfig)}:
                raise UsageError(f"unknown config key {key!r}")
            try:
                values[key] = int(value) if key in _INT_KEYS else value
            except ValueError:
                raise UsageError(f"config key {key!r} expects an integer, got {value!r}") from None
    for key in ("strategy", "dims", "swarm", "limit", "iters", "trials", "workers", "seed",
                "function", "tasks", "layout", "kinematics", "out"):
        value = getattr(args, key, None)
        if value is not None:
            values[key] = value
    cfg = ExperimentConfig(mode=mode, **values)
    cfg.validate()
    return cfg


def load_kinematics(path: Optional[str]) -> KinematicParams:
    if not path:
        return KinematicParams()
    try:
        return KinematicParams.from_mapping(read_keyvalue(path))
    except (ParameterError, ValueError) as exc:
        raise UsageError(f"{path}: {exc}") from None


def _write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)


def cmd_bench(cfg: ExperimentConfig) -> int:
    fn = benchmarks.get_function(cfg.function)
    out = Path(cfg.out or "bench_out")
    rows = []
    for strategy in cfg.strategies():
        stats = benchmarks.run_campaign(fn, cfg.dims, cfg.colony(strategy, cfg.dims), cfg.trials, cfg.seed)
        rows.append(stats)
        for t, result in enumerate(stats.results):
            _write(out / f"convergence_{fn.name}_{strategy.value}_trial{t}.csv", result.history_csv())
        print(
            f"{fn.name} D={cfg.dims} {strategy.label}: avg_best={stats.average_best:.6e} "
            f"best={stats.best_best:.6e} var={stats.variance_best:.6e} avg_time={stats.average_runtime:.3f}s"
        )
    _write(out / "stats.csv", benchmarks.stats_csv(rows))
    return EXIT_OK


def _schedule_summary_csv(rows) -> str:
    lines = ["strategy,trials,min_s,max_s,avg_s,cpu_s"]
    for label, totals, times in rows:
        lines.append(
            f"{label},{len(totals)},{min(totals):.6f},{max(totals):.6f},{np.mean(totals):.6f},{np.mean(times):.6f}"
        )
    return "\n".join(lines) + "\n"


def cmd_schedule(cfg: ExperimentConfig) -> int:
    params = load_kinematics(cfg.kinematics)
    if cfg.tasks:
        tasks = scheduling.load_tasks(cfg.tasks)
    else:
        tasks = scheduling.default_tasks(warn=False)
        ids = ", ".join(str(i) for i in sorted(scheduling.RECONSTRUCTED_TASKS))
        print(f"note: built-in tasks {ids} use reconstructed placeholder cells", file=sys.stderr)
    layout = scheduling.load_layout(cfg.layout) if cfg.layout else scheduling.default_layout()
    for direction in scheduling.Direction:
        if any(t.direction is direction for t in tasks) and not layout.gates_for(direction):
            raise scheduling.LayoutError(f"layout has no gates for {direction.name.lower()} tasks")
    objective = scheduling.make_objective(layout, tasks, params)
    out = Path(cfg.out or "schedule_out")
    summary = []
    for strategy in cfg.strategies():
        totals, times, lines = [], [], ["trial,seed,runtime_s,total_time_s"]
        best = None
        for t in range(cfg.trials):
            colony = cfg.colony(strategy, objective.dims)
            colony.seed = cfg.seed + t
            result = run(objective, objective.bounds, colony)
            report = objective.report(result.best_position)
            totals.append(report.total_time)
            times.append(result.wall_time)
            lines.append(f"{t},{colony.seed},{result.wall_time:.6f},{report.total_time:.6f}")
            if best is None or report.total_time < best.total_time:
                best = report
            _write(out / f"convergence_{strategy.value}_trial{t}.csv", result.history_csv())
        _write(out / f"schedule_{strategy.value}.txt", scheduling.format_report(best))
        _write(out / f"schedule_{strategy.value}.csv", scheduling.report_csv(best))
        _write(out / f"trials_{strategy.value}.csv", "\n".join(lines) + "\n")
        summary.append((strategy.label, totals, times))
        print(
            f"{strategy.label}: min={min(totals):.3f}s max={max(totals):.3f}s "
            f"avg={np.mean(totals):.3f}s cpu={np.mean(times):.3f}s"
        )
    _write(out / "summary.csv", _schedule_summary_csv(summary))
    return EXIT_OK


def cmd_matrix(args: argparse.Namespace) -> int:
    params = load_kinematics(args.kinematics)
    text = build_time_matrix(params).to_csv(decimals=args.decimals)
    if args.out:
        _write(Path(args.out), text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--strategy", help="abc | fdabc | pfdabc | rmdabc | all")
    p.add_argument("--dims", type=int)
    p.add_argument("--swarm", type=int, help="number of food sources")
    p.add_argument("--limit", type=int, help="abandonment threshold")
    p.add_argument("--iters", type=int)
    p.add_argument("--trials", type=int)
    p.add_argument("--workers", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="key = value settings file")
    p.add_argument("--out", help="output directory")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="beecolony", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    bench = sub.add_parser("bench", help="benchmark-function trial campaign")
    _add_run_flags(bench)
    bench.add_argument("--function", help=f"one of {', '.join(benchmarks.FUNCTIONS)}")

    sched = sub.add_parser("schedule", help="optimize the freight-station task sequence")
    _add_run_flags(sched)
    sched.add_argument("--tasks", help="task CSV (id,direction,row,layer,column)")
    sched.add_argument("--layout", help="gate CSV (gate_id,kind,row,layer,column)")
    sched.add_argument("--kinematics", help="key = value kinematic parameters")

    matrix = sub.add_parser("matrix", help="print the time-cost matrix as CSV")
    matrix.add_argument("--kinematics", help="key = value kinematic parameters")
    matrix.add_argument("--decimals", type=int, default=6)
    matrix.add_argument("--out", help="write to this file instead of stdout")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        if args.command == "matrix":
            return cmd_matrix(args)
        cfg = build_config(args.command, args)
        if args.command == "bench":
            return cmd_bench(cfg)
        return cmd_schedule(cfg)
    except (UsageError, ConfigError, scheduling.LayoutError, scheduling.TaskFileError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (EvaluationError, DegeneratePopulationError, FloatingPointError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
