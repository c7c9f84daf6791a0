import csv
import subprocess
import sys

import numpy as np
import pytest

from beecolony import scheduling
from beecolony.cli import EXIT_IO, EXIT_OK, EXIT_USAGE, main
from beecolony.kinematics import Position

SMALL = ["--swarm", "10", "--iters", "15", "--limit", "20"]
TIMING_COLUMNS = {"average_runtime_s", "shortest_runtime_s", "runtime_s", "cpu_s"}


def read_csv(path, drop=TIMING_COLUMNS):
    with open(path) as fh:
        return [{k: v for k, v in row.items() if k not in drop} for row in csv.DictReader(fh)]


def artifacts(out):
    """All outputs except wall-clock columns, keyed by file name."""
    result = {}
    for p in sorted(out.iterdir()):
        result[p.name] = read_csv(p) if p.suffix == ".csv" else p.read_text()
    return result


class TestMatrix:
    def test_stdout(self, capsys, matrix):
        assert main(["matrix"]) == EXIT_OK
        lines = capsys.readouterr().out.splitlines()
        assert lines[0].split(",")[:3] == ["layer_diff", "0", "1"]
        assert len(lines) == 9 and len(lines[1].split(",")) == 61
        assert float(lines[2].split(",")[3]) == pytest.approx(matrix[1, 2], abs=1e-6)

    def test_file_and_kinematics(self, tmp_path):
        kin = tmp_path / "kin.cfg"
        kin.write_text("handling_time = 0\naccel_x = 1.0\nvmax_x = 10\n")
        out = tmp_path / "m.csv"
        assert main(["matrix", "--kinematics", str(kin), "--decimals", "3", "--out", str(out)]) == EXIT_OK
        row = out.read_text().splitlines()[1].split(",")
        assert row[2] == "2.000"  # one column at a = 1

    def test_bad_kinematics(self, tmp_path):
        kin = tmp_path / "kin.cfg"
        kin.write_text("accel_x = -1\n")
        assert main(["matrix", "--kinematics", str(kin)]) == EXIT_USAGE

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "beecolony", "matrix", "--decimals", "2"],
                              capture_output=True, text=True, check=True)
        assert proc.stdout.startswith("layer_diff,0,1")


class TestBench:
    def test_outputs_and_determinism(self, tmp_path):
        runs = []
        for name in ("a", "b"):
            out = tmp_path / name
            code = main(["bench", "--function", "step", "--strategy", "all", "--dims", "5",
                         "--trials", "2", "--seed", "7", "--out", str(out)] + SMALL)
            assert code == EXIT_OK
            runs.append(artifacts(out))
        assert runs[0] == runs[1]
        stats = runs[0]["stats.csv"]
        assert [r["strategy"] for r in stats] == ["ABC", "fdABC", "PfdABC", "RmdABC"]
        assert len([n for n in runs[0] if n.startswith("convergence_step_")]) == 8
        full = read_csv(tmp_path / "a" / "stats.csv", drop=())
        assert list(full[0]) == ["function", "strategy", "dims", "trials", "average_runtime_s", "average_best",
                                 "best_best", "shortest_runtime_s", "variance_best"]

    def test_unknown_function(self, capsys, tmp_path):
        assert main(["bench", "--function", "ackley", "--out", str(tmp_path)]) == EXIT_USAGE
        err = capsys.readouterr().err
        for name in ("bent_cigar", "sum_diff_power", "rosenbrock", "rastrigin", "step"):
            assert name in err

    def test_missing_function(self):
        assert main(["bench"]) == EXIT_USAGE

    def test_bad_values(self):
        assert main(["bench", "--function", "step", "--swarm", "0"]) == EXIT_USAGE
        assert main(["bench", "--function", "step", "--strategy", "gd"]) == EXIT_USAGE
        assert main(["bench", "--function", "step", "--dims", "x"]) == EXIT_USAGE

    def test_config_precedence(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# campaign\nfunction = rastrigin\ndims = 3\nswarm_size = 6\nmax_iters = 5\ntrials = 1\n")
        assert main(["bench", "--config", str(cfg), "--dims", "4", "--out", str(tmp_path / "o")]) == EXIT_OK
        assert "rastrigin D=4" in capsys.readouterr().out
        rows = read_csv(tmp_path / "o" / "stats.csv")
        assert rows[0]["dims"] == "4" and rows[0]["trials"] == "1"
        history = (tmp_path / "o" / "convergence_rastrigin_abc_trial0.csv").read_text().splitlines()
        assert len(history) == 1 + 5 + 1  # header, initial best, one per iteration

    def test_bad_config(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("colour = blue\n")
        assert main(["bench", "--function", "step", "--config", str(cfg)]) == EXIT_USAGE
        assert main(["bench", "--function", "step", "--config", str(tmp_path / "none.cfg")]) == EXIT_IO


class TestSchedule:
    def run(self, out, *extra):
        return main(["schedule", "--iters", "5", "--swarm", "8", "--out", str(out), *extra])

    def test_outputs(self, tmp_path, layout, tasks):
        assert self.run(tmp_path, "--trials", "2", "--seed", "3") == EXIT_OK
        summary = read_csv(tmp_path / "summary.csv", drop=())
        assert list(summary[0]) == ["strategy", "trials", "min_s", "max_s", "avg_s", "cpu_s"]
        assert summary[0]["trials"] == "2"
        sequence, assignment = scheduling.parse_report((tmp_path / "schedule_abc.txt").read_text())
        assert sorted(sequence) == list(range(1, 61))
        trials = read_csv(tmp_path / "trials_abc.csv", drop=())
        assert [t["seed"] for t in trials] == ["3", "4"]
        assert float(summary[0]["min_s"]) == pytest.approx(min(float(t["total_time_s"]) for t in trials))
        # Report round trip: replaying the printed sequence reproduces the printed total.
        keys = np.empty(60)
        keys[[s - 1 for s in sequence]] = np.arange(60.0)
        report = scheduling.evaluate_schedule(keys, layout, tasks, scheduling.KinematicParams())
        assert report.gate_assignment == assignment
        assert f"{report.total_time:.6f}" == summary[0]["min_s"]

    def test_deterministic(self, tmp_path):
        for name in ("a", "b"):
            assert self.run(tmp_path / name, "--strategy", "all", "--seed", "11") == EXIT_OK
        assert artifacts(tmp_path / "a") == artifacts(tmp_path / "b")

    def test_worker_count_irrelevant(self, tmp_path):
        for w in ("1", "4"):
            assert self.run(tmp_path / w, "--strategy", "pfdabc", "--workers", w) == EXIT_OK
        assert artifacts(tmp_path / "1") == artifacts(tmp_path / "4")

    def test_task_file(self, tmp_path, tasks):
        path = tmp_path / "tasks.csv"
        path.write_text(scheduling.tasks_csv(tasks[:5]))
        assert self.run(tmp_path / "o", "--tasks", str(path)) == EXIT_OK
        sequence, _ = scheduling.parse_report((tmp_path / "o" / "schedule_abc.txt").read_text())
        assert sorted(sequence) == [1, 2, 3, 4, 5]

    def test_malformed_task_file(self, tmp_path, capsys):
        path = tmp_path / "tasks.csv"
        path.write_text("id,direction,row,layer,column\n1,I,1,1,1\n2,I,1,1\n")
        assert self.run(tmp_path / "o", "--tasks", str(path)) == EXIT_USAGE
        assert "line 3" in capsys.readouterr().err

    def test_layout_missing_exit_gates(self, tmp_path, layout):
        path = tmp_path / "gates.csv"
        only_in = scheduling.WarehouseLayout(layout.entrances, ())
        path.write_text(scheduling.layout_csv(only_in))
        assert self.run(tmp_path / "o", "--layout", str(path)) == EXIT_USAGE

    def test_custom_layout(self, tmp_path):
        path = tmp_path / "gates.csv"
        path.write_text("gate_id,kind,row,layer,column\nR1,entrance,1,1,30\nC1,exit,2,1,31\n")
        assert self.run(tmp_path / "o", "--layout", str(path)) == EXIT_OK
        _, assignment = scheduling.parse_report((tmp_path / "o" / "schedule_abc.txt").read_text())
        assert set(assignment.values()) == {"R1", "C1"}

    def test_zero_handling_time(self, tmp_path):
        kin = tmp_path / "kin.cfg"
        kin.write_text("handling_time = 0\n")
        assert self.run(tmp_path / "z", "--kinematics", str(kin)) == EXIT_OK
        assert self.run(tmp_path / "d") == EXIT_OK
        # Handling time is a constant per task, so the search trajectory is unchanged.
        zero = float(read_csv(tmp_path / "z" / "summary.csv")[0]["min_s"])
        default = float(read_csv(tmp_path / "d" / "summary.csv")[0]["min_s"])
        assert zero == pytest.approx(default - 60 * 2 * 2.0, abs=2e-6)

    def test_placeholder_notice(self, tmp_path, capsys):
        assert self.run(tmp_path) == EXIT_OK
        assert "15, 30, 45, 60" in capsys.readouterr().err


def test_no_subcommand():
    assert main([]) == EXIT_USAGE


def test_help_exits_zero(capsys):
    assert main(["--help"]) == EXIT_OK
    assert "schedule" in capsys.readouterr().out


def test_default_start_used():
    assert scheduling.DEFAULT_START == Position(1, 1, 1)
