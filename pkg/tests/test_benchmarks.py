import csv
import io

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from beecolony.benchmarks import (
    FUNCTIONS,
    TrialStats,
    bent_cigar,
    get_function,
    rastrigin,
    rosenbrock,
    run_campaign,
    stats_csv,
    step,
    sum_diff_power,
)
from beecolony.colony import ColonyConfig, Strategy


class TestFormulas:
    def test_bent_cigar(self):
        assert bent_cigar(np.zeros(5)) == 0
        assert bent_cigar([1, 1]) == 1 + 1e6
        assert bent_cigar([3]) == 9

    def test_sum_diff_power(self):
        assert sum_diff_power(np.zeros(4)) == 0
        assert sum_diff_power([2, 2]) == 12
        assert sum_diff_power([-2, -2]) == 12

    def test_sum_diff_power_overflow_is_inf(self):
        assert sum_diff_power(np.full(300, 100.0)) == np.inf

    def test_rosenbrock(self):
        assert rosenbrock(np.ones(7)) == 0
        assert rosenbrock([0, 0]) == 1
        assert rosenbrock([2, 4, 16]) == 10
        assert rosenbrock([7.0]) == 0

    def test_rastrigin(self):
        assert rastrigin(np.zeros(3)) == 0
        assert rastrigin([1, 1]) == pytest.approx(2, abs=1e-12)
        assert rastrigin([0.5]) == pytest.approx(20.25, abs=1e-12)

    def test_step(self):
        assert step(np.full(6, -0.5)) == 0
        assert step(np.zeros(4)) == 1.0
        assert step([0.5]) == 1.0

    def test_empty_vector(self):
        with pytest.raises(ValueError):
            bent_cigar([])


class TestRegistry:
    def test_ranges(self):
        assert get_function("rastrigin").search_range(3).upper[0] == 500
        for name in ("bent_cigar", "sum_diff_power", "rosenbrock", "step"):
            b = get_function(name).search_range(3)
            assert b.lower[0] == -100 and b.upper[0] == 100

    def test_unknown_name_lists_valid_set(self):
        with pytest.raises(KeyError, match="bent_cigar"):
            get_function("foo")

    @pytest.mark.parametrize("name", list(FUNCTIONS))
    @pytest.mark.parametrize("dims", [1, 10, 100])
    def test_known_optimum(self, name, dims):
        fn = FUNCTIONS[name]
        assert abs(fn(fn.optimum_point(dims)) - fn.known_optimum) <= 1e-12


@pytest.mark.parametrize("name", list(FUNCTIONS))
@given(data=st.data())
def test_non_negative_on_search_range(name, data):
    fn = FUNCTIONS[name]
    d = data.draw(st.integers(fn.min_dims, 12))
    x = data.draw(arrays(float, d, elements=st.floats(fn.low, fn.high)))
    assert fn(x) >= 0


@given(arrays(float, st.integers(1, 10), elements=st.floats(-100, 100)), st.data())
def test_sign_symmetries(x, data):
    flips = data.draw(arrays(bool, x.size))
    y = np.where(flips, -x, x)
    assert bent_cigar(y) == bent_cigar(x)
    assert rastrigin(y) == pytest.approx(rastrigin(x), rel=1e-12, abs=1e-9)
    assert sum_diff_power(y) == sum_diff_power(x)


class TestCampaign:
    cfg = ColonyConfig(swarm_size=10, dims=3, limit=10, max_iters=10, strategy=Strategy.SINGLE_DIM, seed=4)

    def test_single_trial(self):
        s = run_campaign("step", 3, self.cfg, trials=1)
        assert s.average_best == s.best_best
        assert s.variance_best == 0

    def test_identical_runs_have_zero_variance(self):
        a = run_campaign("step", 3, self.cfg, trials=1, seed=9)
        b = run_campaign("step", 3, self.cfg, trials=1, seed=9)
        s = TrialStats("step", "ABC", 3, a.bests + b.bests, a.runtimes + b.runtimes)
        assert s.variance_best == 0

    def test_statistics_recompute_from_trial_bests(self):
        s = run_campaign("rastrigin", 3, self.cfg, trials=5)
        bests = np.array(s.bests)
        assert s.average_best == bests.mean()
        assert s.best_best == bests.min()
        assert s.variance_best == pytest.approx(((bests - bests.mean()) ** 2).mean(), rel=1e-12)
        assert s.best_best <= s.average_best
        assert s.shortest_runtime <= s.average_runtime
        assert [r.best_value for r in s.results] == s.bests

    def test_trial_seeds_are_offsets(self):
        s = run_campaign("step", 3, self.cfg, trials=3, seed=100)
        single = run_campaign("step", 3, self.cfg, trials=1, seed=102)
        assert s.bests[2] == single.bests[0]

    def test_concurrent_trials_match_sequential(self):
        a = run_campaign("rastrigin", 3, self.cfg, trials=4)
        b = run_campaign("rastrigin", 3, self.cfg, trials=4, concurrent=4)
        assert a.bests == b.bests

    def test_full_dim_step_campaign(self):
        cfg = ColonyConfig(50, 10, 50, 200, Strategy.FULL_DIM, seed=0)
        assert run_campaign("step", 10, cfg, trials=10).best_best <= 1e-8

    def test_csv_columns(self):
        s = run_campaign("step", 3, self.cfg, trials=2)
        rows = list(csv.DictReader(io.StringIO(stats_csv([s]))))
        assert list(rows[0]) == [
            "function", "strategy", "dims", "trials", "average_runtime_s",
            "average_best", "best_best", "shortest_runtime_s", "variance_best",
        ]
        assert rows[0]["strategy"] == "ABC"
        assert float(rows[0]["best_best"]) == pytest.approx(s.best_best, rel=1e-6)
