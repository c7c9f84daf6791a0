"""
Scheduling sixty freight tasks
==============================

Each task either brings a container from an entrance gate to a storage cell
or takes one from a cell to an exit gate. A random-key vector is sorted to
get the task order; each task then uses whichever gate is quickest from where
the vehicle stands.
"""

import warnings

import numpy as np

from beecolony import (
    ColonyConfig,
    KinematicParams,
    Strategy,
    default_layout,
    default_tasks,
    format_report,
    make_objective,
    run,
)
from beecolony.scheduling import ReconstructedTaskWarning

layout = default_layout()
with warnings.catch_warnings():
    # Four cells of the built-in instance are placeholders; fine for a demo.
    warnings.simplefilter("ignore", ReconstructedTaskWarning)
    tasks = default_tasks()

objective = make_objective(layout, tasks, KinematicParams())

# A random key vector is already a valid schedule, just not a good one.
keys = np.random.default_rng(0).uniform(-10, 10, objective.dims)
print(f"random order: {objective(keys):.1f} s")

# Let two variants improve on it with a modest budget.
for strategy in (Strategy.SINGLE_DIM, Strategy.RANDOM_MULTI_DIM):
    config = ColonyConfig(swarm_size=40, dims=objective.dims, limit=100, max_iters=100, strategy=strategy, seed=3)
    result = run(objective, objective.bounds, config)
    print(f"{strategy.label:7s}: {result.best_value:.1f} s after {result.evaluations} evaluations")

# The full report lists the order and which tasks each gate served.
print()
print(format_report(objective.report(result.best_position)))
