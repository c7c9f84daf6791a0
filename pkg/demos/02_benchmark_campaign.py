"""
Four bee-colony variants on test functions
==========================================

Classic ABC perturbs one coordinate per visit. fdABC walks every coordinate
with greedy acceptance after each step, PfdABC does the same in parallel
against a frozen snapshot, and RmdABC walks a random subset of coordinates.
"""

from beecolony import ColonyConfig, Strategy, run_campaign
from beecolony.benchmarks import stats_csv

rows = []
for name in ("step", "rastrigin"):
    for strategy in Strategy:
        config = ColonyConfig(swarm_size=40, dims=10, limit=50, max_iters=150, strategy=strategy, workers=2)
        stats = run_campaign(name, dims=10, config=config, trials=3, seed=1)
        rows.append(stats)
        print(f"{name:10s} {stats.strategy:7s} mean best {stats.average_best:10.3e}  "
              f"time {stats.average_runtime:5.2f} s")

# The same numbers as a table with one row per (function, strategy).
print()
print(stats_csv(rows))

# Convergence of a single run is kept in each result's history.
history = rows[1].results[0].history
for it, best in history[::30]:
    print(f"iteration {it:3d}: {best:.3e}")
