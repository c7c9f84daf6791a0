"""
Travel times of the storage vehicle
===================================

The vehicle moves along the aisle (columns) and up the racks (layers) at the
same time. Each axis accelerates, cruises if the hop is long enough, then
brakes. A leg takes as long as the slower axis.
"""

import numpy as np

from beecolony.kinematics import KinematicParams, Position, build_time_matrix, travel_time

params = KinematicParams()
print(params)

# Short hops never reach top speed; longer ones add cruising time linearly.
for cells in (1, 2, 5, 20, 59):
    print(f"{cells:2d} columns: {params.horizontal_time(cells):7.3f} s")
for layers in (1, 3, 7):
    print(f"{layers:2d} layers:  {params.vertical_time(layers):7.3f} s")

# The whole lookup table is indexed by (layer difference, column difference).
matrix = build_time_matrix(params)
np.set_printoptions(precision=2, suppress=True, linewidth=110)
print(matrix.entries[:5, :6])

# Vertical motion is slow, so one layer already costs more than five columns.
a, b = Position(1, 1, 1), Position(2, 2, 6)
print(f"{a} -> {b}: {travel_time(a, b, params):.2f} s (row change is free)")

# Everything scales with cell size: doubling cells and speeds leaves times unchanged.
big = KinematicParams(accel_x=2 * params.accel_x, accel_y=2 * params.accel_y,
                      vmax_x=2 * params.vmax_x, vmax_y=2 * params.vmax_y,
                      cell_width=2.0, cell_height=2.0)
print("scale-free:", np.allclose(build_time_matrix(big).entries, matrix.entries))
