"""ETV travel-time model for a two-row stacker-crane warehouse.

The vehicle moves horizontally (columns) and vertically (layers) at the same
time; each axis follows a symmetric trapezoidal (or triangular, for short hops)
velocity profile, and the leg time is the slower of the two axes.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

__all__ = [
    "ParameterError",
    "DomainError",
    "KinematicParams",
    "Position",
    "TimeMatrix",
    "ROWS",
    "LAYERS",
    "COLUMNS",
    "axis_time",
    "peak_time",
    "critical_distance",
    "travel_time",
    "build_time_matrix",
    "task_time",
    "schedule_time",
]

ROWS = 2
LAYERS = 8
COLUMNS = 60


class ParameterError(ValueError):
    """Raised for non-positive or otherwise invalid kinematic parameters."""


class DomainError(ValueError):
    """Raised for out-of-range positions or negative durations."""


def _check_positive(**values: float) -> None:
    for name, value in values.items():
        if not (value > 0 and math.isfinite(value)):
            raise ParameterError(f"{name} must be positive and finite, got {value!r}")


@dataclass(frozen=True)
class KinematicParams:
    """Accelerations, top speeds and cell geometry of the ETV.

    The defaults were obtained by a least-squares fit of the travel-time model
    to the published 5 x 6 block of the time-cost matrix with unit cell size;
    they reproduce every published entry to within 0.005 s. Only the ratios
    ``cell/accel`` and ``cell/vmax`` matter, so any cell size can be used as
    long as accelerations and speeds are scaled with it.
    """

    accel_x: float = 0.133544
    accel_y: float = 0.240240
    vmax_x: float = 0.533054
    vmax_y: float = 0.0888889
    cell_width: float = 1.0
    cell_height: float = 1.0
    handling_time: float = 2.0

    def __post_init__(self):
        _check_positive(
            accel_x=self.accel_x,
            accel_y=self.accel_y,
            vmax_x=self.vmax_x,
            vmax_y=self.vmax_y,
            cell_width=self.cell_width,
            cell_height=self.cell_height,
        )
        if not (self.handling_time >= 0 and math.isfinite(self.handling_time)):
            raise ParameterError(f"handling_time must be non-negative, got {self.handling_time!r}")

    @classmethod
    def from_mapping(cls, mapping) -> "KinematicParams":
        """Build from a ``key -> value`` mapping; unknown keys are rejected."""
        known = set(cls.__dataclass_fields__)
        unknown = set(mapping) - known
        if unknown:
            raise ParameterError(f"unknown kinematic keys: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in mapping.items()})

    def horizontal_time(self, columns: int) -> float:
        return axis_time(columns, self.cell_width, self.accel_x, self.vmax_x)

    def vertical_time(self, layers: int) -> float:
        return axis_time(layers, self.cell_height, self.accel_y, self.vmax_y)


@dataclass(frozen=True, order=True)
class Position:
    """A storage slot or gate location as ``(row, layer, column)``, 1-based."""

    row: int
    layer: int
    column: int

    def __post_init__(self):
        if not (1 <= self.row <= ROWS and 1 <= self.layer <= LAYERS and 1 <= self.column <= COLUMNS):
            raise DomainError(
                f"position {tuple(self)} outside the {ROWS}x{LAYERS}x{COLUMNS} warehouse"
            )

    def __iter__(self):
        return iter((self.row, self.layer, self.column))

    def __str__(self):
        return f"({self.row}-{self.layer}-{self.column})"


def peak_time(accel: float, vmax: float) -> float:
    """Duration of an accelerate-to-``vmax``-then-brake manoeuvre."""
    _check_positive(accel=accel, vmax=vmax)
    return 2.0 * vmax / accel


def critical_distance(accel: float, vmax: float) -> float:
    """Distance covered by the manoeuvre of :func:`peak_time`.

    Shorter hops never reach top speed and take the triangular-profile branch.
    """
    t = peak_time(accel, vmax)
    return 0.25 * accel * t * t


def axis_time(cells: int, cell_size: float, accel: float, vmax: float) -> float:
    """Single-axis travel time over ``cells`` slots.

    Parameters
    ----------
    cells : int
        Number of slots travelled (absolute displacement).
    cell_size : float
        Slot width or height in metres.
    accel, vmax : float
        Axis acceleration (m/s^2) and top speed (m/s).

    Returns
    -------
    float
        Seconds; ``2*sqrt(d/a)`` up to the critical distance, otherwise the
        peak time plus cruising time for the remainder.
    """
    _check_positive(cell_size=cell_size, accel=accel, vmax=vmax)
    if cells < 0:
        raise DomainError(f"cells must be non-negative, got {cells}")
    d = cells * cell_size
    limit = critical_distance(accel, vmax)
    if d <= limit:
        return 2.0 * math.sqrt(d / accel)
    return peak_time(accel, vmax) + (d - limit) / vmax


def travel_time(origin: Position, target: Position, params: KinematicParams) -> float:
    # Both shelf rows face the same aisle, so a row change costs nothing.
    tx = params.horizontal_time(abs(target.column - origin.column))
    ty = params.vertical_time(abs(target.layer - origin.layer))
    return max(tx, ty)


class TimeMatrix:
    """Immutable lookup table of leg times by (layer, column) displacement.

    ``entries[e, u]`` is the time for a move of ``e`` layers and ``u`` columns.
    """

    def __init__(self, entries: np.ndarray):
        entries = np.array(entries, dtype=float)
        if entries.ndim != 2:
            raise ValueError("time matrix must be 2-D")
        entries.setflags(write=False)
        self._entries = entries

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def shape(self) -> tuple[int, int]:
        return self._entries.shape

    def __getitem__(self, key):
        return self._entries[key]

    def lookup(self, origin: Position, target: Position) -> float:
        return float(self._entries[abs(target.layer - origin.layer), abs(target.column - origin.column)])

    def to_csv(self, decimals: int = 6) -> str:
        """CSV text: header row of column displacements, one row per layer displacement."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["layer_diff"] + list(range(self.shape[1])))
        for e, row in enumerate(self._entries):
            writer.writerow([e] + [f"{v:.{decimals}f}" for v in row])
        return buf.getvalue()


def build_time_matrix(
    params: KinematicParams, layers: int = LAYERS, columns: int = COLUMNS
) -> TimeMatrix:
    tx = np.array([params.horizontal_time(u) for u in range(columns)])
    ty = np.array([params.vertical_time(e) for e in range(layers)])
    return TimeMatrix(np.maximum(ty[:, None], tx[None, :]))


def task_time(leg0: float, leg1: float, params: KinematicParams) -> float:
    """Time for one task: approach leg, carry leg, plus pick and release."""
    if leg0 < 0 or leg1 < 0:
        raise DomainError(f"leg times must be non-negative, got {leg0}, {leg1}")
    return leg0 + leg1 + 2.0 * params.handling_time


def schedule_time(task_times: Iterable[float]) -> float:
    """Total of per-task times, correctly rounded (independent of order)."""
    times = list(task_times)
    for t in times:
        if t < 0:
            raise DomainError(f"task time must be non-negative, got {t}")
    return math.fsum(times)
