"""Named kinetic presets and long-horizon pattern runs.

Initial data is the near-homogeneous state u = 1, v = 0 with the center
box [0.4, 0.6]^2 seeded to (u, v) = (0.5, 0.25); cell membership is by
cell center. Default diffusivities d_u = 1.6e-5, d_v = d_u / 2.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .field import CellField
from .imex import GrayScottParams, MonitorReport, RunConfig, SimState, run
from .mesh import UniformMesh


class UnknownPreset(ValueError):
    """No preset registered under that name."""


@dataclass(frozen=True)
class PatternPreset:
    name: str
    F: float
    k: float
    snapshot_times: tuple


SNAPSHOT_TIMES = (100.0, 500.0, 1000.0, 2000.0)

_PRESETS = {
    "labyrinthine": (0.037, 0.060),
    "moving_spots": (0.014, 0.054),
    "pulsating_spots": (0.025, 0.060),
}

SEED_BOX = (0.4, 0.6)
SEED_U = 0.5
SEED_V = 0.25
DEFAULT_D_U = 1.6e-5


def preset_names() -> list:
    return sorted(_PRESETS)


def preset(name: str) -> PatternPreset:
    """Look up a preset by name; raises UnknownPreset."""
    try:
        F, k = _PRESETS[name]
    except KeyError:
        raise UnknownPreset(
            f"unknown preset {name!r}; have {preset_names()}") from None
    return PatternPreset(name, F, k, SNAPSHOT_TIMES)


def pattern_initial_condition(mesh: UniformMesh) -> tuple[CellField, CellField]:
    """Seeded near-homogeneous initial state on a unit-square mesh."""
    if (mesh.origin != (0.0, 0.0)
            or abs(mesh.nx * mesh.h - 1.0) > 1e-12
            or abs(mesh.ny * mesh.h - 1.0) > 1e-12):
        raise ValueError("pattern initial condition expects the unit square")
    lo, hi = SEED_BOX
    inside = ((mesh.xc >= lo) & (mesh.xc <= hi)
              & (mesh.yc >= lo) & (mesh.yc <= hi))
    u = np.ones(mesh.n_cells)
    v = np.zeros(mesh.n_cells)
    u[inside] = SEED_U
    v[inside] = SEED_V
    return CellField(mesh, u), CellField(mesh, v)


class Snapshot(NamedTuple):
    t: float
    u: CellField
    v: CellField


def run_pattern(pat: PatternPreset, mesh: UniformMesh, dt: float = 1.0,
                d_u: float = DEFAULT_D_U, d_v: float | None = None,
                t_end: float | None = None, snapshot_times=None,
                observers: tuple = ()) -> tuple[list, MonitorReport]:
    """Run a preset from the seeded state, capturing snapshots.

    Snapshot times default to the preset's times clipped to t_end, with
    t_end always included; each must be an integer multiple of dt. Returns
    the snapshots (deep copies) and the monitor report of the whole run.
    """
    if d_v is None:
        d_v = d_u / 2.0
    params = GrayScottParams(d_u, d_v, pat.F, pat.k)
    if snapshot_times is None:
        t_end = max(pat.snapshot_times) if t_end is None else float(t_end)
        times = sorted({t for t in pat.snapshot_times if t <= t_end + 1e-9}
                       | {t_end})
    else:
        times = sorted(float(t) for t in snapshot_times)
        t_end = times[-1] if t_end is None else float(t_end)
        if times[-1] > t_end + 1e-9:
            raise ValueError("snapshot time beyond t_end")
    for ts in times:
        ratio = ts / dt
        if ts < 0.0 or abs(ratio - round(ratio)) > 1e-9 * max(ratio, 1.0):
            raise ValueError(f"snapshot time {ts} not a multiple of dt={dt}")

    u0, v0 = pattern_initial_condition(mesh)
    state = SimState(0, 0.0, u0, v0)
    snaps: list = []
    pending = list(times)

    def capture(s: SimState) -> None:
        while pending and s.t >= pending[0] - 1e-9 * max(pending[0], 1.0):
            pending.pop(0)
            snaps.append(Snapshot(s.t, s.u.copy(), s.v.copy()))

    capture(state)  # a t=0 snapshot, if requested
    cfg = RunConfig(dt=dt, T=t_end)
    _, report = run(state, params, cfg, observers=(capture, *observers))
    return snaps, report
