"""Semi-implicit time stepping: explicit kinetics, implicit diffusion.

One step advances both species from the same (u^n, v^n):

    (h^2 + dt*d_u*stiffness) u^{n+1} = h^2 (u^n + dt f(u^n, v^n) + dt S_u(t^n))
    (h^2 + dt*d_v*stiffness) v^{n+1} = h^2 (v^n + dt g(u^n, v^n) + dt S_v(t^n))

with f(u, v) = -u v^2 + F (1 - u) and g(u, v) = u v^2 - (F + k) v. Optional
source callables (t, x, y) are sampled at cell centers at the old time.
Monitors report bound violations and track an energy ledger; they never
modify the solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from .diffusion import ImplicitDiffusionOperator, solve
from .field import CellField, grad_form_h, inner_h


@dataclass(frozen=True)
class GrayScottParams:
    """Diffusivities and kinetic rates. d_u, d_v > 0; F, k >= 0."""

    d_u: float
    d_v: float
    F: float
    k: float

    def __post_init__(self):
        if self.d_u <= 0.0 or self.d_v <= 0.0:
            raise ValueError(f"need positive diffusivities, got "
                             f"d_u={self.d_u}, d_v={self.d_v}")
        if self.F < 0.0 or self.k < 0.0:
            raise ValueError(f"need F, k >= 0, got F={self.F}, k={self.k}")


def reaction_f(u, v, F):
    """Kinetic rate for u: -u v^2 + F (1 - u)."""
    return -u * v * v + F * (1.0 - u)


def reaction_g(u, v, F, k):
    """Kinetic rate for v: u v^2 - (F + k) v."""
    return u * v * v - (F + k) * v


@dataclass
class SimState:
    """Step counter, time, and the two species fields."""

    n: int
    t: float
    u: CellField
    v: CellField


@dataclass
class RunConfig:
    """Time-stepping and monitoring knobs for run().

    T is the absolute terminal time. Bounds are reported against
    [0, 1] for u and [0, v_max] for v with the given slack.
    """

    dt: float
    T: float
    monitor_bounds: bool = True
    monitor_energy: bool = True
    bound_tolerance: float = 1e-12
    v_max: float = 1.0

    def __post_init__(self):
        if self.dt <= 0.0:
            raise ValueError(f"need dt > 0, got {self.dt}")
        if self.bound_tolerance < 0.0:
            raise ValueError("bound_tolerance must be non-negative")


@dataclass
class MonitorReport:
    """What the monitors saw over a run.

    bound_violations counts recorded states with any component outside its
    band by more than the tolerance. energy_max is max over recorded states
    of ||u||^2 + ||v||^2 (discrete L2). dissipation is the running sum of
    dt * (d_u |u|_H1^2 + d_v |v|_H1^2) after each step, one entry per step.
    """

    steps: int = 0
    shortened_final_step: bool = False
    min_u: float = math.inf
    max_u: float = -math.inf
    min_v: float = math.inf
    max_v: float = -math.inf
    bound_violations: int = 0
    energy_max: float = -math.inf
    dissipation: list = dc_field(default_factory=list)

    def record(self, state: SimState, params: GrayScottParams,
               config: RunConfig, step_dt: float | None = None) -> None:
        """Fold one state in; step_dt is None for the initial state."""
        if step_dt is not None:
            self.steps += 1
        if config.monitor_bounds:
            u, v = state.u.values, state.v.values
            mu, Mu = float(u.min()), float(u.max())
            mv, Mv = float(v.min()), float(v.max())
            self.min_u = min(self.min_u, mu)
            self.max_u = max(self.max_u, Mu)
            self.min_v = min(self.min_v, mv)
            self.max_v = max(self.max_v, Mv)
            tol = config.bound_tolerance
            if (mu < -tol or Mu > 1.0 + tol
                    or mv < -tol or Mv > config.v_max + tol):
                self.bound_violations += 1
        if config.monitor_energy:
            e = inner_h(state.u, state.u) + inner_h(state.v, state.v)
            self.energy_max = max(self.energy_max, e)
            if step_dt is not None:
                inc = step_dt * (
                    params.d_u * grad_form_h(state.u, state.u)
                    + params.d_v * grad_form_h(state.v, state.v))
                prev = self.dissipation[-1] if self.dissipation else 0.0
                self.dissipation.append(prev + inc)

    def merge(self, other: "MonitorReport") -> "MonitorReport":
        """Combine with the report of a continuation run."""
        out = MonitorReport(
            steps=self.steps + other.steps,
            shortened_final_step=self.shortened_final_step
            or other.shortened_final_step,
            min_u=min(self.min_u, other.min_u),
            max_u=max(self.max_u, other.max_u),
            min_v=min(self.min_v, other.min_v),
            max_v=max(self.max_v, other.max_v),
            bound_violations=self.bound_violations + other.bound_violations,
            energy_max=max(self.energy_max, other.energy_max),
        )
        base = self.dissipation[-1] if self.dissipation else 0.0
        out.dissipation = list(self.dissipation) + [base + d for d in
                                                    other.dissipation]
        return out


def _sample_source(src, t: float, mesh) -> np.ndarray:
    # midpoint sampling at cell centers; scalar returns broadcast fine
    return np.asarray(src(t, mesh.xc, mesh.yc), dtype=np.float64)


def step(state: SimState, params: GrayScottParams, dt: float,
         sources=None, solver_tol: float = 1e-10,
         solver_max_iter: int = 1000) -> SimState:
    """One semi-implicit step of size dt from state.

    sources, when given, is a pair (S_u, S_v) of callables (t, x, y)
    evaluated at the old time. Solver failures propagate as NoConvergence.
    """
    if dt <= 0.0:
        raise ValueError(f"need dt > 0, got {dt}")
    mesh = state.u.mesh
    h2 = mesh.h ** 2
    u, v = state.u.values, state.v.values

    fu = reaction_f(u, v, params.F)
    gv = reaction_g(u, v, params.F, params.k)
    if sources is not None:
        s_u, s_v = sources
        fu = fu + _sample_source(s_u, state.t, mesh)
        gv = gv + _sample_source(s_v, state.t, mesh)

    rhs_u = CellField(mesh, h2 * (u + dt * fu))
    rhs_v = CellField(mesh, h2 * (v + dt * gv))
    u_new = solve(ImplicitDiffusionOperator(mesh, params.d_u, dt), rhs_u,
                  tol=solver_tol, max_iter=solver_max_iter)
    v_new = solve(ImplicitDiffusionOperator(mesh, params.d_v, dt), rhs_v,
                  tol=solver_tol, max_iter=solver_max_iter)
    return SimState(state.n + 1, state.t + dt, u_new, v_new)


def run(initial: SimState, params: GrayScottParams, config: RunConfig,
        sources=None, observers=()) -> tuple[SimState, MonitorReport]:
    """Advance from initial to t = config.T with uniform steps config.dt.

    When T - initial.t is not an integer multiple of dt, the last step is
    shortened to land on T exactly (flagged in the report). Step times are
    assigned as initial.t + n*dt rather than accumulated. Observers are
    called after every step and must not mutate the state.
    """
    span = config.T - initial.t
    if span <= 0.0:
        raise ValueError(f"terminal time {config.T} not ahead of "
                         f"state time {initial.t}")
    ratio = span / config.dt
    n_round = round(ratio)
    if n_round >= 1 and abs(ratio - n_round) <= 1e-9 * max(ratio, 1.0):
        n_full, shortened = n_round, False
    else:
        n_full, shortened = int(math.floor(ratio)), True

    report = MonitorReport()
    report.record(initial, params, config, step_dt=None)
    state = initial
    t0 = initial.t
    for i in range(n_full):
        state = step(state, params, config.dt, sources)
        state.t = config.T if (not shortened and i == n_full - 1) \
            else t0 + (i + 1) * config.dt
        report.record(state, params, config, step_dt=config.dt)
        for obs in observers:
            obs(state)
    if shortened:
        dt_last = config.T - state.t
        state = step(state, params, dt_last, sources)
        state.t = config.T
        report.shortened_final_step = True
        report.record(state, params, config, step_dt=dt_last)
        for obs in observers:
            obs(state)
    return state, report
