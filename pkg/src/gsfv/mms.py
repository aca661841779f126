"""Manufactured solutions and the verification studies built on them.

Each manufactured case carries closed-form fields u*, v* satisfying the
homogeneous Neumann boundary condition on the unit square, plus the source
terms that make them exact solutions of the forced system:

    S_u = du*/dt - d_u lap(u*) + u* v*^2 - F (1 - u*)
    S_v = dv*/dt - d_v lap(v*) - u* v*^2 + (F + k) v*

residual_check() verifies that consistency independently of the scheme, by
finite differences on the closed forms. error_norms() runs the scheme
against a case and reports max-over-samples discrete L2 and max errors.
The studies sweep mesh size, step multiplier, or interface width and fit
observed orders by least squares in log-log.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from .diffusion import NoConvergence
from .field import CellField, norm_l2_h, norm_linf, project
from .imex import GrayScottParams, RunConfig, SimState, reaction_f, reaction_g, run
from .mesh import UniformMesh, build_mesh

TWO_PI = 2.0 * math.pi


class DomainError(ValueError):
    """Case parameter outside its admissible range."""


class SampleTimeUnreachable(ValueError):
    """Sample times not ascending, outside (0, T], or incompatible with dt."""


class UnresolvableInterface(ValueError):
    """Interface width too thin for the mesh (eps < 2h)."""


@dataclass(frozen=True)
class ManufacturedCase:
    """Closed-form exact solution plus matching sources and parameters."""

    label: str
    params: GrayScottParams
    u_star: object  # callable (t, x, y)
    v_star: object
    S_u: object
    S_v: object


def trig_case(a: float, params: GrayScottParams) -> ManufacturedCase:
    """Smooth oscillating case: u* = 1 - a C, v* = 1/4 + (1/4) C with
    C = cos(2 pi x) cos(2 pi y) cos(2 pi t). Requires 0 < a < 1 so u* stays
    in (0, 1)."""
    if not 0.0 < a < 1.0:
        raise DomainError(f"need 0 < a < 1, got {a}")
    w = TWO_PI
    d_u, d_v, F, k = params.d_u, params.d_v, params.F, params.k

    def cc(x, y):
        return np.cos(w * x) * np.cos(w * y)

    def u_star(t, x, y):
        return 1.0 - a * cc(x, y) * np.cos(w * t)

    def v_star(t, x, y):
        return 0.25 + 0.25 * cc(x, y) * np.cos(w * t)

    def S_u(t, x, y):
        c = cc(x, y)
        u = 1.0 - a * c * np.cos(w * t)
        v = 0.25 + 0.25 * c * np.cos(w * t)
        # time derivative, then minus d_u * laplacian (each cosine factor
        # contributes -w^2, two space factors), then minus kinetics
        return (a * w * c * np.sin(w * t)
                - 2.0 * d_u * a * w * w * c * np.cos(w * t)
                + u * v * v - F * (1.0 - u))

    def S_v(t, x, y):
        c = cc(x, y)
        u = 1.0 - a * c * np.cos(w * t)
        v = 0.25 + 0.25 * c * np.cos(w * t)
        return (-0.25 * w * c * np.sin(w * t)
                + 0.5 * d_v * w * w * c * np.cos(w * t)
                - u * v * v + (F + k) * v)

    return ManufacturedCase("trig", params, u_star, v_star, S_u, S_v)


def _sech2(z):
    # overflow-safe sech^2 via exp(-2|z|)
    e = np.exp(-2.0 * np.abs(z))
    return 4.0 * e / (1.0 + e) ** 2


def tanh_case(eps: float, params: GrayScottParams, r00: float = 0.25,
              A: float = 0.25, lam: float = TWO_PI,
              variant: str = "centered") -> ManufacturedCase:
    """Moving-front case: u* = (1 + tanh(s/eps))/2, v* = 1 - u*, where
    s(t, x, y) = r0(t) - r(x, y) and r0(t) = r00 + A sin(lam t).

    variant selects the level-set function r:
      "centered": r = cos(2 pi (x - 1/2)) + cos(2 pi (y - 1/2))  (default)
      "halfwave": r = cos(pi x) + cos(pi y)
    Both have vanishing normal derivative on the unit-square boundary.
    """
    if eps <= 0.0:
        raise DomainError(f"need eps > 0, got {eps}")
    if variant == "centered":
        w = TWO_PI

        def r(x, y):
            return np.cos(w * (x - 0.5)) + np.cos(w * (y - 0.5))

        def grad_r_sq(x, y):
            return w * w * (np.sin(w * (x - 0.5)) ** 2
                            + np.sin(w * (y - 0.5)) ** 2)

        lap_factor = -w * w  # lap(r) = lap_factor * r
    elif variant == "halfwave":
        w = math.pi

        def r(x, y):
            return np.cos(w * x) + np.cos(w * y)

        def grad_r_sq(x, y):
            return w * w * (np.sin(w * x) ** 2 + np.sin(w * y) ** 2)

        lap_factor = -w * w
    else:
        raise DomainError(f"unknown variant {variant!r}")

    d_u, d_v, F, k = params.d_u, params.d_v, params.F, params.k

    def r0(t):
        return r00 + A * np.sin(lam * t)

    def u_star(t, x, y):
        return 0.5 * (1.0 + np.tanh((r0(t) - r(x, y)) / eps))

    def v_star(t, x, y):
        return 0.5 * (1.0 - np.tanh((r0(t) - r(x, y)) / eps))

    def _pieces(t, x, y):
        rr = r(x, y)
        th = (r0(t) - rr) / eps
        s2 = _sech2(th)
        tnh = np.tanh(th)
        # du*/dt and lap(u*) in closed form; v* = 1 - u* flips both signs
        dudt = s2 * (A * lam * np.cos(lam * t)) / (2.0 * eps)
        lap_u = (-s2 * tnh * grad_r_sq(x, y) / (eps * eps)
                 - s2 * (lap_factor * rr) / (2.0 * eps))
        u = 0.5 * (1.0 + tnh)
        v = 0.5 * (1.0 - tnh)
        return dudt, lap_u, u, v

    def S_u(t, x, y):
        dudt, lap_u, u, v = _pieces(t, x, y)
        return dudt - d_u * lap_u + u * v * v - F * (1.0 - u)

    def S_v(t, x, y):
        dudt, lap_u, u, v = _pieces(t, x, y)
        return -dudt + d_v * lap_u - u * v * v + (F + k) * v

    return ManufacturedCase(f"tanh_eps{eps:g}", params,
                            u_star, v_star, S_u, S_v)


def residual_check(case: ManufacturedCase, t: float, mesh: UniformMesh,
                   dt_fd: float) -> tuple[float, float]:
    """Max-abs defect of the case's sources against finite differences.

    Uses a centered time difference of width dt_fd and the 5-point Laplacian
    at cell centers (the closed forms are evaluable outside the domain, so no
    boundary treatment is needed). The defect is O(h^2 + dt_fd^2) when the
    sources are consistent with u*, v*; it does not involve the scheme.
    """
    if dt_fd <= 0.0:
        raise ValueError(f"need dt_fd > 0, got {dt_fd}")
    if t - dt_fd < 0.0:
        raise ValueError(f"need t - dt_fd >= 0, got t={t}, dt_fd={dt_fd}")
    X, Y = mesh.xc, mesh.yc
    h = mesh.h
    p = case.params
    u0 = np.asarray(case.u_star(t, X, Y), dtype=np.float64)
    v0 = np.asarray(case.v_star(t, X, Y), dtype=np.float64)

    def defect(w_star, d, kin, src):
        dw = (np.asarray(w_star(t + dt_fd, X, Y))
              - np.asarray(w_star(t - dt_fd, X, Y))) / (2.0 * dt_fd)
        lap = (np.asarray(w_star(t, X + h, Y)) + np.asarray(w_star(t, X - h, Y))
               + np.asarray(w_star(t, X, Y + h)) + np.asarray(w_star(t, X, Y - h))
               - 4.0 * np.asarray(w_star(t, X, Y))) / (h * h)
        res = dw - d * lap - kin - np.asarray(src(t, X, Y))
        return float(np.max(np.abs(res)))

    du = defect(case.u_star, p.d_u, reaction_f(u0, v0, p.F), case.S_u)
    dv = defect(case.v_star, p.d_v, reaction_g(u0, v0, p.F, p.k), case.S_v)
    return du, dv


@dataclass
class ErrorRow:
    """One study row: resolution, step, errors, wall time, optional eps."""

    h: float
    dt: float
    err_linf_l2_u: float
    err_linf_l2_v: float
    err_linf_linf_u: float
    err_linf_linf_v: float
    runtime_s: float
    eps: float | None = None

    def finite(self) -> bool:
        """True when all four error norms are finite (no blow-up)."""
        return all(math.isfinite(e) for e in (
            self.err_linf_l2_u, self.err_linf_l2_v,
            self.err_linf_linf_u, self.err_linf_linf_v))


ERROR_COLUMNS = ("err_linf_l2_u", "err_linf_l2_v",
                 "err_linf_linf_u", "err_linf_linf_v")


@dataclass
class ErrorTable:
    """Study rows plus least-squares observed orders per error column."""

    rows: list
    orders: dict
    meta: dict = dc_field(default_factory=dict)


def _validate_samples(sample_times, T: float) -> list:
    ts = [float(s) for s in sample_times]
    if not ts:
        raise SampleTimeUnreachable("no sample times given")
    prev = -math.inf
    for s in ts:
        if s <= prev:
            raise SampleTimeUnreachable(f"sample times not ascending: {ts}")
        prev = s
    if ts[0] < 0.0 or ts[-1] > T * (1.0 + 1e-12) + 1e-15:
        raise SampleTimeUnreachable(
            f"sample times must lie in [0, T={T}], got {ts}")
    return ts


def error_norms(case: ManufacturedCase, params: GrayScottParams,
                mesh: UniformMesh, dt: float, T: float,
                sample_times) -> ErrorRow:
    """Run the scheme against a case and measure errors at sample times.

    Initial data is the exact solution projected with the 3x3 Gauss rule;
    the same projection at each sample time is the comparison target, so the
    reported error is the scheme's and not the quadrature's. Sample times
    need not be multiples of dt: the run advances segment-wise with one
    shortened step per segment when needed. Returns the max over samples of
    the discrete L2 and max-norm errors per species, plus wall time.
    """
    times = _validate_samples(sample_times, T)
    t_start = time.perf_counter()
    u0 = project(mesh, lambda x, y: case.u_star(0.0, x, y), quad_order=3)
    v0 = project(mesh, lambda x, y: case.v_star(0.0, x, y), quad_order=3)
    state = SimState(0, 0.0, u0, v0)
    sources = (case.S_u, case.S_v)
    e_l2_u = e_l2_v = e_li_u = e_li_v = 0.0
    for ts in times:
        if ts > state.t + 1e-14:
            cfg = RunConfig(dt=dt, T=ts, monitor_bounds=False,
                            monitor_energy=False)
            state, _ = run(state, params, cfg, sources=sources)
        ex_u = project(mesh, lambda x, y: case.u_star(ts, x, y), quad_order=3)
        ex_v = project(mesh, lambda x, y: case.v_star(ts, x, y), quad_order=3)
        du = CellField(mesh, state.u.values - ex_u.values)
        dv = CellField(mesh, state.v.values - ex_v.values)
        e_l2_u = max(e_l2_u, norm_l2_h(du))
        e_l2_v = max(e_l2_v, norm_l2_h(dv))
        e_li_u = max(e_li_u, norm_linf(du))
        e_li_v = max(e_li_v, norm_linf(dv))
    runtime = time.perf_counter() - t_start
    return ErrorRow(mesh.h, dt, e_l2_u, e_l2_v, e_li_u, e_li_v, runtime)


def _worker_count(n_tasks: int, workers) -> int:
    if workers is not None:
        return max(1, min(int(workers), n_tasks))
    env = os.environ.get("GSFV_THREADS")
    cap = int(env) if env else (os.cpu_count() or 1)
    return max(1, min(cap, n_tasks))


def _map_ordered(fn, items, workers):
    n = _worker_count(len(items), workers)
    if n == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=n) as ex:
        return list(ex.map(fn, items))


def observed_orders(rows, x_values) -> dict:
    """Least-squares slope of log(err) vs log(x) per error column.

    Columns with fewer than two finite positive entries get nan.
    """
    out = {}
    lx_all = np.log(np.asarray(x_values, dtype=np.float64))
    for col in ERROR_COLUMNS:
        ys = np.asarray([getattr(r, col) for r in rows], dtype=np.float64)
        mask = np.isfinite(ys) & (ys > 0.0) & np.isfinite(lx_all)
        if mask.sum() < 2:
            out[col] = math.nan
            continue
        out[col] = float(np.polyfit(lx_all[mask], np.log(ys[mask]), 1)[0])
    return out


def default_sample_times(T: float, n: int = 10) -> list:
    """n evenly spaced sample times T/n, 2T/n, ..., T."""
    return [T * i / n for i in range(1, n + 1)]


def convergence_study(case: ManufacturedCase, params: GrayScottParams,
                      mesh_sizes, T: float = 1.0, sample_times=None,
                      workers=None) -> ErrorTable:
    """Refinement sweep with dt = h^2 on nx*nx unit-square meshes.

    Reported orders are slopes vs h^2: 1.0 means error ~ h^2 ~ dt.
    """
    sizes = [int(n) for n in mesh_sizes]
    if sorted(sizes) != sizes or len(set(sizes)) != len(sizes):
        raise ValueError(f"mesh sizes must be ascending, got {sizes}")
    samples = sample_times if sample_times is not None \
        else default_sample_times(T)

    def row_for(nx: int) -> ErrorRow:
        mesh = build_mesh(nx, nx)
        return error_norms(case, params, mesh, mesh.h ** 2, T, samples)

    rows = _map_ordered(row_for, sizes, workers)
    orders = observed_orders(rows, [r.h ** 2 for r in rows])
    meta = {"study": "convergence", "T": T, "sample_times": list(samples),
            "dt_rule": "h^2", "order_abscissa": "h^2"}
    return ErrorTable(rows, orders, meta)


def stability_study(case: ManufacturedCase, params: GrayScottParams,
                    multipliers, h: float = 1.0 / 128.0, T: float = 1.0,
                    sample_times=None, workers=None) -> ErrorTable:
    """Fixed mesh, dt = k*h for each multiplier k.

    Sample times must be integer multiples of every dt so no step is
    shortened (which would silently change the dt under test); defaults to
    {T/2, T}. Orders are slopes vs dt.
    """
    nx = round(1.0 / h)
    if abs(nx * h - 1.0) > 1e-12:
        raise ValueError(f"1/h must be an integer mesh size, got h={h}")
    ks = [float(k) for k in multipliers]
    if any(k <= 0 for k in ks):
        raise ValueError(f"multipliers must be positive, got {ks}")
    samples = sample_times if sample_times is not None else [T / 2.0, T]
    for k in ks:
        dt = k * h
        for s in samples:
            ratio = s / dt
            if abs(ratio - round(ratio)) > 1e-9 * max(ratio, 1.0):
                raise SampleTimeUnreachable(
                    f"sample {s} is not a multiple of dt={dt} (k={k})")

    mesh = build_mesh(nx, nx)

    def row_for(k: float) -> ErrorRow:
        # a blown-up run is a data point (NaN errors), not a crash
        try:
            return error_norms(case, params, mesh, k * h, T, samples)
        except NoConvergence:
            nan = math.nan
            return ErrorRow(mesh.h, k * h, nan, nan, nan, nan, math.nan)

    rows = _map_ordered(row_for, ks, workers)
    orders = observed_orders(rows, [r.dt for r in rows])
    meta = {"study": "stability", "T": T, "h": h, "multipliers": ks,
            "sample_times": list(samples), "order_abscissa": "dt"}
    return ErrorTable(rows, orders, meta)


def interface_study(params: GrayScottParams, eps_list, mesh: UniformMesh,
                    dt: float, T: float = 1.0, sample_times=None,
                    r00: float = 0.25, A: float = 0.25, lam: float = TWO_PI,
                    variant: str = "centered", workers=None) -> ErrorTable:
    """Front-width sweep on a fixed mesh and dt.

    Errors grow as eps shrinks; orders are slopes vs 1/eps (positive ~2 when
    the error scales like eps^-2). eps at or below 2h raises
    UnresolvableInterface.

    Sampling note: the front position r0 is lam-periodic (period 1 at the
    default lam = 2*pi). Sampling at whole periods (e.g. sample_times=[1.0])
    cancels the generic first-order source-quadrature lag, which otherwise
    dominates with an eps^-1 signature and hides the eps^-2 sensitivity.
    """
    epss = [float(e) for e in eps_list]
    if sorted(epss, reverse=True) != epss or len(set(epss)) != len(epss):
        raise ValueError(f"eps values must be descending, got {epss}")
    for e in epss:
        if e <= 2.0 * mesh.h:
            raise UnresolvableInterface(
                f"eps={e} at or below 2h={2.0 * mesh.h:g}; front not resolved")
    samples = sample_times if sample_times is not None \
        else default_sample_times(T)

    def row_for(e: float) -> ErrorRow:
        case = tanh_case(e, params, r00=r00, A=A, lam=lam, variant=variant)
        row = error_norms(case, params, mesh, dt, T, samples)
        row.eps = e
        return row

    rows = _map_ordered(row_for, epss, workers)
    orders = observed_orders(rows, [1.0 / r.eps for r in rows])
    meta = {"study": "interface", "T": T, "dt": dt, "h": mesh.h,
            "eps_list": epss, "sample_times": list(samples),
            "variant": variant, "order_abscissa": "1/eps"}
    return ErrorTable(rows, orders, meta)
