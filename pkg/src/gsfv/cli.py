"""Command-line front end and file output.

Study tables go to CSV with the header
h,dt,err_Linf_L2_u,err_Linf_L2_v,err_Linf_Linf_u,err_Linf_Linf_v,runtime_s
(interface tables prepend an eps column) and a final
``order,<slope per error column>`` row. Field snapshots are written both as
16-bit binary PGM images and as raw CSV value grids. Every run writes a
manifest.json echoing the configuration and monitor summary.

Exit codes: 0 success, 1 usage error, 2 numerical failure (solver
non-convergence or NaN), 3 I/O failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from dataclasses import asdict, dataclass

import numpy as np

from . import __version__
from .diffusion import NoConvergence
from .field import CellField
from .imex import GrayScottParams, MonitorReport
from .mesh import InvalidSize, NonSquareCells, build_mesh
from .mms import (DomainError, ErrorTable, SampleTimeUnreachable,
                  UnresolvableInterface, convergence_study, interface_study,
                  residual_check, stability_study, tanh_case, trig_case,
                  ERROR_COLUMNS)
from .patterns import UnknownPreset, preset, preset_names, run_pattern

CSV_HEADER = ("h,dt,err_Linf_L2_u,err_Linf_L2_v,"
              "err_Linf_Linf_u,err_Linf_Linf_v,runtime_s")
MANIFEST_NAME = "manifest.json"


class IoFailure(OSError):
    """Snapshot, table, or manifest could not be written or read."""


def write_field_snapshot(field: CellField, path: str, fmt: str = "pgm",
                         lo: float = 0.0, hi: float = 1.0,
                         comment: str | None = None) -> None:
    """Write a field as a 16-bit binary PGM image or a CSV value grid.

    PGM: values are clipped to [lo, hi] and scaled to 0..65535, rows written
    top-to-bottom (largest y first); a header comment carries the manifest
    reference. CSV: one row per mesh row in cell order (smallest y first),
    full double precision via repr, no comment rows.
    """
    m = field.mesh
    grid = field.values.reshape(m.ny, m.nx)
    try:
        if fmt == "pgm":
            span = hi - lo
            if span <= 0.0:
                raise ValueError(f"need hi > lo, got [{lo}, {hi}]")
            scaled = np.clip((grid - lo) / span, 0.0, 1.0)
            # round half up so 0.5 maps to 32768, not banker's 32767/32768 mix
            pix = np.floor(scaled * 65535.0 + 0.5).astype(">u2")
            header = f"P5\n# {comment or 'manifest: ' + MANIFEST_NAME}\n" \
                     f"{m.nx} {m.ny}\n65535\n"
            with open(path, "wb") as fh:
                fh.write(header.encode("ascii"))
                fh.write(np.flipud(pix).tobytes())
        elif fmt == "csv":
            with open(path, "w", encoding="ascii") as fh:
                for j in range(m.ny):
                    fh.write(",".join(repr(float(x)) for x in grid[j]))
                    fh.write("\n")
        else:
            raise ValueError(f"unknown snapshot format {fmt!r}")
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


def read_field_csv(path: str) -> np.ndarray:
    """Read a CSV value grid back as a (ny, nx) array, bit-exact."""
    try:
        with open(path, "r", encoding="ascii") as fh:
            rows = [[float(tok) for tok in line.strip().split(",")]
                    for line in fh if line.strip()]
    except OSError as e:
        raise IoFailure(f"cannot read {path}: {e}") from e
    return np.asarray(rows, dtype=np.float64)


def write_error_table(table: ErrorTable, path: str) -> None:
    """Write study rows as CSV with the pinned header and final order row.

    Interface tables (rows carrying eps) prepend an eps column to the
    header and data rows; the order row always has the four error-column
    slopes after the literal ``order``.
    """
    with_eps = any(r.eps is not None for r in table.rows)
    try:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(("eps," if with_eps else "") + CSV_HEADER + "\n")
            for r in table.rows:
                cells = [] if not with_eps else [repr(float(r.eps))]
                cells += [repr(float(r.h)), repr(float(r.dt))]
                cells += [repr(float(getattr(r, c))) for c in ERROR_COLUMNS]
                cells.append(f"{r.runtime_s:.6f}")
                fh.write(",".join(cells) + "\n")
            slopes = ",".join(f"{table.orders[c]:.6f}" for c in ERROR_COLUMNS)
            fh.write(f"order,{slopes}\n")
    except OSError as e:
        raise IoFailure(f"cannot write {path}: {e}") from e


@dataclass
class RunManifest:
    """Configuration echo, timestamps, monitor summary, output list."""

    command: str
    version: str
    created_utc: str
    config: dict
    monitors: dict | None
    outputs: list

    def write(self, out_dir: str) -> str:
        path = os.path.join(out_dir, MANIFEST_NAME)
        try:
            with open(path, "w", encoding="ascii") as fh:
                json.dump(asdict(self), fh, indent=2, sort_keys=True)
                fh.write("\n")
        except OSError as e:
            raise IoFailure(f"cannot write {path}: {e}") from e
        return path


def _monitor_summary(report: MonitorReport) -> dict:
    return {
        "steps": report.steps,
        "shortened_final_step": report.shortened_final_step,
        "min_u": report.min_u, "max_u": report.max_u,
        "min_v": report.min_v, "max_v": report.max_v,
        "bound_violations": report.bound_violations,
        "energy_max": report.energy_max,
        "dissipation_total": report.dissipation[-1]
        if report.dissipation else 0.0,
    }


def _manifest(command: str, config: dict, monitors: dict | None,
              outputs: list) -> RunManifest:
    created = time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime())
    return RunManifest(command, __version__, created, config, monitors,
                       list(outputs))


def _ensure_out_dir(path: str) -> None:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise IoFailure(f"cannot create {path}: {e}") from e


def _load_config(path: str | None) -> dict:
    if not path:
        return {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as e:
        raise IoFailure(f"cannot read config {path}: {e}") from e
    if not isinstance(cfg, dict):
        raise ValueError(f"config {path} must hold a JSON object")
    return cfg


def _opt(args, cfg: dict, key: str, default):
    """Resolve one option: explicit flag > config file > default."""
    v = getattr(args, key, None)
    if v is not None:
        return v
    if key in cfg:
        return cfg[key]
    return default


def _floats(text) -> list:
    if isinstance(text, (list, tuple)):
        return [float(x) for x in text]
    return [float(tok) for tok in str(text).split(",") if tok.strip()]


def _ints(text) -> list:
    if isinstance(text, (list, tuple)):
        return [int(x) for x in text]
    return [int(tok) for tok in str(text).split(",") if tok.strip()]


def _sample_times(args, cfg: dict):
    """None means "let the study pick its T-dependent default"."""
    raw = _opt(args, cfg, "sample_times", None)
    return None if raw is None else _floats(raw)


def _fmt_t(t: float) -> str:
    return f"{t:g}"


def _params_from(args, cfg: dict) -> GrayScottParams:
    d_u = float(_opt(args, cfg, "d_u", 1.6e-5))
    d_v_opt = _opt(args, cfg, "d_v", None)
    d_v = float(d_v_opt) if d_v_opt is not None else d_u / 2.0
    F = float(_opt(args, cfg, "F", 0.037))
    k = float(_opt(args, cfg, "k", 0.060))
    return GrayScottParams(d_u, d_v, F, k)


def _case_from(args, cfg: dict, params: GrayScottParams):
    name = _opt(args, cfg, "case", "trig")
    if name == "trig":
        return trig_case(float(_opt(args, cfg, "a", 0.5)), params)
    if name == "tanh":
        return tanh_case(float(_opt(args, cfg, "eps", 0.1)), params,
                         variant=_opt(args, cfg, "variant", "centered"))
    raise ValueError(f"unknown case {name!r}; have trig, tanh")


def _cmd_simulate(args) -> int:
    cfg = _load_config(args.config)
    name = _opt(args, cfg, "preset", None)
    if name is None:
        raise ValueError("simulate needs --preset")
    pat = preset(name)
    nx = int(_opt(args, cfg, "nx", 128))
    dt = float(_opt(args, cfg, "dt", 1.0))
    t_end = float(_opt(args, cfg, "t_end", 2000.0))
    d_u = float(_opt(args, cfg, "d_u", 1.6e-5))
    d_v_opt = _opt(args, cfg, "d_v", None)
    d_v = float(d_v_opt) if d_v_opt is not None else d_u / 2.0
    snap_opt = _opt(args, cfg, "snapshots", None)
    snap_times = _floats(snap_opt) if snap_opt is not None else None
    with_v = bool(args.with_v or cfg.get("with_v", False))
    out = _opt(args, cfg, "out", None)
    if out is None:
        raise ValueError("simulate needs --out")
    _ensure_out_dir(out)

    mesh = build_mesh(nx, nx)
    snaps, report = run_pattern(pat, mesh, dt=dt, d_u=d_u, d_v=d_v,
                                t_end=t_end, snapshot_times=snap_times)

    outputs = []
    for snap in snaps:
        fields = [("u", snap.u)] + ([("v", snap.v)] if with_v else [])
        for label, fld in fields:
            base = f"{label}_t{_fmt_t(snap.t)}"
            write_field_snapshot(fld, os.path.join(out, base + ".pgm"), "pgm")
            write_field_snapshot(fld, os.path.join(out, base + ".csv"), "csv")
            outputs += [base + ".pgm", base + ".csv"]

    config_echo = {"preset": pat.name, "F": pat.F, "k": pat.k, "nx": nx,
                   "h": mesh.h, "dt": dt, "t_end": t_end, "d_u": d_u,
                   "d_v": d_v, "with_v": with_v,
                   "snapshot_times": [s.t for s in snaps],
                   "solver_tol": 1e-10, "bound_tolerance": 1e-12}
    man = _manifest("simulate", config_echo, _monitor_summary(report),
                    outputs)
    man.write(out)
    if report.bound_violations:
        print(f"warning: {report.bound_violations} monitored states "
              f"outside bounds (see {MANIFEST_NAME})", file=sys.stderr)
    if not all(s.u.is_finite() and s.v.is_finite() for s in snaps):
        print("error: non-finite field values", file=sys.stderr)
        return 2
    print(f"wrote {len(outputs)} snapshot files + {MANIFEST_NAME} to {out}")
    return 0


def _table_exit(table: ErrorTable, path: str) -> int:
    bad = any(not math.isfinite(getattr(r, c))
              for r in table.rows for c in ERROR_COLUMNS)
    for c in ERROR_COLUMNS:
        print(f"{c}: order {table.orders[c]:.4f}")
    print(f"wrote {path}")
    if bad:
        print("error: non-finite errors in table", file=sys.stderr)
        return 2
    return 0


def _cmd_mms_convergence(args) -> int:
    cfg = _load_config(args.config)
    params = _params_from(args, cfg)
    case = _case_from(args, cfg, params)
    sizes = _ints(_opt(args, cfg, "sizes", "16,32,64,128"))
    T = float(_opt(args, cfg, "t_end", 1.0))
    samples = _sample_times(args, cfg)
    out = _opt(args, cfg, "out", None)
    if out is None:
        raise ValueError("mms convergence needs --out")
    _ensure_out_dir(out)
    table = convergence_study(case, params, sizes, T=T, sample_times=samples)
    fname = f"convergence_{case.label.split('_')[0]}.csv"
    path = os.path.join(out, fname)
    write_error_table(table, path)
    man = _manifest("mms convergence",
                    {"case": case.label, "sizes": sizes, "T": T,
                     "params": asdict(params), **table.meta},
                    None, [fname])
    man.write(out)
    return _table_exit(table, path)


def _cmd_mms_stability(args) -> int:
    cfg = _load_config(args.config)
    params = _params_from(args, cfg)
    case = _case_from(args, cfg, params)
    nx = int(_opt(args, cfg, "nx", 128))
    ks = _floats(_opt(args, cfg, "multipliers", "1,2,4,16,32,64"))
    T = float(_opt(args, cfg, "t_end", 1.0))
    samples = _sample_times(args, cfg)
    out = _opt(args, cfg, "out", None)
    if out is None:
        raise ValueError("mms stability needs --out")
    _ensure_out_dir(out)
    table = stability_study(case, params, ks, h=1.0 / nx, T=T,
                            sample_times=samples)
    fname = f"stability_{case.label.split('_')[0]}.csv"
    path = os.path.join(out, fname)
    write_error_table(table, path)
    man = _manifest("mms stability",
                    {"case": case.label, "nx": nx, "multipliers": ks, "T": T,
                     "params": asdict(params), **table.meta},
                    None, [fname])
    man.write(out)
    return _table_exit(table, path)


def _cmd_mms_interface(args) -> int:
    cfg = _load_config(args.config)
    params = _params_from(args, cfg)
    eps_list = _floats(_opt(args, cfg, "eps_list", "0.2,0.1,0.05,0.025"))
    nx = int(_opt(args, cfg, "nx", 128))
    dt = float(_opt(args, cfg, "dt", 1.0 / 256.0))
    T = float(_opt(args, cfg, "t_end", 1.0))
    samples = _sample_times(args, cfg)
    variant = _opt(args, cfg, "variant", "centered")
    out = _opt(args, cfg, "out", None)
    if out is None:
        raise ValueError("mms interface needs --out")
    _ensure_out_dir(out)
    mesh = build_mesh(nx, nx)
    table = interface_study(params, eps_list, mesh, dt, T=T, variant=variant,
                            sample_times=samples)
    path = os.path.join(out, "interface_tanh.csv")
    write_error_table(table, path)
    man = _manifest("mms interface",
                    {"eps_list": eps_list, "nx": nx, "dt": dt, "T": T,
                     "params": asdict(params), **table.meta},
                    None, ["interface_tanh.csv"])
    man.write(out)
    return _table_exit(table, path)


def _cmd_mms_residual(args) -> int:
    cfg = _load_config(args.config)
    params = _params_from(args, cfg)
    case = _case_from(args, cfg, params)
    t = float(_opt(args, cfg, "t", 0.3))
    sizes = _ints(_opt(args, cfg, "sizes", "32,64"))
    defects = []
    for nx in sizes:
        mesh = build_mesh(nx, nx)
        du, dv = residual_check(case, t, mesh, mesh.h ** 2)
        defects.append((nx, du, dv))
        print(f"nx={nx:4d} defect_u={du:.6e} defect_v={dv:.6e}")
    for (n0, du0, dv0), (n1, du1, dv1) in zip(defects, defects[1:]):
        print(f"decay ratio {n0}->{n1}: "
              f"u x{du0 / du1:.2f}, v x{dv0 / dv1:.2f}")
    return 0


def _cmd_presets(args) -> int:
    for name in preset_names():
        p = preset(name)
        print(f"{p.name}: F={p.F}, k={p.k}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gsfv",
        description="Finite-volume Gray-Scott simulator and verification "
                    "harness")
    sub = ap.add_subparsers(dest="command")

    sim = sub.add_parser("simulate", help="run a pattern preset")
    sim.add_argument("--preset", choices=preset_names())
    sim.add_argument("--nx", type=int)
    sim.add_argument("--dt", type=float)
    sim.add_argument("--t-end", dest="t_end", type=float)
    sim.add_argument("--d-u", dest="d_u", type=float)
    sim.add_argument("--d-v", dest="d_v", type=float)
    sim.add_argument("--snapshots", help="comma-separated times")
    sim.add_argument("--with-v", dest="with_v", action="store_true",
                     help="also write v snapshots")
    sim.add_argument("--out")
    sim.add_argument("--config", help="JSON file with option defaults")
    sim.set_defaults(func=_cmd_simulate)

    mms = sub.add_parser("mms", help="manufactured-solution studies")
    msub = mms.add_subparsers(dest="mms_command")

    def common(p, with_case=True):
        if with_case:
            p.add_argument("--case", choices=("trig", "tanh"))
            p.add_argument("--a", type=float, help="trig amplitude")
            p.add_argument("--eps", type=float, help="tanh front width")
            p.add_argument("--variant", choices=("centered", "halfwave"))
        p.add_argument("--F", type=float)
        p.add_argument("--k", type=float)
        p.add_argument("--d-u", dest="d_u", type=float)
        p.add_argument("--d-v", dest="d_v", type=float)
        p.add_argument("--config", help="JSON file with option defaults")

    conv = msub.add_parser("convergence", help="dt = h^2 refinement sweep")
    common(conv)
    conv.add_argument("--sizes", help="comma-separated mesh sizes")
    conv.add_argument("--t-end", dest="t_end", type=float)
    conv.add_argument("--sample-times", dest="sample_times",
                      help="comma-separated error sample times")
    conv.add_argument("--out")
    conv.set_defaults(func=_cmd_mms_convergence)

    stab = msub.add_parser("stability", help="dt = k*h sweep on fixed mesh")
    common(stab)
    stab.add_argument("--nx", type=int)
    stab.add_argument("--multipliers", help="comma-separated k values")
    stab.add_argument("--t-end", dest="t_end", type=float)
    stab.add_argument("--sample-times", dest="sample_times",
                      help="comma-separated error sample times")
    stab.add_argument("--out")
    stab.set_defaults(func=_cmd_mms_stability)

    intf = msub.add_parser("interface", help="front-width sensitivity sweep")
    common(intf, with_case=False)
    intf.add_argument("--variant", choices=("centered", "halfwave"))
    intf.add_argument("--eps-list", dest="eps_list",
                      help="comma-separated widths, descending")
    intf.add_argument("--nx", type=int)
    intf.add_argument("--dt", type=float)
    intf.add_argument("--t-end", dest="t_end", type=float)
    intf.add_argument("--sample-times", dest="sample_times",
                      help="comma-separated error sample times")
    intf.add_argument("--out")
    intf.set_defaults(func=_cmd_mms_interface)

    resid = msub.add_parser("residual", help="source-term defect oracle")
    common(resid)
    resid.add_argument("--t", type=float)
    resid.add_argument("--sizes", help="comma-separated mesh sizes")
    resid.set_defaults(func=_cmd_mms_residual)

    pre = sub.add_parser("presets", help="list pattern presets")
    pre.set_defaults(func=_cmd_presets)
    return ap


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        code = e.code if isinstance(e.code, int) else 1
        return 0 if code == 0 else 1
    if not hasattr(args, "func"):
        parser.print_help()
        return 1
    try:
        return args.func(args)
    except NoConvergence as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except IoFailure as e:
        print(f"error: {e}", file=sys.stderr)
        return 3
    except (UnknownPreset, DomainError, SampleTimeUnreachable,
            UnresolvableInterface, InvalidSize, NonSquareCells,
            ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
