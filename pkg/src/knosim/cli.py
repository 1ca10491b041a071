"""Command-line experiment runner.

Subcommands: ``simulate`` (protocol from the config), ``sweep`` (Chern number
vs chi), ``wigner`` (tomography snapshots along the counterdiabatic ramp) and
``validate`` (resolve and sanity-check a configuration without running).

Configurations are JSON files with a strict key schema, or one of the
built-in preset names (``fig1``, ``fig2-4``). Everything is deterministic:
identical configs produce byte-identical outputs. The output directory can
also be set through the KNOSIM_OUT environment variable.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict, dataclass, field, replace
from importlib import metadata
from pathlib import Path

import numpy as np

from . import dynamics, fock, topology, wigner as wigner_mod
from .errors import ConfigError, KnosimError
from .model import ModelParams
from .presets import PRESETS

SNAPSHOT_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)
FLOAT_FMT = "{:.17g}"

_MODEL_KEYS = (
    "kerr", "pump", "omega0", "delta_z", "delta_0", "tau",
    "schedule", "phi", "hx_prefactor", "dim",
)
_RUN_KEYS = ("protocol", "sta", "initial", "n_steps", "n_samples")
_IO_KEYS = ("out", "format", "jobs", "chi_values", "half_width", "n_points", "preset")
_ALL_KEYS = set(_MODEL_KEYS) | set(_RUN_KEYS) | set(_IO_KEYS)

_PROTOCOLS = ("linear_response", "sta", "sweep", "wigner_movie")


@dataclass
class ExperimentConfig:
    protocol: str
    params: ModelParams
    sta: bool
    initial: str
    n_steps: int
    n_samples: int
    chi_values: list[float] = field(default_factory=list)
    out: str = "out"
    format: str = "csv"
    jobs: int = 1
    half_width: float = 4.5
    n_points: int = 81
    source: dict = field(default_factory=dict)


def _load_raw(spec: str) -> dict:
    if spec in PRESETS:
        return dict(PRESETS[spec])
    path = Path(spec)
    if not path.exists():
        raise ConfigError(f"{spec!r} is neither a preset ({', '.join(PRESETS)}) nor a file")
    try:
        raw = json.loads(path.read_text())
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
    if not isinstance(raw, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    if "preset" in raw:
        base = raw.pop("preset")
        if base not in PRESETS:
            raise ConfigError(f"{path}: unknown preset {base!r}")
        raw = {**PRESETS[base], **raw}
    return raw


def resolve_config(spec: str, overrides: dict | None = None) -> ExperimentConfig:
    raw = _load_raw(spec)
    unknown = set(raw) - _ALL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    raw.update(overrides or {})

    protocol = raw.get("protocol")
    if protocol not in _PROTOCOLS:
        raise ConfigError(f"protocol must be one of {_PROTOCOLS}, got {protocol!r}")
    missing = [k for k in ("kerr", "pump", "omega0", "delta_z", "tau") if k not in raw]
    if missing:
        raise ConfigError(f"missing required keys: {', '.join(missing)}")

    params = ModelParams(**{k: raw[k] for k in _MODEL_KEYS if k in raw})
    out = raw.get("out") or os.environ.get("KNOSIM_OUT", "out")
    fmt = raw.get("format", "csv")
    if fmt not in ("csv", "json"):
        raise ConfigError(f"format must be csv or json, got {fmt!r}")
    initial = raw.get("initial", "ket0")
    if initial not in ("ket0", "ket1"):
        raise ConfigError(f"initial must be ket0 or ket1, got {initial!r}")

    cfg = ExperimentConfig(
        protocol=protocol,
        params=params,
        sta=bool(raw.get("sta", protocol in ("sta", "wigner_movie"))),
        initial=initial,
        n_steps=int(raw.get("n_steps") or dynamics.default_n_steps(params)),
        n_samples=int(raw.get("n_samples", 401)),
        chi_values=[float(c) for c in raw.get("chi_values", [])],
        out=str(out),
        format=fmt,
        jobs=int(raw.get("jobs", 1)),
        half_width=float(raw.get("half_width", 4.5)),
        n_points=int(raw.get("n_points", 81)),
        source=raw,
    )
    return cfg


# ---------------------------------------------------------------- output ---

def _fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (float, np.floating)):
        return FLOAT_FMT.format(float(x))
    return str(x)


def _write_table(path: Path, header: list[str], rows) -> None:
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    path.write_text("\n".join(lines) + "\n")


def _write_json(path: Path, obj) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")


def _table(path_base: Path, fmt: str, header: list[str], rows) -> None:
    if fmt == "csv":
        _write_table(path_base.with_suffix(".csv"), header, rows)
    else:
        cols = list(zip(*rows)) if rows else [[] for _ in header]
        obj = {h: [v if not isinstance(v, (float, np.floating)) else float(v) for v in col]
               for h, col in zip(header, cols)}
        _write_json(path_base.with_suffix(".json"), obj)


def _edge_population(state: fock.StateVector | None) -> float | None:
    if state is None:
        return None
    return float(np.sum(np.abs(state.amplitudes[-3:]) ** 2))


def _manifest(cfg: ExperimentConfig, extra: dict) -> dict:
    p = cfg.params
    try:
        version = metadata.version("knosim")
    except metadata.PackageNotFoundError:  # pragma: no cover
        version = "unknown"
    man = {
        "knosim_version": version,
        "protocol": cfg.protocol,
        "params": asdict(p),
        "derived": {
            "alpha0": p.alpha0,
            "chi": p.chi,
            "stabilizer_ratio": p.stabilizer_ratio,
        },
        "initial": cfg.initial,
        "sta": cfg.sta,
        "n_steps": cfg.n_steps,
        "n_samples": cfg.n_samples,
        "format": cfg.format,
    }
    man.update(extra)
    return man


def _traj_rows(traj: dynamics.Trajectory):
    return zip(traj.t, traj.theta, traj.sx, traj.sy, traj.sz, traj.pop, traj.norm)


TRAJ_HEADER = ["t_us", "theta_rad", "sx", "sy", "sz", "pop", "norm"]


# ------------------------------------------------------------- protocols ---

def run_experiment(cfg: ExperimentConfig) -> dict:
    """Run the configured protocol; returns the manifest. File writes happen
    in one serial phase after all computation."""
    outdir = Path(cfg.out)
    writes = []  # (basename, header, rows) or ("json", name, obj)

    if cfg.protocol in ("linear_response", "sta"):
        traj = dynamics.run(
            cfg.params, initial=cfg.initial, sta=cfg.sta,
            n_steps=cfg.n_steps, n_samples=cfg.n_samples,
        )
        writes.append(("trajectory", TRAJ_HEADER, list(_traj_rows(traj))))
        if cfg.protocol == "linear_response":
            series = topology.berry_curvature(traj)
            chern = topology.chern_linear_response(series, traj)
            writes.append(("curvature", ["theta_rad", "b_theta"],
                           list(zip(series.theta, series.b_theta))))
        else:
            tq = topology.theta_q_series(traj)
            chern = topology.chern_sta(tq, traj)
            writes.append(("theta_q", ["theta_rad", "theta_q_rad"], [tuple(r) for r in tq]))
        chern_obj = {
            "c1": chern.c1,
            "method": chern.method,
            "chi": chern.chi,
            "initial": chern.initial,
            "converged": traj.converged,
            "refine_diff": traj.refine_diff,
            "c1_quadrature": chern.c1_quadrature,
            "warning": chern.warning,
            "stabilizer_ratio": cfg.params.stabilizer_ratio,
        }
        writes.append(("json", "chern", chern_obj))
        extra = {
            "converged": traj.converged,
            "n_steps_used": traj.n_steps,
            "final_edge_population": _edge_population(traj.final_state),
        }

    elif cfg.protocol == "sweep":
        if not cfg.chi_values:
            raise ConfigError("sweep requires a non-empty chi_values list")
        sub = "sta" if cfg.sta else "linear_response"
        results = topology.sweep_chi(
            cfg.params, cfg.chi_values, protocol=sub, initial=cfg.initial,
            jobs=cfg.jobs, n_steps=cfg.n_steps, n_samples=cfg.n_samples,
        )
        rows = [
            (r.chi, r.c1, r.method, r.initial, r.converged, r.error or "ok")
            for r in results
        ]
        writes.append(("sweep", ["chi", "c1", "method", "initial", "converged", "status"], rows))
        extra = {"sweep_protocol": sub, "n_points": len(results)}

    elif cfg.protocol == "wigner_movie":
        snap_times = [f * cfg.params.tau for f in SNAPSHOT_FRACTIONS]
        traj = dynamics.run(
            cfg.params, initial=cfg.initial, sta=cfg.sta,
            n_steps=cfg.n_steps, n_samples=cfg.n_samples, snapshot_times=snap_times,
        )
        writes.append(("trajectory", TRAJ_HEADER, list(_traj_rows(traj))))
        for k, ts in enumerate(snap_times):
            grid = wigner_mod.wigner(traj.snapshots[ts], cfg.half_width, cfg.n_points)
            rows = [
                (re, im, grid.values[i, j], bool(grid.low_confidence[i, j]))
                for i, im in enumerate(grid.im_axis)
                for j, re in enumerate(grid.re_axis)
            ]
            writes.append((f"wigner_t{k}", ["re_alpha", "im_alpha", "w", "low_confidence"], rows))
        extra = {
            "converged": traj.converged,
            "snapshot_times_us": snap_times,
            "final_edge_population": _edge_population(traj.final_state),
        }
    else:  # pragma: no cover
        raise ConfigError(f"unhandled protocol {cfg.protocol!r}")

    manifest = _manifest(cfg, extra)

    outdir.mkdir(parents=True, exist_ok=True)
    for item in writes:
        if item[0] == "json":
            _write_json(outdir / f"{item[1]}.json", item[2])
        else:
            name, header, rows = item
            _table(outdir / name, cfg.format, header, rows)
    _write_json(outdir / "run-manifest.json", manifest)
    return manifest


def validate_config(cfg: ExperimentConfig) -> tuple[bool, list[str]]:
    """Static checks; returns (ok, report lines)."""
    p = cfg.params
    lines = []
    ok = True
    lines.append(f"protocol            {cfg.protocol}")
    for k, v in asdict(p).items():
        lines.append(f"{k:<19} {v}")
    lines.append(f"alpha0              {p.alpha0:.6f}")
    lines.append(f"chi                 {p.chi:.6f}")
    ratio = p.stabilizer_ratio
    lines.append(f"stabilizer_ratio    {ratio:.6f}")
    if ratio > 0.2:
        ok = False
        lines.append("FAIL stabilizer ratio exceeds 0.2")
    if not fock.coherent_truncation_ok(p.alpha0, p.dim):
        ok = False
        lines.append(
            f"FAIL truncation: need dim >= {p.alpha0**2 + 6 * p.alpha0 + 9:.0f} "
            f"for alpha0={p.alpha0:.3f}, got {p.dim}"
        )
    if cfg.protocol == "sweep" and not cfg.chi_values:
        ok = False
        lines.append("FAIL sweep requires chi_values")
    n_runs = max(1, len(cfg.chi_values)) if cfg.protocol == "sweep" else 1
    # crude per-step cost model: dense eigendecomposition ~ 2e-7 * dim^3 s
    est = 3 * cfg.n_steps * n_runs * 2e-7 * p.dim**3
    lines.append(f"estimated_runtime_s {est:.1f}")
    lines.append("OK" if ok else "INVALID")
    return ok, lines


# ------------------------------------------------------------------ main ---

def _add_common(sub: argparse.ArgumentParser):
    sub.add_argument("config", help="preset name or JSON config path")
    sub.add_argument("--chi", type=float, help="override delta_0 = chi * delta_z")
    sub.add_argument("--initial", choices=["ket0", "ket1"])
    sub.add_argument("--sta", choices=["on", "off"])
    sub.add_argument("--steps", type=int, dest="n_steps")
    sub.add_argument("--dim", type=int)
    sub.add_argument("--out")
    sub.add_argument("--format", choices=["csv", "json"])
    sub.add_argument("--jobs", type=int)


def _overrides(args: argparse.Namespace) -> dict:
    ov = {}
    for k in ("initial", "n_steps", "dim", "out", "format", "jobs"):
        v = getattr(args, k, None)
        if v is not None:
            ov[k] = v
    if getattr(args, "sta", None) is not None:
        ov["sta"] = args.sta == "on"
    if getattr(args, "chis", None):
        ov["chi_values"] = [float(c) for c in args.chis.split(",")]
    return ov


def _apply_chi(cfg: ExperimentConfig, args: argparse.Namespace) -> ExperimentConfig:
    if getattr(args, "chi", None) is not None:
        cfg.params = replace(cfg.params, delta_0=args.chi * cfg.params.delta_z)
    return cfg


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="knosim", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run the protocol named in the config")
    _add_common(sim)

    sw = sub.add_parser("sweep", help="Chern number vs chi")
    _add_common(sw)
    sw.add_argument("--chis", help="comma-separated chi values")

    wg = sub.add_parser("wigner", help="Wigner snapshots along the ramp")
    _add_common(wg)

    va = sub.add_parser("validate", help="resolve and check a config")
    _add_common(va)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = resolve_config(args.config, _overrides(args))
        cfg = _apply_chi(cfg, args)
        if args.command == "sweep":
            cfg.protocol = "sweep"
        elif args.command == "wigner":
            cfg.protocol = "wigner_movie"
            cfg.sta = True

        if args.command == "validate":
            ok, lines = validate_config(cfg)
            print("\n".join(lines))
            return 0 if ok else 1

        manifest = run_experiment(cfg)
        print(json.dumps({k: manifest[k] for k in ("protocol", "converged")
                          if k in manifest}))
        print(f"wrote outputs to {cfg.out}")
        return 0
    except KnosimError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
