"""Command-line interface.

Commands
--------
simulate      integrate one parameter point, write a trajectory CSV
sweep         run an (r, k) grid, write the phase-diagram CSV
fixed-points  print roots, stability, growth rate and saturation entropy
collapse      rescale entropy curves over a list of probe rates
selfcheck     run the embedded invariant suite

All physical inputs are the dimensionless ratios r = Vt/Jt, k = Kt/Jt and
the detuning x, plus one reference rate Jt (default 1). Configuration is a
line-oriented ``key = value`` file with one section per command. Exit
codes: 0 ok, 1 selfcheck failure, 2 configuration error, 3 integration
error, 4 partial sweep failure.
"""

from __future__ import annotations

import argparse
import configparser
import datetime
import json
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import analytics, sweep as sweep_mod
from ._backend import backend_name
from .kinetics import (
    EffectiveCouplings,
    IntegrationError,
    IntegratorControls,
    integrate,
    trajectory_to_csv,
)
from .selfcheck import run_all
from .thermo import thermal_point

__all__ = ["main"]

EXIT_OK = 0
EXIT_SELFCHECK = 1
EXIT_CONFIG = 2
EXIT_INTEGRATION = 3
EXIT_PARTIAL_SWEEP = 4


class ConfigError(Exception):
    """Anything wrong with the configuration file or output paths."""


def _load_section(path: str, section: str) -> configparser.SectionProxy:
    cfg_path = Path(path)
    if not cfg_path.is_file():
        raise ConfigError(f"config file not found: {path}")
    parser = configparser.ConfigParser(inline_comment_prefixes=("#",))
    try:
        parser.read(cfg_path)
    except configparser.Error as exc:
        raise ConfigError(f"cannot parse {path}: {exc}") from exc
    if section not in parser:
        raise ConfigError(f"config file {path} has no [{section}] section")
    return parser[section]


def _get_float(sec: configparser.SectionProxy, key: str, default: Optional[float] = None) -> float:
    if key not in sec:
        if default is None:
            raise ConfigError(f"missing required key '{key}' in [{sec.name}]")
        return default
    try:
        return float(sec[key])
    except ValueError as exc:
        raise ConfigError(f"key '{key}' in [{sec.name}] is not a number: {sec[key]!r}") from exc


def _get_float_list(sec: configparser.SectionProxy, key: str) -> tuple[float, ...]:
    if key not in sec:
        raise ConfigError(f"missing required key '{key}' in [{sec.name}]")
    try:
        return tuple(float(tok) for tok in sec[key].split(",") if tok.strip())
    except ValueError as exc:
        raise ConfigError(f"key '{key}' in [{sec.name}] is not a number list: {sec[key]!r}") from exc


def _controls_from(sec: configparser.SectionProxy, t_max: float) -> IntegratorControls:
    stride = _get_float(sec, "sample_stride", default=math.nan)
    try:
        return IntegratorControls(
            t_max=t_max,
            rel_tol=_get_float(sec, "rel_tol", default=1e-9),
            abs_tol=_get_float(sec, "abs_tol", default=1e-12),
            max_step=_get_float(sec, "max_step", default=math.inf),
            sample_stride=None if math.isnan(stride) else stride,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _check_out(out: Optional[str], required: bool) -> Optional[Path]:
    if out is None:
        if required:
            raise ConfigError("--out is required for this command")
        return None
    out_path = Path(out)
    if not out_path.parent.is_dir():
        raise ConfigError(f"output directory does not exist: {out_path.parent}")
    return out_path


def _write_manifest(out_path: Path, command: str, config_echo: dict, failures: int) -> None:
    manifest = {
        "command": command,
        "backend": backend_name(),
        "config": config_echo,
        "failures": failures,
        "written_utc": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    manifest_path = out_path.with_name(out_path.name + ".manifest.json")
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")


def _physics_echo(sec: configparser.SectionProxy) -> dict:
    return {key: sec[key] for key in sec}


def cmd_simulate(config: str, out: Optional[str]) -> int:
    sec = _load_section(config, "simulate")
    out_path = _check_out(out, required=True)
    x = _get_float(sec, "x")
    r = _get_float(sec, "r")
    k = _get_float(sec, "k")
    Jt = _get_float(sec, "Jt", default=1.0)
    try:
        thermal = thermal_point(x)
        couplings = EffectiveCouplings(Jt=Jt, Vt=r * Jt, Kt=k * Jt)
        t_max = _get_float(sec, "t_max", default=math.nan)
        if math.isnan(t_max):
            t_max = sweep_mod.cell_controls(r, k, thermal, Jt).t_max
        controls = _controls_from(sec, t_max)
        f3_init = _get_float(sec, "f3_init", default=math.nan)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc

    report = analytics.classify(couplings, thermal)
    try:
        traj = integrate(couplings, thermal, controls, None if math.isnan(f3_init) else f3_init)
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION

    out_path.write_text(trajectory_to_csv(traj))
    _write_manifest(out_path, "simulate", _physics_echo(sec), failures=0)
    plateau = "none" if traj.plateau is None else f"{traj.plateau.value:.6g} at t={traj.plateau.time:.6g}"
    if couplings.probe_limit_warning:
        print("warning: Kt is not small against Jt + Vt; analytic formulas assume the probe limit")
    print(f"phase={report.phase} lyapunov={report.lyapunov:.6g} plateau={plateau}")
    print(f"wrote {out_path}")
    return EXIT_OK


def cmd_sweep(config: str, out: Optional[str], jobs: int) -> int:
    sec = _load_section(config, "sweep")
    out_path = _check_out(out, required=True)
    try:
        t_max = _get_float(sec, "t_max", default=math.nan)
        controls = None if math.isnan(t_max) else _controls_from(sec, t_max)
        cfg = sweep_mod.SweepConfig(
            r_grid=_get_float_list(sec, "r_grid"),
            k_grid=_get_float_list(sec, "k_grid"),
            x=_get_float(sec, "x"),
            Jt=_get_float(sec, "Jt", default=1.0),
            controls=controls,
        )
        thermal_point(cfg.x)  # validate early
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc

    rows = sweep_mod.run_sweep(cfg, jobs=jobs)
    out_path.write_text(sweep_mod.sweep_to_table(rows))
    manifest = sweep_mod.sweep_manifest(cfg, rows)
    manifest["config_raw"] = _physics_echo(sec)
    failures = int(manifest["failures"])
    _write_manifest(out_path, "sweep", manifest, failures=failures)
    print(f"{len(rows)} cells, {failures} failures; wrote {out_path}")
    return EXIT_PARTIAL_SWEEP if failures else EXIT_OK


def cmd_fixed_points(config: str, out: Optional[str]) -> int:
    sec = _load_section(config, "fixed-points")
    out_path = _check_out(out, required=False)
    try:
        x = _get_float(sec, "x")
        r = _get_float(sec, "r")
        k = _get_float(sec, "k", default=0.0)
        Jt = _get_float(sec, "Jt", default=1.0)
        thermal = thermal_point(x)
        couplings = EffectiveCouplings(Jt=Jt, Vt=r * Jt, Kt=k * Jt)
        report = analytics.classify(couplings, thermal)
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc

    print(f"phase={report.phase} r={report.r:.6g} x={report.x:.6g}")
    for fp in report.fixed_points.roots:
        print(f"  c={fp.c:.6g} f3={fp.c * thermal.w2b:.6g} {fp.stability} (drhs/df3={fp.derivative:.6g})")
    print(f"lyapunov={report.lyapunov:.6g}")
    print(f"saturation_entropy={report.saturation:.6g}")
    if out_path is not None:
        record = analytics.phase_report_record(report)
        header = ",".join(record)
        values = ",".join(
            v if isinstance(v, str) else f"{v:.17g}" for v in record.values()
        )
        out_path.write_text(header + "\n" + values + "\n")
        _write_manifest(out_path, "fixed-points", _physics_echo(sec), failures=0)
    return EXIT_OK


def cmd_collapse(config: str, out: Optional[str]) -> int:
    sec = _load_section(config, "collapse")
    out_path = _check_out(out, required=True)
    try:
        x = _get_float(sec, "x")
        r = _get_float(sec, "r")
        Jt = _get_float(sec, "Jt", default=1.0)
        k_list = _get_float_list(sec, "k_list")
        thermal = thermal_point(x)
        base = EffectiveCouplings(Jt=Jt, Vt=r * Jt, Kt=0.0)
        kappa = analytics.lyapunov_exponent(base, thermal)
        if kappa <= 0.0:
            raise ConfigError("collapse requires the scrambling phase (r < 2)")
    except (ValueError, ConfigError) as exc:
        raise ConfigError(str(exc)) from exc

    trajectories = []
    try:
        for k in k_list:
            t_max = _get_float(sec, "t_max", default=math.nan)
            if math.isnan(t_max):
                t_max = sweep_mod.cell_controls(r, k, thermal, Jt).t_max
            controls = _controls_from(sec, t_max)
            couplings = EffectiveCouplings(Jt=Jt, Vt=r * Jt, Kt=k * Jt)
            trajectories.append(integrate(couplings, thermal, controls))
    except IntegrationError as exc:
        print(f"integration failed: {exc}", file=sys.stderr)
        return EXIT_INTEGRATION

    try:
        result = analytics.collapse(trajectories, base, thermal)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc

    header = "x,g_mean," + ",".join(f"g_k{k:g}" for k in k_list)
    lines = [header]
    for i in range(len(result.x)):
        cols = [f"{result.x[i]:.17g}", f"{result.g[i]:.17g}"]
        cols += [f"{result.curves[j, i]:.17g}" for j in range(len(k_list))]
        lines.append(",".join(cols))
    out_path.write_text("\n".join(lines) + "\n")
    _write_manifest(out_path, "collapse", _physics_echo(sec), failures=0)
    print(f"collapse_score={result.score:.6g}; wrote {out_path}")
    return EXIT_OK


def cmd_selfcheck() -> int:
    failed = run_all(report=print)
    if failed:
        print(f"selfcheck FAILED: {', '.join(failed)}")
        return EXIT_SELFCHECK
    print("selfcheck passed")
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="entrokin",
        description="Entropy-accumulation kinetics across the scrambling transition",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("simulate", "sweep", "fixed-points", "collapse"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the key = value config file")
        p.add_argument("--out", default=None, help="output data file")
        if name == "sweep":
            p.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    sub.add_parser("selfcheck")
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "simulate":
            return cmd_simulate(args.config, args.out)
        if args.command == "sweep":
            return cmd_sweep(args.config, args.out, args.jobs)
        if args.command == "fixed-points":
            return cmd_fixed_points(args.config, args.out)
        if args.command == "collapse":
            return cmd_collapse(args.config, args.out)
        return cmd_selfcheck()
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
