"""Parameter-grid orchestration: numeric plateaus against the analytic line.

Cells are pure tasks over (r, k) = (Vt/Jt, Kt/Jt); they may run in any
order or in parallel, but rows are always assembled in row-major grid
order, so repeated sweeps of one configuration are byte-identical.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import analytics
from .kinetics import (
    EffectiveCouplings,
    IntegrationError,
    IntegratorControls,
    integrate,
    plateau_window,
)
from .thermo import ThermalPoint, thermal_point

__all__ = [
    "SweepConfig",
    "SweepRow",
    "cell_controls",
    "run_sweep",
    "sweep_to_table",
    "sweep_manifest",
    "manifest_json",
]

# floor on the rate used to size t_max, in units of n2b*(1-n2b)*Jt; keeps
# the near-critical cells finite
_RATE_FLOOR = 0.05


@dataclass(frozen=True)
class SweepConfig:
    """Grid of coupling ratios to sweep at fixed detuning.

    ``controls=None`` sizes each cell individually so that the entropy
    plateau is reached and detected (see :func:`cell_controls`).
    """

    r_grid: tuple[float, ...]
    k_grid: tuple[float, ...]
    x: float
    Jt: float = 1.0
    controls: Optional[IntegratorControls] = None

    def __post_init__(self):
        object.__setattr__(self, "r_grid", tuple(float(v) for v in self.r_grid))
        object.__setattr__(self, "k_grid", tuple(float(v) for v in self.k_grid))
        for name, grid in (("r_grid", self.r_grid), ("k_grid", self.k_grid)):
            if len(grid) == 0:
                raise ValueError(f"{name} must be non-empty")
            if any(v < 0.0 or not np.isfinite(v) for v in grid):
                raise ValueError(f"{name} values must be finite and >= 0")
            if any(b <= a for a, b in zip(grid, grid[1:])):
                raise ValueError(f"{name} must be strictly increasing")
        if not (np.isfinite(self.Jt) and self.Jt > 0.0):
            raise ValueError(f"Jt={self.Jt} must be finite and > 0")


@dataclass(frozen=True)
class SweepRow:
    """One grid cell: numeric plateau next to the analytic prediction."""

    r: float
    k: float
    x: float
    phase: str
    lyapunov: float
    plateau_numeric: float
    saturation_analytic: float
    t_sat: Optional[float]
    error: Optional[str] = None


def cell_controls(r: float, k: float, thermal: ThermalPoint, Jt: float) -> IntegratorControls:
    """Per-cell default controls.

    t_max covers the probe-seeded escape time ln(1/k)/|kappa| plus two
    plateau-detection windows; the rate is floored so the critical cell
    r = 2 stays finite.
    """
    nn = thermal.n2b * (1.0 - thermal.n2b)
    kappa = nn * (2.0 - r) * Jt
    rate = max(abs(kappa), _RATE_FLOOR * nn * Jt)
    window = plateau_window(thermal, Jt)
    t_max = (math.log(1.0 / max(k, 1e-12)) + 20.0) / rate + 2.0 * window
    return IntegratorControls(t_max=t_max)


def _run_cell(args: tuple[float, float, float, float, Optional[IntegratorControls]]) -> SweepRow:
    r, k, x, Jt, controls = args
    thermal = thermal_point(x)
    couplings = EffectiveCouplings(Jt=Jt, Vt=r * Jt, Kt=k * Jt)
    report = analytics.classify(couplings, thermal)
    if controls is None:
        controls = cell_controls(r, k, thermal, Jt)
    try:
        traj = integrate(couplings, thermal, controls)
    except IntegrationError as exc:
        return SweepRow(
            r=r, k=k, x=x, phase=report.phase, lyapunov=report.lyapunov,
            plateau_numeric=math.nan, saturation_analytic=report.saturation,
            t_sat=None, error=str(exc),
        )
    if traj.plateau is not None:
        plateau_numeric = traj.plateau.value
        t_sat: Optional[float] = traj.plateau.time
    else:
        # not settled within t_max; report the endpoint, leave t_sat open
        plateau_numeric = float(traj.entropy[-1])
        t_sat = None
    return SweepRow(
        r=r, k=k, x=x, phase=report.phase, lyapunov=report.lyapunov,
        plateau_numeric=plateau_numeric, saturation_analytic=report.saturation,
        t_sat=t_sat,
    )


def run_sweep(config: SweepConfig, jobs: int = 1) -> list[SweepRow]:
    """Run every (r, k) cell in row-major order and collect rows.

    Failed integrations produce rows carrying an error marker; the sweep
    always completes the remaining cells. ``jobs > 1`` fans the cells out
    to worker processes; results are assembled in grid order either way.
    """
    cells = [
        (r, k, config.x, config.Jt, config.controls)
        for r in config.r_grid
        for k in config.k_grid
    ]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(_run_cell, cells))
    return [_run_cell(cell) for cell in cells]


def sweep_to_table(rows: Sequence[SweepRow]) -> str:
    """CSV document with one line per row, in the given order."""
    lines = ["r,k,x,phase,lyapunov,plateau_numeric,saturation_analytic,t_sat"]
    for row in rows:
        t_sat = "" if row.t_sat is None else f"{row.t_sat:.17g}"
        lines.append(
            f"{row.r:.17g},{row.k:.17g},{row.x:.17g},{row.phase},"
            f"{row.lyapunov:.17g},{row.plateau_numeric:.17g},"
            f"{row.saturation_analytic:.17g},{t_sat}"
        )
    return "\n".join(lines) + "\n"


def sweep_manifest(config: SweepConfig, rows: Sequence[SweepRow]) -> dict[str, object]:
    """Machine-readable run record: config echo plus failure count."""
    failures = sum(1 for row in rows if row.error is not None)
    return {
        "r_grid": list(config.r_grid),
        "k_grid": list(config.k_grid),
        "x": config.x,
        "Jt": config.Jt,
        "controls": None if config.controls is None else {
            "t_max": config.controls.t_max,
            "rel_tol": config.controls.rel_tol,
            "abs_tol": config.controls.abs_tol,
            "max_step": config.controls.max_step
            if math.isfinite(config.controls.max_step)
            else "inf",
            "sample_stride": config.controls.sample_stride,
        },
        "cells": len(rows),
        "failures": failures,
        "errors": [
            {"r": row.r, "k": row.k, "message": row.error}
            for row in rows
            if row.error is not None
        ],
    }


def manifest_json(manifest: dict[str, object]) -> str:
    """Stable JSON encoding of a manifest."""
    return json.dumps(manifest, indent=2, sort_keys=True) + "\n"
