"""Closed-form results and trajectory diagnostics for the reduced flow.

In units of c = f3/w2b the drive-free flow is dc/dt = w^2*Jt*(c^3 - (r+1)*c + r)
with r = Vt/Jt, which factors exactly as (c - 1)*(c^2 + c - r). The root
c = 1 is the post-impulse thermal point; it trades stability with
c = (sqrt(1+4r) - 1)/2 at r = 2, which separates the scrambling phase
(r < 2, perturbations grow) from the dissipative phase (r > 2,
perturbations decay into the bath).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .kinetics import EffectiveCouplings, Trajectory
from .thermo import ThermalPoint

__all__ = [
    "PHASE_SCRAMBLING",
    "PHASE_DISSIPATIVE",
    "PHASE_CRITICAL",
    "FixedPoint",
    "FixedPointSet",
    "PhaseReport",
    "CollapseResult",
    "InsufficientDataError",
    "lyapunov_exponent",
    "fixed_points",
    "saturation_entropy",
    "classify",
    "phase_report_record",
    "fit_lyapunov",
    "collapse",
]

PHASE_SCRAMBLING = "Scrambling"
PHASE_DISSIPATIVE = "Dissipative"
PHASE_CRITICAL = "Critical"

# relative tolerance for deciding r == 2 exactly
_PHASE_RTOL = 1e-12


class InsufficientDataError(ValueError):
    """A trajectory does not cover the window required by a fit."""


@dataclass(frozen=True)
class FixedPoint:
    """One root of the reduced flow, in c = f3/w2b units."""

    c: float
    stability: str  # 'stable' | 'unstable' | 'marginal'
    derivative: float  # d(rhs)/df3 at the root, units of inverse time


@dataclass(frozen=True)
class FixedPointSet:
    """Roots of c^3 - (r+1)c + r with stability labels."""

    roots: tuple[FixedPoint, ...]
    ratio: float

    @property
    def stable(self) -> Optional[FixedPoint]:
        """The attracting root reached from c = 1, when one exists."""
        for fp in self.roots:
            if fp.stability == "stable":
                return fp
        return None


@dataclass(frozen=True)
class PhaseReport:
    """Phase classification with the matching closed-form diagnostics."""

    phase: str
    lyapunov: float
    saturation: float
    fixed_points: FixedPointSet
    r: float
    k: float
    x: float


@dataclass(frozen=True)
class CollapseResult:
    """Rescaled entropy curves on a common grid in x = (Kt/Jt)*exp(kappa*t)."""

    x: np.ndarray
    g: np.ndarray  # mean curve
    curves: np.ndarray  # one row per trajectory
    score: float  # max spread across trajectories over the grid


def lyapunov_exponent(couplings: EffectiveCouplings, thermal: ThermalPoint) -> float:
    """Growth rate of perturbations at the thermal point:
    n2b*(1 - n2b)*(2*Jt - Vt). Negative in the dissipative phase, where it
    is the decay rate of the probe-induced perturbation."""
    n = thermal.n2b
    return n * (1.0 - n) * (2.0 * couplings.Jt - couplings.Vt)


def fixed_points(couplings: EffectiveCouplings, thermal: ThermalPoint) -> FixedPointSet:
    """Roots and stability of the drive-free reduced flow (Kt treated as a
    perturbation). Requires Jt > 0."""
    if couplings.Jt <= 0.0:
        raise ValueError("Jt > 0 required for fixed-point analysis")
    r = couplings.Vt / couplings.Jt
    disc = math.sqrt(1.0 + 4.0 * r)
    candidates = [1.0, 0.5 * (disc - 1.0), -0.5 * (disc + 1.0)]
    # at r = 2 the quadratic root coincides with c = 1: keep it once
    roots: list[float] = []
    for c in candidates:
        if not any(abs(c - seen) <= 1e-12 for seen in roots):
            roots.append(c)
    scale = thermal.w2b ** 2 * couplings.Jt
    labelled = []
    for c in roots:
        slope = 3.0 * c * c - (r + 1.0)
        deriv = scale * slope
        if abs(slope) <= 1e-12 * (r + 2.0):
            stability = "marginal"
        elif slope < 0.0:
            stability = "stable"
        else:
            stability = "unstable"
        labelled.append(FixedPoint(c=c, stability=stability, derivative=deriv))
    return FixedPointSet(roots=tuple(labelled), ratio=r)


def saturation_entropy(couplings: EffectiveCouplings, thermal: ThermalPoint) -> float:
    """Late-time entropy in the Kt -> 0 limit.

    theta(2*Jt - Vt) * (1 - 2*sqrt(n(1-n))) * (3 - sqrt(1 + 4*Vt/Jt)); the
    step function uses theta(0) = 0, which is immaterial because the second
    factor vanishes continuously at threshold.
    """
    if couplings.Jt <= 0.0:
        raise ValueError("Jt > 0 required")
    if couplings.Vt >= 2.0 * couplings.Jt:
        return 0.0
    n = thermal.n2b
    r = couplings.Vt / couplings.Jt
    return (1.0 - 2.0 * math.sqrt(n * (1.0 - n))) * (3.0 - math.sqrt(1.0 + 4.0 * r))


def classify(couplings: EffectiveCouplings, thermal: ThermalPoint) -> PhaseReport:
    """Assemble phase label, growth rate, saturation entropy and fixed points."""
    if couplings.Jt <= 0.0:
        raise ValueError("Jt > 0 required")
    if abs(couplings.Vt - 2.0 * couplings.Jt) <= _PHASE_RTOL * 2.0 * couplings.Jt:
        phase = PHASE_CRITICAL
    elif couplings.Vt < 2.0 * couplings.Jt:
        phase = PHASE_SCRAMBLING
    else:
        phase = PHASE_DISSIPATIVE
    return PhaseReport(
        phase=phase,
        lyapunov=lyapunov_exponent(couplings, thermal),
        saturation=saturation_entropy(couplings, thermal),
        fixed_points=fixed_points(couplings, thermal),
        r=couplings.Vt / couplings.Jt,
        k=couplings.Kt / couplings.Jt,
        x=thermal.x,
    )


def phase_report_record(report: PhaseReport) -> dict[str, object]:
    """Flat record of a phase report, for CSV emission."""
    return {
        "Vt_over_Jt": report.r,
        "Kt_over_Jt": report.k,
        "x": report.x,
        "phase": report.phase,
        "lyapunov": report.lyapunov,
        "saturation_analytic": report.saturation,
    }


def fit_lyapunov(trajectory: Trajectory, thermal: ThermalPoint) -> float:
    """Growth rate from a probe-seeded trajectory started at f3 = w2b.

    Least-squares slope of ln|f3 - w2b| over the exponential window
    |f3 - w2b| in [10*(Kt/Jt)*w2b, 0.1*|w2b - f3_stable|]; the lower edge
    discards drive-dominated seeding, the upper edge the nonlinear
    saturation.

    Raises
    ------
    InsufficientDataError
        If the window holds fewer than two samples (dissipative or
        critical trajectories, runs that are too short, or Kt too large).
    """
    couplings = trajectory.couplings
    if couplings.Kt <= 0.0:
        raise ValueError("fit requires a probe-seeded trajectory (Kt > 0)")
    w = thermal.w2b
    stable = fixed_points(couplings, thermal).stable
    hi = 0.0 if stable is None else 0.1 * abs(w - stable.c * w)
    lo = 10.0 * (couplings.Kt / couplings.Jt) * w
    dev = np.abs(trajectory.f3 - w)
    mask = (dev >= lo) & (dev <= hi) & (dev > 0.0)
    if int(mask.sum()) < 2:
        raise InsufficientDataError(
            f"no exponential-growth window: {int(mask.sum())} samples with "
            f"|f3 - w2b| in [{lo:.3g}, {hi:.3g}]"
        )
    slope, _ = np.polyfit(trajectory.times[mask], np.log(dev[mask]), 1)
    return float(slope)


def collapse(
    trajectories: Sequence[Trajectory],
    couplings: EffectiveCouplings,
    thermal: ThermalPoint,
    grid_points: int = 200,
) -> CollapseResult:
    """Collapse saturated scrambling-phase entropy curves onto one scaling curve.

    Each trajectory is rescaled to g(x) = 1 - dS(t)/dS(inf) against
    x = (Kt/Jt)*exp(kappa*t) and resampled onto a common logarithmic grid;
    the score is the maximum spread across trajectories over that grid.
    ``couplings`` carries the shared Jt and Vt (its Kt is ignored; each
    trajectory brings its own).

    Raises
    ------
    ValueError
        If fewer than three trajectories are given, the phase is not
        scrambling, the Kt values span less than two decades, a trajectory
        is unsaturated, or a curve fails to decay monotonically.
    """
    if len(trajectories) < 3:
        raise ValueError(f"need at least 3 trajectories, got {len(trajectories)}")
    report = classify(
        EffectiveCouplings(Jt=couplings.Jt, Vt=couplings.Vt, Kt=0.0), thermal
    )
    if report.phase != PHASE_SCRAMBLING:
        raise ValueError(f"collapse is defined in the scrambling phase, got {report.phase}")
    kts = [tr.couplings.Kt for tr in trajectories]
    if min(kts) <= 0.0:
        raise ValueError("all trajectories must be probe-seeded (Kt > 0)")
    if max(kts) / min(kts) < 99.999:
        raise ValueError("Kt values must span at least two decades")
    for tr in trajectories:
        if tr.plateau is None:
            raise ValueError(
                f"unsaturated trajectory (Kt={tr.couplings.Kt:g}): no plateau detected"
            )

    kappa = report.lyapunov
    log_xs = []
    gs = []
    for tr in trajectories:
        g = 1.0 - tr.entropy / tr.plateau.value
        if np.any(np.diff(g) > 1e-9):
            raise ValueError(
                f"rescaled curve for Kt={tr.couplings.Kt:g} is not monotone non-increasing"
            )
        log_xs.append(np.log(tr.couplings.Kt / couplings.Jt) + kappa * tr.times)
        gs.append(g)

    lo = max(lx[0] for lx in log_xs)
    hi = min(lx[-1] for lx in log_xs)
    if hi <= lo:
        raise ValueError("trajectories share no overlap in the scaling variable")
    grid = np.linspace(lo, hi, grid_points)
    curves = np.vstack([np.interp(grid, lx, g) for lx, g in zip(log_xs, gs)])
    score = float((curves.max(axis=0) - curves.min(axis=0)).max())
    return CollapseResult(x=np.exp(grid), g=curves.mean(axis=0), curves=curves, score=score)
