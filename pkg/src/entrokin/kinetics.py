"""Time evolution of the reduced inter-replica weight f3.

On the slaved manifold the six-component contour kinetics collapses to a
single autonomous cubic flow

    df3/dt = w^3*Vt - w^2*(Vt + Jt)*f3 + Jt*f3^3 + Kt*drive(f3)

with w = w2b. The drive models the weak probe collision term: a
golden-rule relaxation ``drive(f3) = -PROBE_DRIVE_WEIGHT * w^2 * f3``. Its
exact shape is a model choice (the probe only has to unbalance the flow at
order Kt); the damping weight is calibrated so the dissipative-phase
plateau stays proportional to Kt over the tested range while the drive
still vanishes as Kt -> 0, recovering every closed-form result.

Trajectories are produced by an embedded Dormand-Prince 5(4) integrator
with proportional step control, provided by a compiled kernel with a
pure-Python fallback (see ``_backend``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Protocol

import numpy as np

from ._backend import kernel
from .state import DistributionState
from .thermo import ThermalPoint

__all__ = [
    "PROBE_DRIVE_WEIGHT",
    "BLOW_UP_LIMIT",
    "PLATEAU_TOL",
    "EffectiveCouplings",
    "IntegratorControls",
    "Plateau",
    "Trajectory",
    "IntegrationError",
    "BlowUpError",
    "StepSizeUnderflowError",
    "DistributionFlow",
    "plateau_window",
    "reduced_rhs",
    "integrate",
    "entropy_curve",
    "trajectory_to_csv",
]

# Damping weight of the probe drive relative to w2b^2*f3. Calibrated so that
# the drive-induced fixed-point displacement stays linear in Kt up to
# Kt/Jt ~ 1e-2 (the cubic's curvature feeds a relative correction
# ~ 12*weight*Kt/Jt into the dissipative plateau).
PROBE_DRIVE_WEIGHT = 0.25

# Outside |f3| = 1.5 the cubic's runaway branch takes over; stop there
# instead of overflowing silently.
BLOW_UP_LIMIT = 1.5

PLATEAU_TOL = 1e-6

_DEFAULT_SAMPLES = 4096


class IntegrationError(RuntimeError):
    """Integration stopped before reaching t_max.

    Carries the last good time and f3 value in ``time`` and ``f3_last``.
    """

    def __init__(self, message: str, time: float, f3_last: float):
        super().__init__(message)
        self.time = time
        self.f3_last = f3_last


class BlowUpError(IntegrationError):
    """f3 left the physical basin (|f3| > BLOW_UP_LIMIT)."""


class StepSizeUnderflowError(IntegrationError):
    """Step control drove the step size below resolvable precision."""


@dataclass(frozen=True)
class EffectiveCouplings:
    """Effective golden-rule rates (units: inverse time).

    ``Jt`` is the intra-system scattering rate, ``Vt`` the system-bath
    rate and ``Kt`` the system-probe rate. All analytic results assume the
    probe limit Kt << Jt, Vt; ``probe_limit_warning`` flags inputs outside
    that regime.
    """

    Jt: float
    Vt: float
    Kt: float = 0.0

    def __post_init__(self):
        for name, v in (("Jt", self.Jt), ("Vt", self.Vt), ("Kt", self.Kt)):
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"coupling {name}={v} must be finite and >= 0")

    @property
    def probe_limit_warning(self) -> bool:
        """True when Kt is not small against the system and bath rates."""
        return self.Kt >= 0.1 * (self.Jt + self.Vt)


@dataclass(frozen=True)
class IntegratorControls:
    """Integration and sampling controls.

    ``sample_stride=None`` picks t_max/4096; the stride is rounded so the
    sample grid divides [0, t_max] evenly.
    """

    t_max: float
    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_step: float = math.inf
    sample_stride: Optional[float] = None

    def __post_init__(self):
        if not (np.isfinite(self.t_max) and self.t_max > 0.0):
            raise ValueError(f"t_max={self.t_max} must be finite and > 0")
        for name, v in (("rel_tol", self.rel_tol), ("abs_tol", self.abs_tol)):
            if not 0.0 < v <= 1e-2:
                raise ValueError(f"{name}={v} outside (0, 1e-2]")
        if not self.max_step > 0.0:
            raise ValueError(f"max_step={self.max_step} must be > 0")
        if self.sample_stride is not None and not 0.0 < self.sample_stride <= self.t_max:
            raise ValueError(f"sample_stride={self.sample_stride} outside (0, t_max]")

    def sample_times(self) -> np.ndarray:
        """Uniform sample grid covering [0, t_max]."""
        stride = self.sample_stride
        if stride is None:
            n = _DEFAULT_SAMPLES
        else:
            n = max(1, round(self.t_max / stride))
        return np.linspace(0.0, self.t_max, n + 1)


class Plateau(NamedTuple):
    value: float
    time: float


@dataclass(frozen=True)
class Trajectory:
    """Sampled solution of the reduced flow plus integrator diagnostics."""

    times: np.ndarray
    f3: np.ndarray
    entropy: np.ndarray
    accepted_steps: int
    rejected_steps: int
    plateau: Optional[Plateau]
    couplings: EffectiveCouplings
    thermal: ThermalPoint
    controls: IntegratorControls
    f3_init: float = field(repr=False, default=math.nan)


class DistributionFlow(Protocol):
    """Plug-in surface for a full six-component right-hand side.

    Implementations map a :class:`DistributionState` to the six time
    derivatives (df0..df5). Only the slaved reduced model ships with this
    package; the protocol fixes the signature a full collision functional
    would have to provide.
    """

    def __call__(self, state: DistributionState) -> tuple[float, float, float, float, float, float]: ...


def plateau_window(thermal: ThermalPoint, Jt: float) -> float:
    """Default plateau-detection window: 20 natural relaxation times."""
    return 20.0 / (thermal.n2b * (1.0 - thermal.n2b) * Jt)


def reduced_rhs(f3: float, couplings: EffectiveCouplings, thermal: ThermalPoint) -> float:
    """Right-hand side of the reduced flow at the given f3.

    Equals w^3*Vt - w^2*(Vt + Jt)*f3 + Jt*f3^3 - PROBE_DRIVE_WEIGHT*Kt*w^2*f3,
    evaluated in factored form so f3 = w2b is an exact root when Kt = 0.
    """
    f3 = float(f3)
    if not np.isfinite(f3):
        raise ValueError(f"f3={f3} must be finite")
    if abs(f3) > BLOW_UP_LIMIT:
        raise ValueError(f"|f3|={abs(f3)} outside the physical basin (limit {BLOW_UP_LIMIT})")
    w = thermal.w2b
    if couplings.Jt == 0.0:
        # degenerate drive-free couplings: only Vt and Kt terms survive
        core = w * w * couplings.Vt * (w - f3)
    else:
        r = couplings.Vt / couplings.Jt
        c = f3 / w
        core = (couplings.Jt * w ** 3) * ((c - 1.0) * (c * c + c - r))
    return core - PROBE_DRIVE_WEIGHT * couplings.Kt * w * w * f3


def integrate(
    couplings: EffectiveCouplings,
    thermal: ThermalPoint,
    controls: IntegratorControls,
    f3_init: Optional[float] = None,
) -> Trajectory:
    """Integrate the reduced flow on [0, t_max] and sample f3 and entropy.

    ``f3_init`` defaults to the thermal weight w2b (the post-impulse
    initial condition); the override exists for fixed-point and
    growth-rate experiments.

    Raises
    ------
    BlowUpError
        If f3 leaves [-1.5, 1.5] (runaway branch of the cubic).
    StepSizeUnderflowError
        If the error control cannot take a resolvable step.
    """
    if couplings.Jt <= 0.0:
        raise ValueError("Jt > 0 is required for dynamics (it sets the time scale)")
    w = thermal.w2b
    y0 = w if f3_init is None else float(f3_init)
    if not np.isfinite(y0) or abs(y0) > BLOW_UP_LIMIT:
        raise ValueError(f"f3_init={y0} must be finite with |f3_init| <= {BLOW_UP_LIMIT}")

    times = controls.sample_times()
    out = np.empty_like(times)
    r = couplings.Vt / couplings.Jt
    jt_w3 = couplings.Jt * w ** 3
    kdrive = PROBE_DRIVE_WEIGHT * couplings.Kt * w * w
    rate = w * w * (2.0 * couplings.Jt + couplings.Vt) + couplings.Kt
    h0 = min(controls.max_step, float(times[1]), 1e-2 / rate)

    status, nacc, nrej, t_stop, y_stop = kernel.solve_reduced(
        w, jt_w3, r, kdrive, y0, times, out,
        controls.rel_tol, controls.abs_tol, controls.max_step, h0, BLOW_UP_LIMIT,
    )
    if status == kernel.BLOW_UP:
        raise BlowUpError(
            f"f3 blew out of the physical basin at t={t_stop:.6g} (f3={y_stop:.6g})",
            time=t_stop, f3_last=y_stop,
        )
    if status == kernel.STEP_UNDERFLOW:
        raise StepSizeUnderflowError(
            f"step size underflow at t={t_stop:.6g} (f3={y_stop:.6g})",
            time=t_stop, f3_last=y_stop,
        )

    # entropy on the slaved manifold; equal to renyi_delta of the expanded
    # state, written so that f3 = w2b gives exactly zero
    entropy = 2.0 * (1.0 - 2.0 * w) * (1.0 - out / w)
    plateau = _detect_plateau(times, entropy, plateau_window(thermal, couplings.Jt))

    times.setflags(write=False)
    out.setflags(write=False)
    entropy.setflags(write=False)
    return Trajectory(
        times=times,
        f3=out,
        entropy=entropy,
        accepted_steps=int(nacc),
        rejected_steps=int(nrej),
        plateau=plateau,
        couplings=couplings,
        thermal=thermal,
        controls=controls,
        f3_init=y0,
    )


def _detect_plateau(times: np.ndarray, entropy: np.ndarray, window: float) -> Optional[Plateau]:
    """First sample after which the entropy never again changes more than
    PLATEAU_TOL over a trailing window; None when the run is too short or
    still settling at t_max.

    The flatness must hold for the whole remainder of the run: near
    threshold the windowed change also dips below tolerance during the
    slow seeding stage, long before saturation, so a first-crossing rule
    would fire early there.
    """
    stride = times[1] - times[0]
    m = int(math.ceil(window / stride - 1e-9))
    if m < 1 or m >= len(times):
        return None
    moving = np.abs(entropy[m:] - entropy[:-m]) >= PLATEAU_TOL
    last = np.nonzero(moving)[0]
    if len(last) == 0:
        i = m  # flat throughout: settled from the start
    else:
        j = int(last[-1]) + 1
        if j >= len(moving):
            return None  # still changing at t_max
        i = j + m
    return Plateau(value=float(entropy[i]), time=float(times[i]))


def entropy_curve(trajectory: Trajectory) -> np.ndarray:
    """(time, entropy) pairs of a trajectory, shape (n, 2).

    Idempotent accessor over the stored samples; the entropy column is the
    Renyi increment of the slaved-manifold expansion of f3 at each time.
    """
    return np.column_stack((trajectory.times, trajectory.entropy))


def trajectory_to_csv(trajectory: Trajectory) -> str:
    """CSV document ``time,f3,entropy`` with round-trip float formatting."""
    lines = ["time,f3,entropy"]
    for t, y, s in zip(trajectory.times, trajectory.f3, trajectory.entropy):
        lines.append(f"{t:.17g},{y:.17g},{s:.17g}")
    return "\n".join(lines) + "\n"
