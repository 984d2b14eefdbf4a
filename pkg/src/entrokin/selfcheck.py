"""Embedded invariant suite behind the ``selfcheck`` command.

Each check re-derives a closed-form identity or cross-checks the
integrator against the analytics; together they catch a corrupted
constant, a broken kernel build, or a drifted formula in seconds.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np

from . import analytics, state, thermo
from .kinetics import EffectiveCouplings, IntegratorControls, integrate

__all__ = ["CHECKS", "run_all"]


def _check_thermal_identity() -> str:
    rng = np.random.RandomState(20240601)
    worst = 0.0
    for x in rng.uniform(-10.0, 10.0, size=1000):
        tp = thermo.thermal_point(x)
        worst = max(worst, abs(tp.w2b ** 2 - tp.n2b * (1.0 - tp.n2b)))
    if worst > 1e-12:
        raise AssertionError(f"w2b^2 != n2b*(1-n2b): worst |diff| = {worst:.3e}")
    return f"worst |w^2 - n(1-n)| = {worst:.2e}"


def _check_thermal_symmetry() -> str:
    rng = np.random.RandomState(20240602)
    for x in rng.uniform(0.0, 10.0, size=200):
        a, b = thermo.thermal_point(x), thermo.thermal_point(-x)
        if a.w2b != b.w2b:
            raise AssertionError(f"w2b not even at x={x}")
        if abs(a.n2b + b.n2b - 1.0) > 1e-15:
            raise AssertionError(f"n2b(x)+n2b(-x) != 1 at x={x}")
    return "w2b even, n2b(x)+n2b(-x)=1"


def _check_fixed_point_residuals() -> str:
    thermal = thermo.thermal_point(0.5)
    worst = 0.0
    for r in (0.0, 0.5, 1.0, 2.0, 2.5, 6.0):
        fps = analytics.fixed_points(EffectiveCouplings(Jt=1.0, Vt=r), thermal)
        for fp in fps.roots:
            c = fp.c
            worst = max(worst, abs(c ** 3 - (r + 1.0) * c + r))
    if worst > 1e-12:
        raise AssertionError(f"fixed-point residual {worst:.3e} > 1e-12")
    return f"worst cubic residual = {worst:.2e}"


def _check_entropy_consistency() -> str:
    rng = np.random.RandomState(20240603)
    worst = 0.0
    for _ in range(25):
        r = rng.uniform(0.0, 1.95)
        x = rng.uniform(0.1, 2.0)
        thermal = thermo.thermal_point(x)
        couplings = EffectiveCouplings(Jt=1.0, Vt=r)
        stable = analytics.fixed_points(couplings, thermal).stable
        expanded = state.SlavedState(f3=stable.c * thermal.w2b, thermal=thermal).expand()
        diff = abs(state.renyi_delta(expanded) - analytics.saturation_entropy(couplings, thermal))
        worst = max(worst, diff)
    if worst > 1e-10:
        raise AssertionError(f"saturation vs entropy functional: |diff| = {worst:.3e}")
    return f"worst |renyi - saturation| = {worst:.2e}"


def _check_matrix_shift() -> str:
    thermal = thermo.thermal_point(0.3)
    st = state.init_thermal(thermal)
    shift = state.distribution_matrix(st, "lesser") - state.distribution_matrix(st, "greater")
    expected = np.diag([1.0, -1.0, 1.0, -1.0])
    if not np.array_equal(shift, expected):
        raise AssertionError("lesser - greater != diag(+1, -1, +1, -1)")
    return "contour ordering shift ok"


def _check_undriven_run_is_stationary() -> str:
    thermal = thermo.thermal_point(0.5)
    couplings = EffectiveCouplings(Jt=1.0, Vt=0.5, Kt=0.0)
    traj = integrate(couplings, thermal, IntegratorControls(t_max=50.0))
    if not np.all(traj.f3 == thermal.w2b):
        raise AssertionError("undriven run drifted off the thermal point")
    if not np.all(traj.entropy == 0.0):
        raise AssertionError("undriven run produced nonzero entropy")
    return "undriven trajectory exactly stationary"


def _check_plateau_spot() -> str:
    thermal = thermo.thermal_point(0.5)
    couplings = EffectiveCouplings(Jt=1.0, Vt=0.5, Kt=1e-4)
    kappa = analytics.lyapunov_exponent(couplings, thermal)
    window = 20.0 / (thermal.n2b * (1.0 - thermal.n2b))
    t_max = (math.log(1e4) + 20.0) / kappa + 2.0 * window
    traj = integrate(couplings, thermal, IntegratorControls(t_max=t_max))
    if traj.plateau is None:
        raise AssertionError("plateau not detected")
    target = analytics.saturation_entropy(couplings, thermal)
    rel = abs(traj.plateau.value - target) / target
    if rel > 0.01:
        raise AssertionError(f"numeric plateau off the analytic line by {rel:.2%}")
    return f"plateau within {rel:.2%} of the analytic value"


CHECKS: list[tuple[str, Callable[[], str]]] = [
    ("thermal-identity", _check_thermal_identity),
    ("thermal-symmetry", _check_thermal_symmetry),
    ("fixed-point-residuals", _check_fixed_point_residuals),
    ("entropy-consistency", _check_entropy_consistency),
    ("matrix-ordering-shift", _check_matrix_shift),
    ("undriven-stationarity", _check_undriven_run_is_stationary),
    ("plateau-spot-check", _check_plateau_spot),
]


def run_all(report: Callable[[str], None] = print) -> list[str]:
    """Run every check; returns the names of the failed ones."""
    failed = []
    for name, check in CHECKS:
        try:
            detail = check()
        except Exception as exc:  # noqa: BLE001 - any failure is a finding
            failed.append(name)
            report(f"FAIL {name}: {exc}")
        else:
            report(f"ok   {name}: {detail}")
    return failed
