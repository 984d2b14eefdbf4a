"""Distribution state on the four-branch entropy contour.

The contour doubles the Keldysh contour (two "worlds" with swap boundary
conditions), so equal-time two-point functions are captured by six real
distribution functions f0..f5: f0 is the intra-replica occupation, f1/f2
the intra-replica anomalous weights, and f3/f4/f5 the inter-replica
weights. The impulse-induced second Renyi entropy is a linear functional
of these six numbers.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .thermo import ThermalPoint

__all__ = [
    "ContourBranch",
    "DistributionState",
    "SlavedState",
    "init_thermal",
    "distribution_matrix",
    "renyi_delta",
    "state_record",
]


class ContourBranch(enum.IntEnum):
    """The four contour branches in fixed order: backward/forward x world 1/2."""

    D1 = 0
    U1 = 1
    D2 = 2
    U2 = 3

    @property
    def sign(self) -> int:
        """Branch sign (-1)^s: -1 on backward (d) branches, +1 on forward (u)."""
        return -1 if self in (ContourBranch.D1, ContourBranch.D2) else 1


@dataclass(frozen=True)
class DistributionState:
    """Six-component distribution state.

    Construction enforces the physicality window f0 in [0, 1] and
    |f1..f5| <= 1; this is a validation bound meant to catch integrator
    blow-up early, not a conservation law.
    """

    f0: float
    f1: float
    f2: float
    f3: float
    f4: float
    f5: float

    def __post_init__(self):
        vals = (self.f0, self.f1, self.f2, self.f3, self.f4, self.f5)
        if not all(np.isfinite(v) for v in vals):
            raise ValueError(f"distribution components must be finite, got {vals}")
        if not 0.0 <= self.f0 <= 1.0:
            raise ValueError(f"occupation f0={self.f0} outside [0, 1]")
        for name, v in zip(("f1", "f2", "f3", "f4", "f5"), vals[1:]):
            if abs(v) > 1.0:
                raise ValueError(f"|{name}|={abs(v)} exceeds the physicality bound 1")


@dataclass(frozen=True)
class SlavedState:
    """Reduced state on the slaved manifold: f3 alone plus thermal data.

    On this manifold f4 and f5 stay proportional to f3 through the thermal
    weights while f0, f1, f2 are frozen at their thermal values, which
    collapses the six-component kinetics to a single flow for f3.
    """

    f3: float
    thermal: ThermalPoint

    def expand(self) -> DistributionState:
        """Expand to the full six-component state."""
        w, n = self.thermal.w2b, self.thermal.n2b
        return DistributionState(
            f0=n,
            f1=w,
            f2=w,
            f3=self.f3,
            f4=n * self.f3 / w,
            f5=(1.0 - n) * self.f3 / w,
        )


def init_thermal(thermal: ThermalPoint) -> DistributionState:
    """Thermal initial condition right after the impulse.

    Free evolution fixes f1 = f2 = f3 = w2b and f0 = f4 = f5 = n2b; this
    state is stationary when all effective couplings vanish.
    """
    w, n = thermal.w2b, thermal.n2b
    return DistributionState(f0=n, f1=w, f2=w, f3=w, f4=n, f5=n)


def distribution_matrix(state: DistributionState, ordering: str = "greater") -> np.ndarray:
    """4x4 distribution matrix F^{ss'} in branch order (d1, u1, d2, u2).

    ``ordering="greater"`` returns the matrix for t1 > t2; ``"lesser"``
    subtracts (-1)^s on the diagonal, which restores the fermionic
    commutation relation for the opposite time order.
    """
    f0, f1, f2, f3, f4, f5 = state.f0, state.f1, state.f2, state.f3, state.f4, state.f5
    mat = np.array(
        [
            [-f0, -f2, -f3, -f5],
            [f1, 1.0 - f0, -f4, -f3],
            [f3, f5, -f0, -f2],
            [f4, f3, f1, 1.0 - f0],
        ]
    )
    if ordering == "greater":
        return mat
    if ordering == "lesser":
        signs = np.array([b.sign for b in ContourBranch], dtype=float)
        return mat - np.diag(signs)
    raise ValueError(f"ordering must be 'greater' or 'lesser', got {ordering!r}")


def renyi_delta(state: DistributionState) -> float:
    """Second Renyi entropy increment of the given distribution state.

    Linear functional 2 - 2*(f1 + f2) - 2*(f4 + f5 - 2*f3); it vanishes on
    the slaved manifold at the thermal point f3 = w2b.
    """
    return 2.0 - 2.0 * (state.f1 + state.f2) - 2.0 * (state.f4 + state.f5 - 2.0 * state.f3)


def state_record(state: DistributionState) -> dict[str, float]:
    """Flat record of the six named components, for CSV emission."""
    return {
        "f0": state.f0,
        "f1": state.f1,
        "f2": state.f2,
        "f3": state.f3,
        "f4": state.f4,
        "f5": state.f5,
    }
