"""Thermal weights of the doubled (2-beta) equilibrium state on a flat band.

Everything downstream depends on the single dimensionless detuning
``x = beta*(eps - mu)``; parameterizing by ``x`` instead of the three raw
quantities removes unit ambiguity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["ThermalPoint", "thermal_point"]


@dataclass(frozen=True)
class ThermalPoint:
    """Flat-band thermal data at detuning ``x``.

    Attributes
    ----------
    x : float
        Dimensionless detuning beta*(eps - mu).
    w2b : float
        Doubled-temperature weight 1/(2*cosh(x)), in (0, 1/2].
    n2b : float
        Doubled-temperature occupation 1/(exp(2x) + 1), in (0, 1).

    The two weights satisfy the algebraic identity ``w2b**2 == n2b*(1 - n2b)``.
    """

    x: float
    w2b: float
    n2b: float


def thermal_point(x: float) -> ThermalPoint:
    """Evaluate the doubled-temperature weights at detuning ``x``.

    ``w2b`` is even in ``x``; ``n2b`` obeys n2b(-x) = 1 - n2b(x).

    Raises
    ------
    ValueError
        If ``x`` is not finite, or so large that ``w2b`` underflows to zero.
    """
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"detuning x must be finite, got {x!r}")
    # tanh form is overflow-safe for any finite x
    n2b = 0.5 * (1.0 - math.tanh(x))
    ax = abs(x)
    e = math.exp(-ax)
    w2b = e / (1.0 + e * e)
    if w2b == 0.0:
        raise ValueError(f"detuning x={x} too large: thermal weight underflows")
    return ThermalPoint(x=x, w2b=w2b, n2b=n2b)
