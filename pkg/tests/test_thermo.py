import math

import numpy as np
import pytest

from entrokin.thermo import thermal_point


def test_symmetric_point():
    tp = thermal_point(0.0)
    assert tp.w2b == 0.5
    assert tp.n2b == 0.5


def test_large_detuning_decays_monotonically():
    ws = [thermal_point(x).w2b for x in (1.0, 2.0, 4.0, 8.0)]
    ns = [thermal_point(x).n2b for x in (1.0, 2.0, 4.0, 8.0)]
    assert all(b < a for a, b in zip(ws, ws[1:]))
    assert all(b < a for a, b in zip(ns, ns[1:]))
    assert ws[-1] < 1e-3 and ns[-1] < 1e-6


def test_quarter_occupation_point():
    # e^(2x) = 3 gives n2b = 1/4 and w2b = sqrt(3)/4
    tp = thermal_point(math.log(3.0) / 2.0)
    assert tp.n2b == pytest.approx(0.25, abs=1e-15)
    assert tp.w2b == pytest.approx(math.sqrt(3.0) / 4.0, abs=1e-15)
    assert tp.w2b == pytest.approx(0.433013, abs=5e-7)
    assert abs(tp.w2b**2 - tp.n2b * (1.0 - tp.n2b)) <= 1e-15


def test_weight_identity_over_random_detunings():
    rng = np.random.RandomState(1234)
    for x in rng.uniform(-10.0, 10.0, size=1000):
        tp = thermal_point(x)
        assert abs(tp.w2b**2 - tp.n2b * (1.0 - tp.n2b)) <= 1e-12


def test_reflection_symmetry():
    rng = np.random.RandomState(99)
    for x in rng.uniform(0.0, 10.0, size=200):
        plus, minus = thermal_point(x), thermal_point(-x)
        assert plus.w2b == minus.w2b
        assert plus.n2b + minus.n2b == pytest.approx(1.0, abs=1e-15)


def test_weight_window():
    rng = np.random.RandomState(7)
    for x in rng.uniform(-10.0, 10.0, size=200):
        tp = thermal_point(x)
        assert 0.0 < tp.w2b <= 0.5
        assert 0.0 < tp.n2b < 1.0
        if x != 0.0:
            assert tp.w2b < 0.5


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_detuning_rejected(bad):
    with pytest.raises(ValueError):
        thermal_point(bad)


def test_underflowing_detuning_rejected():
    with pytest.raises(ValueError, match="underflow"):
        thermal_point(800.0)
