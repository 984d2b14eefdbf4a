"""Parity between the compiled stepping kernel and its pure-Python twin."""

import os
import subprocess
import sys

import numpy as np
import pytest

from entrokin import _backend, _kernel_py
from entrokin.thermo import thermal_point

compiled = pytest.importorskip("entrokin._kernel", reason="compiled kernel not built")


def run_kernel(kernel, r, k, t_max, n=2049, x=0.5, rtol=1e-9, atol=1e-12):
    tp = thermal_point(x)
    w = tp.w2b
    ts = np.linspace(0.0, t_max, n)
    out = np.empty_like(ts)
    rate = w * w * (2.0 + r) + k
    h0 = min(float(ts[1]), 1e-2 / rate)
    res = kernel.solve_reduced(
        w, w**3, r, 0.25 * k * w * w, w, ts, out, rtol, atol, np.inf, h0, 1.5
    )
    return res, out


@pytest.mark.parametrize(
    "r,k,t_max",
    [
        (0.01, 1e-5, 300.0),
        (0.5, 1e-4, 200.0),
        (1.9, 1e-6, 1800.0),
        (2.5, 1e-2, 150.0),
    ],
)
def test_bitwise_identical_trajectories(r, k, t_max):
    res_c, out_c = run_kernel(compiled, r, k, t_max)
    res_p, out_p = run_kernel(_kernel_py, r, k, t_max)
    assert res_c == res_p  # status and step counts
    assert np.array_equal(out_c, out_p)


def test_failure_statuses_agree():
    tp = thermal_point(0.5)
    ts = np.linspace(0.0, 400.0, 513)
    for kern in (compiled, _kernel_py):
        out = np.empty_like(ts)
        status, _, _, t_stop, y_stop = kern.solve_reduced(
            tp.w2b, tp.w2b**3, 0.0, 0.0, -1.2 * tp.w2b, ts, out, 1e-9, 1e-12,
            np.inf, 0.01, 1.5,
        )
        assert status == kern.BLOW_UP
        assert abs(y_stop) > 1.0 and t_stop > 0.0


def test_default_backend_is_compiled():
    if os.environ.get("ENTROKIN_PURE_PYTHON") == "1":
        pytest.skip("pure-Python twin forced via environment")
    assert _backend.BACKEND == "compiled"


def test_env_override_selects_python_twin():
    env = dict(os.environ, ENTROKIN_PURE_PYTHON="1")
    code = "import entrokin; print(entrokin.backend_name())"
    got = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert got.stdout.strip() == "python"
