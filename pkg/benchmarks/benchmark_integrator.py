"""Benchmark the compiled stepping kernel against the pure-Python twin.

Runs the same workloads through both backends, checks the outputs agree
bit for bit, and reports wall times and the speedup.

    python benchmarks/benchmark_integrator.py
"""

from __future__ import annotations

import math
import time

import numpy as np

from entrokin import _kernel_py
from entrokin.thermo import thermal_point

try:
    from entrokin import _kernel as _kernel_c
except ImportError:
    _kernel_c = None

WORKLOADS = [
    # name, r, k, t_max, samples
    ("scrambling rise", 0.01, 1e-5, 300.0, 8193),
    ("near threshold", 1.9, 1e-6, 1900.0, 8193),
    ("dissipative", 2.5, 1e-2, 150.0, 8193),
    ("fit window", 1.0, 1e-8, 120.0, 16385),
]


def run(kernel, r, k, t_max, samples, repeats):
    tp = thermal_point(0.5)
    w = tp.w2b
    ts = np.linspace(0.0, t_max, samples)
    out = np.empty_like(ts)
    rate = w * w * (2.0 + r) + k
    h0 = min(float(ts[1]), 1e-2 / rate)
    best = math.inf
    for _ in range(repeats):
        tic = time.perf_counter()
        status, nacc, nrej, _, _ = kernel.solve_reduced(
            w, w**3, r, 0.25 * k * w * w, w, ts, out, 1e-9, 1e-12, np.inf, h0, 1.5
        )
        best = min(best, time.perf_counter() - tic)
    assert status == kernel.OK
    return best, nacc + nrej, out.copy()


def main():
    if _kernel_c is None:
        print("compiled kernel not available; nothing to compare")
        return
    print(f"{'workload':<18} {'steps':>7} {'python':>10} {'compiled':>10} {'speedup':>8}")
    for name, r, k, t_max, samples in WORKLOADS:
        t_py, steps, out_py = run(_kernel_py, r, k, t_max, samples, repeats=3)
        t_c, _, out_c = run(_kernel_c, r, k, t_max, samples, repeats=10)
        identical = np.array_equal(out_py, out_c)
        print(
            f"{name:<18} {steps:>7} {t_py * 1e3:>8.2f}ms {t_c * 1e3:>8.2f}ms "
            f"{t_py / t_c:>7.1f}x  bit-identical={identical}"
        )


if __name__ == "__main__":
    main()
