import json
import math

import numpy as np
import pytest

from entrokin.kinetics import IntegratorControls
from entrokin.sweep import (
    SweepConfig,
    cell_controls,
    manifest_json,
    run_sweep,
    sweep_manifest,
    sweep_to_table,
)
from entrokin.thermo import thermal_point

X = 0.5


class TestSweepConfig:
    def test_validation(self):
        with pytest.raises(ValueError, match="non-empty"):
            SweepConfig(r_grid=(), k_grid=(1e-4,), x=X)
        with pytest.raises(ValueError, match="increasing"):
            SweepConfig(r_grid=(1.0, 0.5), k_grid=(1e-4,), x=X)
        with pytest.raises(ValueError, match=">= 0"):
            SweepConfig(r_grid=(0.5,), k_grid=(-1e-4,), x=X)
        with pytest.raises(ValueError, match="Jt"):
            SweepConfig(r_grid=(0.5,), k_grid=(1e-4,), x=X, Jt=0.0)

    def test_cell_controls_cover_detection_window(self):
        tp = thermal_point(X)
        for r in (0.0, 1.9, 2.0, 2.5):
            ctl = cell_controls(r, 1e-6, tp, 1.0)
            window = 20.0 / (tp.n2b * (1.0 - tp.n2b))
            assert ctl.t_max > 2.0 * window


class TestRunSweep:
    def test_scrambling_plateau_is_probe_independent(self):
        cfg = SweepConfig(r_grid=(0.01,), k_grid=(1e-6, 1e-4), x=X)
        rows = run_sweep(cfg)
        assert [(.01, 1e-6), (.01, 1e-4)] == [(row.r, row.k) for row in rows]
        a, b = rows
        assert a.phase == b.phase == "Scrambling"
        assert a.plateau_numeric == pytest.approx(b.plateau_numeric, rel=0.02)
        for row in rows:
            assert row.plateau_numeric == pytest.approx(row.saturation_analytic, rel=0.02)
            assert row.t_sat is not None
            assert row.error is None

    def test_dissipative_plateau_proportional_to_probe(self):
        cfg = SweepConfig(r_grid=(2.5,), k_grid=(1e-3, 1e-2), x=X)
        rows = run_sweep(cfg)
        ratio = rows[1].plateau_numeric / rows[0].plateau_numeric
        assert ratio == pytest.approx(10.0, rel=0.1)
        for row in rows:
            assert row.saturation_analytic == 0.0
            assert row.phase == "Dissipative"

    def test_threshold_analytic_zero(self):
        cfg = SweepConfig(
            r_grid=(2.0,),
            k_grid=(1e-4, 1e-2),
            x=X,
            controls=IntegratorControls(t_max=50.0),
        )
        for row in run_sweep(cfg):
            assert row.saturation_analytic == 0.0
            assert row.phase == "Critical"

    def test_row_major_order_and_monotone_plateau_in_r(self):
        cfg = SweepConfig(r_grid=(0.0, 0.5, 1.0, 1.5), k_grid=(1e-4,), x=X)
        rows = run_sweep(cfg)
        assert [row.r for row in rows] == [0.0, 0.5, 1.0, 1.5]
        plateaus = [row.plateau_numeric for row in rows]
        assert all(b <= a + 1e-12 for a, b in zip(plateaus, plateaus[1:]))

    def test_failed_cell_is_marked_and_sweep_completes(self):
        bad = IntegratorControls(t_max=50.0, rel_tol=1e-300, abs_tol=5e-324)
        cfg = SweepConfig(r_grid=(0.5,), k_grid=(1e-4, 1e-3), x=X, controls=bad)
        rows = run_sweep(cfg)
        assert len(rows) == 2
        assert all(row.error is not None for row in rows)
        assert all(math.isnan(row.plateau_numeric) for row in rows)
        manifest = sweep_manifest(cfg, rows)
        assert manifest["failures"] == 2

    def test_parallel_matches_serial(self):
        cfg = SweepConfig(
            r_grid=(0.5, 2.5),
            k_grid=(1e-3, 1e-2),
            x=X,
            controls=IntegratorControls(t_max=150.0),
        )
        serial = sweep_to_table(run_sweep(cfg, jobs=1))
        parallel = sweep_to_table(run_sweep(cfg, jobs=2))
        assert serial == parallel


class TestTable:
    def test_header_only_for_empty_rows(self):
        doc = sweep_to_table([])
        assert doc == "r,k,x,phase,lyapunov,plateau_numeric,saturation_analytic,t_sat\n"

    def test_single_row_two_lines(self):
        cfg = SweepConfig(
            r_grid=(0.5,), k_grid=(1e-4,), x=X, controls=IntegratorControls(t_max=5.0)
        )
        doc = sweep_to_table(run_sweep(cfg))
        assert len(doc.strip().split("\n")) == 2

    def test_grid_shape(self):
        # 5x3 grid: one header plus 15 rows
        cfg = SweepConfig(
            r_grid=(0.0, 0.5, 1.0, 1.5, 2.5),
            k_grid=(1e-4, 1e-3, 1e-2),
            x=X,
            controls=IntegratorControls(t_max=2.0),
        )
        doc = sweep_to_table(run_sweep(cfg))
        assert len(doc.strip().split("\n")) == 16

    def test_determinism(self):
        cfg = SweepConfig(r_grid=(0.5,), k_grid=(1e-4,), x=X)
        assert sweep_to_table(run_sweep(cfg)) == sweep_to_table(run_sweep(cfg))

    def test_unsettled_cell_leaves_t_sat_empty(self):
        cfg = SweepConfig(
            r_grid=(0.5,), k_grid=(1e-4,), x=X, controls=IntegratorControls(t_max=2.0)
        )
        rows = run_sweep(cfg)
        assert rows[0].t_sat is None
        assert np.isfinite(rows[0].plateau_numeric)
        line = sweep_to_table(rows).strip().split("\n")[1]
        assert line.endswith(",")

    def test_manifest_round_trips_through_json(self):
        cfg = SweepConfig(
            r_grid=(0.5,),
            k_grid=(1e-4,),
            x=X,
            controls=IntegratorControls(t_max=5.0),
        )
        rows = run_sweep(cfg)
        manifest = json.loads(manifest_json(sweep_manifest(cfg, rows)))
        assert manifest["r_grid"] == [0.5]
        assert manifest["k_grid"] == [1e-4]
        assert manifest["x"] == X
        assert manifest["failures"] == 0
        assert manifest["cells"] == 1
        assert manifest["controls"]["t_max"] == 5.0
        assert manifest["controls"]["max_step"] == "inf"
