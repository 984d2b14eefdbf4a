import json
import time

import numpy as np
import pytest

import entrokin.selfcheck
from entrokin.cli import main
from entrokin.thermo import thermal_point


def write_config(tmp_path, text, name="run.ini"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


SIMULATE_K0 = """
[simulate]
x = 0.5
r = 0.3
k = 0.0
t_max = 50.0
sample_stride = 0.5
"""

SIMULATE_FIG = """
[simulate]
x = 0.5
r = 0.01
k = 1e-5
"""


class TestSimulate:
    def test_undriven_run_writes_zero_entropy(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SIMULATE_K0)
        out = tmp_path / "traj.csv"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "time,f3,entropy"
        assert len(lines) == 102
        assert all(float(line.split(",")[2]) == 0.0 for line in lines[1:])
        summary = capsys.readouterr().out
        assert "phase=Scrambling" in summary and "lyapunov=" in summary

    def test_rising_then_plateau(self, tmp_path, capsys):
        cfg = write_config(tmp_path, SIMULATE_FIG)
        out = tmp_path / "traj.csv"
        assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
        rows = np.loadtxt(out, delimiter=",", skiprows=1)
        entropy = rows[:, 2]
        assert entropy[0] == 0.0
        n = len(entropy)
        assert entropy[n // 4] > 0.9 * entropy[-1]  # long flat tail
        assert entropy[-1] == pytest.approx(0.2241208, rel=1e-2)
        assert np.all(np.diff(entropy) >= -1e-12)
        assert "plateau=" in capsys.readouterr().out

    def test_manifest_echoes_config(self, tmp_path):
        cfg = write_config(tmp_path, SIMULATE_K0)
        out = tmp_path / "traj.csv"
        main(["simulate", "--config", cfg, "--out", str(out)])
        manifest = json.loads((tmp_path / "traj.csv.manifest.json").read_text())
        assert manifest["command"] == "simulate"
        assert manifest["config"]["x"] == "0.5"
        assert manifest["config"]["r"] == "0.3"
        assert manifest["config"]["k"] == "0.0"
        assert manifest["config"]["t_max"] == "50.0"
        assert manifest["failures"] == 0

    def test_missing_config_file(self, tmp_path):
        assert main(["simulate", "--config", str(tmp_path / "nope.ini"), "--out", str(tmp_path / "o")]) == 2

    def test_missing_section(self, tmp_path):
        cfg = write_config(tmp_path, "[sweep]\nx = 0.5\n")
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_bad_value(self, tmp_path):
        cfg = write_config(tmp_path, "[simulate]\nx = apple\nr = 0.1\nk = 0\nt_max = 5\n")
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_missing_key(self, tmp_path):
        cfg = write_config(tmp_path, "[simulate]\nx = 0.5\n")
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

    def test_unresolvable_out_dir(self, tmp_path):
        cfg = write_config(tmp_path, SIMULATE_K0)
        missing = tmp_path / "no" / "such" / "dir" / "o.csv"
        assert main(["simulate", "--config", cfg, "--out", str(missing)]) == 2

    def test_blow_up_exits_3(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[simulate]\nx = 0.5\nr = 0.0\nk = 0.0\nt_max = 500.0\nf3_init = -0.6\n",
        )
        assert main(["simulate", "--config", cfg, "--out", str(tmp_path / "o.csv")]) == 3


SWEEP_SMALL = """
[sweep]
r_grid = 0.5, 2.5
k_grid = 1e-3, 1e-2
x = 0.5
t_max = 150.0
"""


class TestSweep:
    def test_byte_identical_reruns(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP_SMALL)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["sweep", "--config", cfg, "--out", str(out2)]) == 0
        assert out1.read_bytes() == out2.read_bytes()
        header = out1.read_text().split("\n")[0]
        assert header == "r,k,x,phase,lyapunov,plateau_numeric,saturation_analytic,t_sat"

    def test_jobs_flag_gives_same_bytes(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP_SMALL)
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out1)]) == 0
        assert main(["sweep", "--config", cfg, "--out", str(out2), "--jobs", "2"]) == 0
        assert out1.read_bytes() == out2.read_bytes()

    def test_manifest_counts_cells(self, tmp_path):
        cfg = write_config(tmp_path, SWEEP_SMALL)
        out = tmp_path / "a.csv"
        main(["sweep", "--config", cfg, "--out", str(out)])
        manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
        assert manifest["config"]["cells"] == 4
        assert manifest["config"]["failures"] == 0
        assert manifest["config"]["r_grid"] == [0.5, 2.5]
        assert manifest["config"]["config_raw"]["k_grid"] == "1e-3, 1e-2"

    def test_partial_failure_exits_4(self, tmp_path):
        cfg = write_config(
            tmp_path,
            "[sweep]\nr_grid = 0.5\nk_grid = 1e-3\nx = 0.5\nt_max = 50.0\nrel_tol = 1e-300\nabs_tol = 5e-324\n",
        )
        out = tmp_path / "a.csv"
        assert main(["sweep", "--config", cfg, "--out", str(out)]) == 4
        manifest = json.loads((tmp_path / "a.csv.manifest.json").read_text())
        assert manifest["failures"] == 1


FIXED_POINTS = """
[fixed-points]
x = 0.5
r = {r}
"""


class TestFixedPoints:
    def test_no_bath_roots(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FIXED_POINTS.format(r=0.0))
        assert main(["fixed-points", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "c=1 " in out and "c=0 " in out and "c=-1 " in out
        assert out.count("unstable") == 2
        assert "phase=Scrambling" in out

    def test_threshold_double_root(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FIXED_POINTS.format(r=2.0))
        assert main(["fixed-points", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "marginal" in out
        assert "c=-2 " in out
        assert "phase=Critical" in out

    def test_deep_dissipative_stable_thermal_root(self, tmp_path, capsys):
        cfg = write_config(tmp_path, FIXED_POINTS.format(r=6.0))
        assert main(["fixed-points", "--config", cfg]) == 0
        out = capsys.readouterr().out
        assert "c=1 " in out and "stable" in out.split("c=1 ")[1].split("\n")[0]
        assert "saturation_entropy=0" in out

    def test_record_written(self, tmp_path):
        cfg = write_config(tmp_path, FIXED_POINTS.format(r=0.5))
        out = tmp_path / "report.csv"
        assert main(["fixed-points", "--config", cfg, "--out", str(out)]) == 0
        header, row = out.read_text().strip().split("\n")
        assert header == "Vt_over_Jt,Kt_over_Jt,x,phase,lyapunov,saturation_analytic"
        fields = row.split(",")
        assert float(fields[0]) == 0.5
        assert fields[3] == "Scrambling"


COLLAPSE = """
[collapse]
x = 0.5
r = 0.01
k_list = 1e-3, 1e-4, 1e-5
"""


class TestCollapse:
    def test_writes_curves_and_score(self, tmp_path, capsys):
        cfg = write_config(tmp_path, COLLAPSE)
        out = tmp_path / "collapse.csv"
        assert main(["collapse", "--config", cfg, "--out", str(out)]) == 0
        assert "collapse_score=" in capsys.readouterr().out
        lines = out.read_text().strip().split("\n")
        assert lines[0] == "x,g_mean,g_k0.001,g_k0.0001,g_k1e-05"
        data = np.loadtxt(out, delimiter=",", skiprows=1)
        assert data.shape == (200, 5)
        assert np.all(np.diff(data[:, 1]) <= 1e-9)

    def test_dissipative_phase_is_config_error(self, tmp_path):
        cfg = write_config(tmp_path, COLLAPSE.replace("r = 0.01", "r = 2.5"))
        assert main(["collapse", "--config", cfg, "--out", str(tmp_path / "c.csv")]) == 2


class TestSelfcheck:
    def test_passes_on_healthy_build(self, capsys):
        tic = time.perf_counter()
        assert main(["selfcheck"]) == 0
        assert time.perf_counter() - tic < 60.0
        out = capsys.readouterr().out
        assert "selfcheck passed" in out
        assert out.count("ok   ") == len(entrokin.selfcheck.CHECKS)

    def test_detects_corrupted_constant(self, capsys, monkeypatch):
        # simulate a corrupted weight formula: selfcheck must notice
        import entrokin.thermo as thermo_mod

        real = thermo_mod.thermal_point

        def corrupted(x):
            tp = real(x)
            object.__setattr__(tp, "w2b", tp.w2b * (1.0 + 1e-8))
            return tp

        monkeypatch.setattr(thermo_mod, "thermal_point", corrupted)
        assert main(["selfcheck"]) == 1
        assert "FAIL" in capsys.readouterr().out
