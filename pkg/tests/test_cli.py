"""CLI contract: configs, CSV/sidecar formats, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from tga_waveguide.cli import main, resolve_config


def read(path):
    return path.read_text()


class TestConfigResolution:
    def test_defaults_file_overrides(self, tmp_path):
        cfg_file = tmp_path / "run.cfg"
        cfg_file.write_text("t1 = 0.3\nn_cells = 2  # comment\n")
        cfg = resolve_config("scatter", str(cfg_file), ["t1=0.4", "output=o.csv"])
        assert cfg["t1"] == 0.4          # override wins over the file
        assert cfg["n_cells"] == 2       # file wins over the default
        assert cfg["t2"] == 0.1          # untouched default
        assert cfg["xi_mhz"] == 100.0

    def test_unknown_key_rejected(self):
        from tga_waveguide import ConfigError

        with pytest.raises(ConfigError, match="unknown key"):
            resolve_config("scatter", None, ["typo_key=1", "output=o.csv"])

    def test_malformed_file_rejected(self, tmp_path):
        from tga_waveguide import ConfigError

        bad = tmp_path / "bad.cfg"
        bad.write_text("just words\n")
        with pytest.raises(ConfigError, match="key=value"):
            resolve_config("scatter", str(bad), ["output=o.csv"])


class TestScatterCommand:
    def test_csv_shape_and_sidecar(self, tmp_path):
        out = tmp_path / "fig4b.csv"
        code = main([
            "scatter", "--output", str(out),
            "--set", "n_cells=3", "--set", "t1=0.1", "--set", "t2=0.5",
        ])
        assert code == 0
        lines = read(out).splitlines()
        assert lines[0] == "delta2,energy,k,R,T,in_band"
        assert len(lines) == 2002
        meta = json.loads(read(tmp_path / "fig4b.csv.meta.json"))
        assert meta["command"] == "scatter"
        assert meta["config"]["t2"] == 0.5
        assert "version" in meta and "runtime_seconds" in meta

    def test_byte_identical_reruns(self, tmp_path):
        args = ["--set", "n_cells=2", "--set", "delta2_points=301"]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["scatter", "--output", str(a), *args]) == 0
        assert main(["scatter", "--output", str(b), *args]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_out_of_band_rows_flagged(self, tmp_path):
        out = tmp_path / "wide.csv"
        code = main([
            "scatter", "--output", str(out),
            "--set", "delta2_min=-3", "--set", "delta2_max=3", "--set", "delta2_points=25",
        ])
        assert code == 0
        rows = [line.split(",") for line in read(out).splitlines()[1:]]
        flags = {row[-1] for row in rows}
        assert flags == {"0", "1"}
        for row in rows:
            if row[-1] == "0":
                assert row[2] == "nan" and row[3] == "nan" and row[4] == "nan"

    def test_unknown_key_exits_1(self, tmp_path, capsys):
        code = main(["scatter", "--output", str(tmp_path / "x.csv"), "--set", "bogus=1"])
        assert code == 1
        assert "unknown key" in capsys.readouterr().err

    def test_missing_output_exits_1(self):
        assert main(["scatter"]) == 1


class TestSpectrumCommand:
    def test_sections(self, tmp_path):
        out = tmp_path / "spec.csv"
        code = main([
            "spectrum", "--output", str(out),
            "--set", "n_cells=1", "--set", "t1=0.5", "--set", "t2=0.0",
            "--set", "j=0.9", "--set", "m_sites=400",
        ])
        assert code == 0
        lines = read(out).splitlines()
        assert lines[0] == "eigenvalues"
        assert lines[1] == "index,energy"
        i_bound = lines.index("bound_states")
        assert lines[i_bound + 1] == "index,energy,side,localization_length,participation_ratio"
        assert i_bound - 2 == 400 + 2  # one eigenvalue row per basis state
        assert len(lines) - (i_bound + 2) == 2  # strong coupling: one pair out of band

    def test_custom_boundary_requires_t3(self, tmp_path):
        code = main([
            "spectrum", "--output", str(tmp_path / "s.csv"), "--set", "boundary=custom",
        ])
        assert code == 1

    def test_t3_only_with_custom(self, tmp_path):
        code = main([
            "spectrum", "--output", str(tmp_path / "s.csv"), "--set", "t3=0.2",
        ])
        assert code == 1


class TestDynamicsCommand:
    def test_time_series_csv(self, tmp_path):
        out = tmp_path / "dyn.csv"
        code = main([
            "dynamics", "--output", str(out),
            "--set", "n_cells=1", "--set", "t1=0.3", "--set", "t2=0.0",
            "--set", "omega_p=20.0", "--set", "f=0", "--set", "gamma=2e-4",
            "--set", "m_sites=40", "--set", "t_max=50",
        ])
        assert code == 0
        lines = read(out).splitlines()
        assert lines[0] == "time,p_e,total_norm"
        assert len(lines) == 52
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "1"


class TestWindingCommand:
    def test_csv(self, tmp_path):
        out = tmp_path / "w.csv"
        assert main(["winding", "--output", str(out), "--set", "t1=0.1", "--set", "t2=0.5"]) == 0
        assert read(out).splitlines() == ["t1,t2,k_points,winding", "0.1,0.5,1024,1"]

    def test_gap_closed_exits_2(self, tmp_path, capsys):
        code = main([
            "winding", "--output", str(tmp_path / "w.csv"),
            "--set", "t1=0.3", "--set", "t2=0.3",
        ])
        assert code == 2
        assert "numerical error" in capsys.readouterr().err


class TestReproduce:
    def test_fig2c_writes_both_curves(self, tmp_path):
        code = main(["reproduce", "fig2c", "--out-dir", str(tmp_path)])
        assert code == 0
        for curve in ("two_point", "single_point"):
            csv_path = tmp_path / f"fig2c_{curve}.csv"
            assert csv_path.exists()
            meta = json.loads(read(tmp_path / f"fig2c_{curve}.csv.meta.json"))
            assert meta["config"]["t1"] == 0.5
            assert any("j=0.9" in note for note in meta["assumptions"])

    def test_unknown_figure_exits_1(self):
        assert main(["reproduce", "fig999"]) == 1


def test_module_entry_point(tmp_path):
    out = tmp_path / "w.csv"
    proc = subprocess.run(
        [sys.executable, "-m", "tga_waveguide", "winding", "--output", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0
    assert out.exists()
