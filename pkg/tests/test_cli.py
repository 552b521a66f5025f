import json
import math
import subprocess
import sys

import pytest

from gerstner_fplane import cli


def run_main(argv, capsys):
    code = cli.main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSpeed:
    def test_classical_value(self, capsys):
        code, out, _ = run_main(["speed", "--k", "1", "--omega", "0", "--g", "9.8"], capsys)
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "c = 3.130495168500"
        assert lines[1].startswith("dispersion residual = ")
        assert float(lines[1].split("=")[1]) <= 1e-12 * 9.8

    def test_default_half_wavenumber(self, capsys):
        code, out, _ = run_main(["speed", "--k", "0.5"], capsys)
        assert code == 0
        c = float(out.splitlines()[0].split("=")[1])
        assert c == pytest.approx(4.42704, abs=5e-6)

    def test_invalid_wavenumber_exits_2(self, capsys):
        code, _, err = run_main(["speed", "--k", "-1"], capsys)
        assert code == 2
        assert "error" in err


class TestProfile:
    def test_csv_shape_and_amplitude(self, capsys, tmp_path):
        out_file = tmp_path / "profile.csv"
        code, _, _ = run_main(
            ["profile", "--nx", "128", "--out", str(out_file)], capsys
        )
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "x,eta"
        assert len(lines) == 129
        etas = [float(line.split(",")[1]) for line in lines[1:]]
        k, b0 = 1.0, -0.1
        assert max(etas) - min(etas) == pytest.approx(
            2.0 * math.exp(k * b0) / k, abs=1e-3
        )

    def test_crest_height_sampled_exactly(self, capsys):
        # t=0 puts the crest at x=0, which is the first sample
        code, out, _ = run_main(["profile", "--nx", "16", "--format", "csv"], capsys)
        assert code == 0
        first = out.splitlines()[1]
        x, eta = (float(v) for v in first.split(","))
        assert x == 0.0
        assert eta == pytest.approx(-0.1 + math.exp(-0.1), abs=1e-9)

    def test_byte_identical_reruns(self, capsys, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        run_main(["profile", "--nx", "64", "--out", str(a)], capsys)
        run_main(["profile", "--nx", "64", "--out", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_reparse_and_reemit_is_identical(self, capsys, tmp_path):
        """Float formatting must round-trip: parsing the CSV and writing it
        back from the parsed values reproduces the bytes."""
        out_file = tmp_path / "profile.csv"
        run_main(["profile", "--nx", "32", "--out", str(out_file)], capsys)
        text = out_file.read_text()
        lines = text.splitlines()
        rebuilt = [lines[0]]
        for line in lines[1:]:
            x, eta = (float(v) for v in line.split(","))
            rebuilt.append(f"{cli.fmt(x)},{cli.fmt(eta)}")
        assert "\n".join(rebuilt) + "\n" == text

    def test_json_document(self, capsys):
        code, out, _ = run_main(["profile", "--nx", "8", "--format", "json"], capsys)
        assert code == 0
        doc = json.loads(out)
        assert doc["kind"] == "trochoid"
        assert len(doc["samples"]) == 8

    def test_cycloid_flagged(self, capsys):
        code, out, _ = run_main(
            ["profile", "--nx", "8", "--b0", "0", "--format", "json"], capsys
        )
        assert code == 0
        assert json.loads(out)["kind"] == "cycloid"

    def test_svg_output(self, capsys):
        code, out, _ = run_main(["profile", "--nx", "32", "--format", "svg"], capsys)
        assert code == 0
        assert out.startswith("<svg")
        assert "<polyline" in out and out.rstrip().endswith("</svg>")


class TestField:
    def test_csv_columns_and_physics(self, capsys):
        code, out, _ = run_main(
            ["field", "--nx", "6", "--nz", "3", "--format", "csv"], capsys
        )
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "x,z,u,w,p,gamma"
        rows = [[float(v) for v in line.split(",")] for line in lines[1:]]
        assert len(rows) == 6 * (3 + 5)
        assert all(row[5] < 0 for row in rows)  # rotational everywhere
        deep = [row for row in rows if row[1] < -2.5]
        assert all(math.hypot(row[2], row[3]) < 0.3 for row in deep)

    def test_near_surface_pressure(self, capsys):
        code, out, _ = run_main(
            ["field", "--nx", "4", "--nz", "2", "--format", "json"], capsys
        )
        assert code == 0
        doc = json.loads(out)
        rows = doc["rows"]
        # offset rows hug the surface; the first row of each column is
        # 0.01/k below eta, where P is within ~100 Pa of atmospheric
        near_surface = [r for r in rows if r[1] > -1.0]
        assert near_surface
        closest = min(near_surface, key=lambda r: abs(r[4] - 101325.0))
        assert abs(closest[4] - 101325.0) < 150.0

    def test_svg_rejected(self, capsys):
        code, _, err = run_main(["field", "--format", "svg"], capsys)
        assert code == 2
        assert "format" in err


class TestTrace:
    def test_json_fit_summary(self, capsys):
        code, out, _ = run_main(
            ["trace", "--steps", "400", "--format", "json"], capsys
        )
        assert code == 0
        doc = json.loads(out)
        fit = doc["fit"]
        assert fit["clockwise"] is True
        radius = math.exp(1.0 * (-0.1 - 1.0))  # e^{k b}, k=1, b=b0-1
        assert fit["radius"] == pytest.approx(radius, rel=1e-4)
        assert fit["center"][0] == pytest.approx(0.0, abs=1e-4)
        assert fit["center"][1] == pytest.approx(-1.1, abs=1e-4)
        assert fit["max_deviation"] <= 1e-5 * fit["radius"]
        assert len(doc["samples"]) == 401

    def test_csv_requires_out(self, capsys):
        code, _, err = run_main(["trace", "--format", "csv"], capsys)
        assert code == 2
        assert "--out" in err

    def test_csv_with_fit_on_stdout(self, capsys, tmp_path):
        out_file = tmp_path / "orbit.csv"
        code, out, _ = run_main(
            ["trace", "--steps", "400", "--format", "csv", "--out", str(out_file)],
            capsys,
        )
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "t,x,z"
        assert len(lines) == 402
        fit = json.loads(out)
        assert "radius" in fit

    def test_deviation_gate_failure_exits_1(self, capsys):
        code, _, err = run_main(
            ["trace", "--steps", "400", "--format", "json", "--tol", "1e-30"], capsys
        )
        assert code == 1
        assert "deviation" in err

    def test_svg_orbit(self, capsys):
        code, out, _ = run_main(
            ["trace", "--steps", "300", "--format", "svg"], capsys
        )
        assert code == 0
        assert out.startswith("<svg") and "<circle" in out


class TestVerify:
    COMMON = ["verify", "--nx", "6", "--nz", "4"]

    def test_small_grid_passes_with_schema(self, capsys):
        code, out, _ = run_main(self.COMMON, capsys)
        assert code == 0
        doc = json.loads(out)
        assert set(doc) == {"params", "checks", "fd_step", "grid", "overall_pass"}
        assert doc["overall_pass"] is True
        for check in doc["checks"]:
            assert set(check) == {
                "name",
                "max_abs_residual",
                "residual_scale",
                "tolerance",
                "pass",
            }
            assert check["pass"] is True
            assert check["max_abs_residual"] <= check["tolerance"] * check["residual_scale"]
        assert doc["params"]["c"] == pytest.approx(3.1304221693508487)

    def test_zero_tolerance_exits_1(self, capsys):
        code, out, _ = run_main(self.COMMON + ["--tol", "0"], capsys)
        assert code == 1
        doc = json.loads(out)
        assert doc["overall_pass"] is False
        assert all(not check["pass"] for check in doc["checks"])

    def test_report_deterministic(self, capsys, tmp_path):
        a, b = tmp_path / "a.json", tmp_path / "b.json"
        run_main(self.COMMON + ["--out", str(a)], capsys)
        run_main(self.COMMON + ["--out", str(b)], capsys)
        assert a.read_bytes() == b.read_bytes()

    def test_csv_format_rejected(self, capsys):
        code, _, _ = run_main(self.COMMON + ["--format", "csv"], capsys)
        assert code == 2


class TestConfigFile:
    def test_config_supplies_values(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"k": 1.0, "omega": 0.0, "g": 9.8}))
        code, out, _ = run_main(["speed", "--config", str(cfg)], capsys)
        assert code == 0
        assert out.splitlines()[0] == "c = 3.130495168500"

    def test_flags_override_config(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"omega": 1.0, "k": 4.0}))
        code, out, _ = run_main(
            ["speed", "--config", str(cfg), "--omega", "0", "--k", "1"], capsys
        )
        assert code == 0
        assert out.splitlines()[0] == "c = 3.130495168500"

    def test_unknown_key_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"wavenumber": 1.0}))
        code, _, err = run_main(["speed", "--config", str(cfg)], capsys)
        assert code == 2
        assert "unknown config keys" in err

    def test_malformed_json_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text("{not json")
        code, _, _ = run_main(["speed", "--config", str(cfg)], capsys)
        assert code == 2

    def test_non_object_config_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text("[1, 2]")
        code, _, _ = run_main(["speed", "--config", str(cfg)], capsys)
        assert code == 2

    def test_wrong_type_exits_2(self, capsys, tmp_path):
        cfg = tmp_path / "run.json"
        cfg.write_text(json.dumps({"nx": "many"}))
        code, _, _ = run_main(["profile", "--config", str(cfg)], capsys)
        assert code == 2


class TestEntryPoint:
    def test_console_script_runs(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gerstner_fplane.cli", "speed", "--omega", "0"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 0
        assert proc.stdout.startswith("c = ")

    def test_usage_error_exits_2(self):
        proc = subprocess.run(
            [sys.executable, "-m", "gerstner_fplane.cli", "nonsense"],
            capture_output=True,
            text=True,
        )
        assert proc.returncode == 2
