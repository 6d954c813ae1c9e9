"""End-to-end CLI behavior: output formats, determinism, exit codes."""

import json
import subprocess
import sys

import pytest

from heatinv.cli import main


def run_cli(*argv):
    proc = subprocess.run([sys.executable, "-m", "heatinv.cli", *argv],
                          capture_output=True, text=True)
    return proc.returncode, proc.stdout, proc.stderr


class TestLocal:
    def test_densities(self, capsys):
        assert main(["local", "--dim", "1", "--order", "3"]) == 0
        out = capsys.readouterr().out
        assert "a_1: -V" in out
        assert "a_2: 1/2*V^2 - 1/6*D[2]V" in out
        assert ("a_3: -1/6*V^3 + 1/12*D[1]V^2 + 1/6*D[2]V*V - 1/60*D[4]V"
                in out)

    def test_json_format(self, capsys):
        assert main(["local", "--dim", "2", "--order", "2",
                     "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["dim"] == 2
        assert data["rows"][0]["density"] == "-V"
        assert all(r["routes_agree"] for r in data["rows"])

    def test_order_cap(self, capsys):
        assert main(["local", "--dim", "1", "--order", "7"]) == 2
        assert "exceeds" in capsys.readouterr().err


class TestAlpha:
    def test_known_example(self, capsys):
        assert main(["alpha", "--dim", "1", "--epsilon", "1/3",
                     "--order", "3"]) == 0
        out = capsys.readouterr().out
        assert "N = 3" in out
        assert "alpha_1 [zero]: 0" in out
        assert "alpha_2 [zero]: 0" in out
        assert ("alpha_3 [middle]: -1/4*D[1]V^2 - 1/3*D[2]V*V + 3/20*D[4]V"
                in out)

    def test_float_epsilon_rejected(self, capsys):
        assert main(["alpha", "--dim", "1", "--epsilon", "0.3",
                     "--order", "2"]) == 2
        assert "exact rational" in capsys.readouterr().err

    def test_out_of_range_epsilon_rejected(self, capsys):
        assert main(["alpha", "--dim", "1", "--epsilon", "3/2",
                     "--order", "2"]) == 2
        capsys.readouterr()


class TestCoeffs:
    def test_gaussian_table(self, capsys):
        assert main(["coeffs", "--dim", "1", "--potential", "exp(-x1^2)",
                     "--order", "2", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["rows"][0]["value"] == pytest.approx(-1.7724538509, abs=1e-6)
        assert data["rows"][1]["value"] == pytest.approx(0.6266570687, abs=1e-6)

    def test_bad_potential_is_usage_error(self, capsys):
        assert main(["coeffs", "--dim", "1", "--potential", "x1 ^ (1/2)",
                     "--order", "1"]) == 2
        capsys.readouterr()

    def test_output_file(self, tmp_path, capsys):
        target = tmp_path / "table.json"
        assert main(["coeffs", "--dim", "1", "--potential", "exp(-x1^2)",
                     "--order", "1", "--format", "json",
                     "--output", str(target)]) == 0
        capsys.readouterr()
        data = json.loads(target.read_text())
        assert data["rows"][0]["density"] == "-V"


class TestRegtrace:
    def test_beta_absent_in_even_dimension(self, capsys):
        assert main(["regtrace", "--dim", "2", "--epsilon", "1",
                     "--potential", "exp(-x1^2 - x2^2)", "--order", "2",
                     "--box", "6", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["epsilon"] == "1"
        assert all(r["b_or_beta"] is None for r in data["rows"])


class TestVerify:
    def test_routes_suite(self, capsys):
        assert main(["verify", "routes", "--dim", "1", "--order", "3",
                     "--epsilon", "1/3", "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["pass"] is True
        names = [c["name"] for c in data["checks"]]
        assert "alpha_routes_j3_n1_eps1/3" in names

    def test_taylor_suite(self, capsys):
        assert main(["verify", "taylor", "--matrix-dim", "6", "--order", "1",
                     "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        assert data["pass"] is True

    def test_fk_suite_small(self, capsys):
        assert main(["verify", "fk", "--paths", "20000", "--seed", "7",
                     "--format", "json"]) == 0
        data = json.loads(capsys.readouterr().out)
        check = data["checks"][0]
        assert abs(check["observed"] - check["target"]) <= check["tolerance"]


class TestProcessLevel:
    def test_usage_error_exit_code(self):
        code, _, _ = run_cli("local", "--dim", "1")
        assert code == 2
        code, _, _ = run_cli("nonsense")
        assert code == 2

    def test_byte_identical_determinism(self):
        args = ("verify", "fk", "--paths", "12000", "--seed", "3",
                "--format", "json")
        code1, out1, _ = run_cli(*args)
        code2, out2, _ = run_cli(*args)
        assert code1 == code2 == 0
        assert out1 == out2

    def test_version(self):
        code, out, _ = run_cli("--version")
        assert code == 0
        assert out.strip()
