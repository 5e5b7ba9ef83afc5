import csv
import io
import json

import pytest

from bicyclide.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


class TestCoords:
    def test_forward_identity_point(self, capsys):
        code, out = run_cli(capsys, "coords", "to", "--k", "0.7",
                            "--s", "0", "--t", "0", "--phi", "0")
        assert code == 0
        data = json.loads(out)
        assert data["x"] == 1.0 and data["y"] == 0.0 and data["z"] == 0.0
        assert data["residual"] <= 1e-10

    def test_inverse(self, capsys):
        code, out = run_cli(capsys, "coords", "from", "--k", "0.7",
                            "--x", "1.2", "--y", "0.3", "--z", "-0.4")
        data = json.loads(out)
        assert code == 0
        assert data["residual"] <= 1e-10

    def test_domain_error_exit_code(self, capsys):
        code, _ = run_cli(capsys, "coords", "from", "--k", "0.7",
                          "--x", "0", "--y", "0", "--z", "1.0")
        assert code == 3

    def test_argument_error_exit_code(self):
        with pytest.raises(SystemExit) as err:
            main(["coords", "to", "--k"])
        assert err.value.code == 2


class TestEigen:
    def test_small_modulus_lambda(self, capsys):
        code, out = run_cli(capsys, "eigen", "--nu", "0.5", "--n", "0", "--k", "0.001")
        data = json.loads(out)
        assert code == 0
        assert abs(data["lambda"] - 2.25) <= 1e-2
        assert abs(data["norm_check"] - 1.0) <= 1e-9
        assert data["zero_count"] == 0

    def test_table(self, capsys):
        code, out = run_cli(capsys, "eigen-table", "--nu", "0.5", "--nmax", "2", "--k", "0.7")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["n", "lambda", "lower_bound"]
        assert len(rows) == 4
        lams = [float(r[1]) for r in rows[1:]]
        bounds = [float(r[2]) for r in rows[1:]]
        assert all(l >= b for l, b in zip(lams, bounds))


class TestHarmonic:
    def test_value(self, capsys):
        code, out = run_cli(capsys, "harmonic", "--kind", "internal1", "--m", "1",
                            "--n", "1", "--k", "0.7", "--point", "0.8,0.3,0.9")
        data = json.loads(out)
        assert code == 0
        assert data["convention"] == "d0=1"
        assert data["re"] ** 2 + data["im"] ** 2 > 0.0


class TestExpand:
    def test_relerr(self, capsys):
        code, out = run_cli(capsys, "expand", "--k", "0.7",
                            "--r", "1.05,0.33,0.89", "--rstar", "0.3,-0.5,-0.4",
                            "--kind", "first", "--mmax", "4", "--nmax", "6")
        data = json.loads(out)
        assert code == 0
        assert data["relerr"] <= 1e-3
        assert len(data["shells"]) == 11

    def test_ordering_violation_exit_code(self, capsys):
        code, _ = run_cli(capsys, "expand", "--k", "0.7",
                          "--r", "0.3,-0.5,-0.4", "--rstar", "1.05,0.33,0.89",
                          "--kind", "first", "--mmax", "2", "--nmax", "2")
        assert code == 3


class TestAddition:
    def test_relerr(self, capsys):
        code, out = run_cli(capsys, "addition", "--m", "1", "--k", "0.7",
                            "--p", "0.4,0.8,0.0", "--pstar=-0.3,-0.6,0.0",
                            "--nmax", "12")
        data = json.loads(out)
        assert code == 0
        assert data["relerr"] <= 1e-6


class TestLimits:
    def test_bispherical(self, capsys):
        code, out = run_cli(capsys, "limits", "--which", "bispherical", "--k", "0.001",
                            "--m", "1", "--n", "1", "--first", "0.3", "0.8",
                            "--second", "-0.4", "-0.2")
        data = json.loads(out)
        assert code == 0
        assert data["gap"] <= 1e-2


class TestPlotData:
    def test_coordlines(self, capsys):
        code, out = run_cli(capsys, "plotdata", "coordlines", "--k", "0.7",
                            "--ns", "3", "--nt", "3", "--samples", "20")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["line_id", "s", "t", "R", "z"]
        assert len(rows) == 1 + 6 * 20

    def test_surfaces(self, capsys):
        code, out = run_cli(capsys, "plotdata", "surfaces", "--k", "0.7",
                            "--s0", "0.4", "--t0", "0.6", "--samples", "8")
        assert code == 0
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["surface_id", "x", "y", "z"]


class TestDeterminism:
    def test_byte_identical_output(self, capsys):
        args = ("expand", "--k", "0.7", "--r", "1.05,0.33,0.89",
                "--rstar", "0.3,-0.5,-0.4", "--kind", "first",
                "--mmax", "2", "--nmax", "3")
        _, out1 = run_cli(capsys, *args)
        _, out2 = run_cli(capsys, *args)
        assert out1 == out2

    def test_out_file(self, capsys, tmp_path):
        path = tmp_path / "point.json"
        code = main(["--out", str(path), "coords", "to", "--k", "0.5",
                     "--s", "0.2", "--t", "0.1", "--phi", "0.3"])
        assert code == 0
        data = json.loads(path.read_text())
        assert "x" in data
