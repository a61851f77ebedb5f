import csv
import io
import json
import shutil
import subprocess
import sys

import numpy as np
import pytest

from ka_laguerre import specfun
from ka_laguerre.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_OK, render_report, run, write_report
from ka_laguerre.hardy import REPORT_FIELDS


def _csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


class TestExitCodes:
    def test_hardy_default_grid(self, tmp_path):
        out = tmp_path / "h.csv"
        assert run(["hardy", "--output", str(out)]) == EXIT_OK
        rows = _csv_rows(out)
        assert len(rows) == 48
        assert list(rows[0]) == REPORT_FIELDS
        assert all(r["pass"] == "true" for r in rows)

    def test_sigma_out_of_range(self, tmp_path, capsys):
        assert run(["hardy", "--sigma-values", "0.5,1.5", "--output", str(tmp_path / "x.csv")]) == EXIT_CONFIG
        assert "sigma" in capsys.readouterr().err

    def test_unknown_flag(self):
        assert run(["basis", "--bogus", "1"]) == EXIT_CONFIG

    def test_unknown_corpus(self, capsys):
        assert run(["semigroup", "--corpus", "sinc"]) == EXIT_CONFIG
        assert "sinc" in capsys.readouterr().err

    def test_help(self, capsys):
        assert run(["--help"]) == EXIT_OK

    def test_failing_check(self, tmp_path, capsys):
        # a tolerance of zero cannot be met
        out = tmp_path / "s.csv"
        assert run(["semigroup", "--tol", "0", "--output", str(out)]) == EXIT_FAIL
        assert "FAIL" in capsys.readouterr().err
        assert len(_csv_rows(out)) == 8

    def test_unwritable_output(self, tmp_path):
        assert run(["specfun", "--output", str(tmp_path / "missing" / "x.csv")]) == EXIT_FAIL

    def test_invalid_alpha(self):
        assert run(["basis", "--alpha", "-0.7"]) == EXIT_CONFIG

    def test_invalid_thread_env(self, monkeypatch):
        monkeypatch.setenv("KA_LAGUERRE_THREADS", "zero")
        assert run(["specfun"]) == EXIT_CONFIG


class TestConfig:
    def test_file_and_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("# grid\nfunction = k\norder = 0.5\npoints = 4\nx-min = 1\nx_max = 4\n")
        out = tmp_path / "k.csv"
        assert run(["specfun", "--config", str(cfg), "--points", "3", "--output", str(out)]) == EXIT_OK
        rows = _csv_rows(out)
        assert [float(r["x"]) for r in rows] == [1.0, 2.5, 4.0]
        assert float(rows[0]["value"]) == specfun.macdonald_k(0.5, 1.0)

    @pytest.mark.parametrize("text", ["bogus = 1\n", "order\n", "points = many\n"])
    def test_bad_file(self, tmp_path, text):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text(text)
        assert run(["specfun", "--config", str(cfg)]) == EXIT_CONFIG

    def test_missing_file(self, tmp_path):
        assert run(["specfun", "--config", str(tmp_path / "nope.cfg")]) == EXIT_CONFIG

    def test_bad_format(self):
        assert run(["specfun", "--format", "xml"]) == EXIT_CONFIG


class TestReports:
    def test_json_round_trip(self, tmp_path):
        out = tmp_path / "j.json"
        assert run(["specfun", "--function", "jnorm", "--order", "0.5", "--format", "json",
                    "--output", str(out)]) == EXIT_OK
        data = json.loads(out.read_text())
        x = np.array([d["x"] for d in data])
        assert np.array_equal([d["value"] for d in data], specfun.bessel_j_normalized(0.5, x))

    def test_float_fidelity(self):
        value = 0.1 + 0.2
        text = render_report([{"v": value}], "csv", ["v"])
        assert float(text.splitlines()[1]) == value

    def test_booleans(self):
        assert render_report([{"p": np.bool_(True)}], "csv", ["p"]).splitlines()[1] == "true"
        assert json.loads(render_report([{"p": np.bool_(False)}], "json", ["p"])) == [{"p": False}]

    def test_non_finite_json(self):
        assert json.loads(render_report([{"v": float("nan")}], "json", ["v"])) == [{"v": "nan"}]

    def test_header_only(self, tmp_path):
        out = tmp_path / "e.csv"
        write_report([], "csv", str(out), ["a", "b"])
        assert out.read_text() == "a,b\n"

    def test_deterministic(self, tmp_path):
        paths = [tmp_path / f"b{i}.csv" for i in range(2)]
        for p in paths:
            assert run(["basis", "--L", "6", "--output", str(p)]) == EXIT_OK
        assert paths[0].read_bytes() == paths[1].read_bytes()

    def test_stdout(self, capsys):
        assert run(["specfun", "--points", "2"]) == EXIT_OK
        rows = list(csv.reader(io.StringIO(capsys.readouterr().out)))
        assert rows[0] == ["x", "value"] and len(rows) == 3


class TestCommands:
    def test_basis_gram(self, tmp_path):
        out = tmp_path / "b.csv"
        assert run(["basis", "--a", "1.5", "--alpha", "0.25", "--L", "8", "--output", str(out)]) == EXIT_OK
        gram = [r for r in _csv_rows(out) if r["section"] == "gram"]
        assert len(gram) == 81
        for r in gram:
            expect = 1.0 if int(r["l"]) == int(float(r["x"])) else 0.0
            assert abs(float(r["value"]) - expect) <= 1e-8

    def test_semigroup_complex(self, tmp_path):
        out = tmp_path / "s.csv"
        assert run(["semigroup", "--z", "0.3+1.2j", "--output", str(out)]) == EXIT_OK
        assert all(r["kernel"] == "nan" for r in _csv_rows(out))

    def test_semigroup_rejects_left_half_plane(self):
        assert run(["semigroup", "--z", "-0.1"]) == EXIT_CONFIG

    @pytest.mark.parametrize("corpus", ["phi3", "gauss", "bump"])
    def test_hankel(self, tmp_path, corpus):
        assert run(["hankel", "--a", "2", "--alpha", "1", "--corpus", corpus,
                    "--output", str(tmp_path / "h.csv")]) == EXIT_OK

    def test_hardy_nd(self, tmp_path):
        out = tmp_path / "nd.csv"
        assert run(["hardy", "--mode", "nd", "--model", "Z2_line", "--a", "1", "--k", "0.75",
                    "--output", str(out)]) == EXIT_OK
        (row,) = _csv_rows(out)
        assert float(row["alpha"]) == 0.5 and row["pass"] == "true"

    def test_identities_custom_battery(self, tmp_path):
        out = tmp_path / "i.csv"
        assert run(["identities", "--battery", "1:0;2:0.5", "--output", str(out)]) == EXIT_OK
        assert _csv_rows(out)

    def test_identities_bad_battery(self):
        assert run(["identities", "--battery", "1-0"]) == EXIT_CONFIG


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.csv"
    proc = subprocess.run([sys.executable, "-m", "ka_laguerre.cli", "specfun", "--output", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert len(_csv_rows(out)) == 11


@pytest.mark.skipif(shutil.which("ka-laguerre") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["ka-laguerre", "hardy", "--sigma-values", "1.5"], capture_output=True, text=True)
    assert proc.returncode == 2
    assert "configuration error" in proc.stderr
