"""Exit-code and file contracts of the command line interface.

Everything runs main() in-process against temporary output directories;
two subprocess checks confirm the installed module entry point agrees.
"""

import json
import math
import subprocess
import sys

import pytest

from dropletlab.cli import EXIT_FLAGGED, EXIT_OK, EXIT_RUNTIME, EXIT_USAGE, OUTDIR_ENV, main
from dropletlab.theory import critical_delta, critical_lambda, minimize_phi


def run_cli(*argv, outdir=None):
    args = list(argv)
    if outdir is not None:
        args += ["--outdir", str(outdir)]
    return main(args)


class TestTheoryCommands:
    def test_phi_example(self, capsys, tmp_path):
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", "--lambda", "0",
                       outdir=tmp_path) == EXIT_OK
        assert capsys.readouterr().out == "0.8\n"

    def test_phi_value_round_trips(self, capsys, tmp_path):
        run_cli("theory-phi", "--d", "3", "--delta", "1.25", "--lambda", "0.5",
                outdir=tmp_path)
        printed = float(capsys.readouterr().out)
        assert printed == 0.5 ** (2.0 / 3.0) + 1.25 * 0.25

    def test_critical_example(self, capsys, tmp_path):
        assert run_cli("theory-critical", "--d", "2", outdir=tmp_path) == EXIT_OK
        out = capsys.readouterr().out.strip()
        assert out.startswith("0.918558653")
        assert float(out) == critical_delta(2)

    def test_domain_error_exits_1(self, capsys, tmp_path):
        assert run_cli("theory-phi", "--d", "2", "--delta", "-1", "--lambda", "0",
                       outdir=tmp_path) == EXIT_USAGE
        assert "usage error" in capsys.readouterr().err
        assert run_cli("theory-critical", "--d", "1", outdir=tmp_path) == EXIT_USAGE

    def test_summary_written_for_every_run(self, tmp_path):
        run_cli("theory-critical", "--d", "2", outdir=tmp_path)
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["subcommand"] == "theory-critical"
        assert doc["config"] == {"d": 2}
        assert float(doc["outputs"]["stdout"]) == critical_delta(2)

    def test_curve_file(self, tmp_path):
        assert run_cli("theory-curve", "--d", "2", "--delta-min", "0", "--delta-max", "1.2",
                       "--points", "25", outdir=tmp_path) == EXIT_OK
        lines = (tmp_path / "theory_curve.csv").read_text().splitlines()
        header = {}
        for line in lines:
            if line.startswith("#"):
                key, _, value = line.lstrip("# ").partition(" = ")
                header[key] = value
        assert float(header["delta_c"]) == critical_delta(2)
        assert float(header["lambda_c"]) == critical_lambda(2)
        assert lines[4] == "delta,lambda_star,phi_value,degenerate"
        rows = [line.split(",") for line in lines[5:]]
        assert len(rows) == 25
        # supercritical rows carry the droplet branch value
        last = rows[-1]
        ref = minimize_phi(2, 1.2)
        assert float(last[1]) == pytest.approx(ref.lambda_star, abs=1e-15)
        assert float(last[3]) in (0.0, 1.0)

    def test_curve_validation(self, tmp_path):
        assert run_cli("theory-curve", "--d", "2", "--points", "1", outdir=tmp_path) == EXIT_USAGE
        assert run_cli("theory-curve", "--d", "2", "--delta-min", "2", "--delta-max", "1",
                       outdir=tmp_path) == EXIT_USAGE

    def test_phi_table(self, tmp_path):
        out = tmp_path / "phi096.csv"
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.96", "--out", str(out),
                       outdir=tmp_path) == EXIT_OK
        lines = out.read_text().splitlines()
        assert lines[0] == "# d = 2"
        assert float(lines[1].split(" = ")[1]) == 0.96
        assert lines[2] == "lambda,phi"
        rows = [tuple(map(float, line.split(","))) for line in lines[3:]]
        assert len(rows) == 201
        assert rows[0] == (0.0, 0.96)
        # interior minimum sits right of the onset fraction 2/3
        lam_min = min(rows, key=lambda r: r[1])[0]
        assert lam_min == pytest.approx(minimize_phi(2, 0.96).lambda_star, abs=1.0 / 200)
        assert lam_min > 2.0 / 3.0
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["outputs"] == {"phi_csv": "phi096.csv"}
        assert doc["config"]["points"] == 201

    def test_phi_table_flag_validation(self, capsys, tmp_path):
        out = str(tmp_path / "t.csv")
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", "--lambda", "0",
                       "--out", out, outdir=tmp_path) == EXIT_USAGE
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", "--points", "50",
                       outdir=tmp_path) == EXIT_USAGE
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", outdir=tmp_path) == EXIT_USAGE
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", "--out", out,
                       "--lambda-min", "0.9", "--lambda-max", "0.1",
                       outdir=tmp_path) == EXIT_USAGE
        assert run_cli("theory-phi", "--d", "2", "--delta", "0.8", "--out", out,
                       "--points", "1", outdir=tmp_path) == EXIT_USAGE
        capsys.readouterr()


class TestWulff:
    def test_isotropic_identity(self, capsys, tmp_path):
        assert run_cli("wulff", "--isotropic", "0.5", "--resolution", "4096",
                       outdir=tmp_path) == EXIT_OK
        values = {}
        for line in capsys.readouterr().out.splitlines():
            key, _, val = line.partition(" = ")
            values[key] = float(val)
        assert values["tau_w"] == pytest.approx(2.0 * math.sqrt(math.pi) * 0.5, rel=1e-4)
        polygon = (tmp_path / "wulff.csv").read_text().splitlines()
        assert polygon[0] == "x,y"
        assert len(polygon) > 100

    def test_ising_prints_thermo(self, capsys, tmp_path):
        assert run_cli("wulff", "--beta", "0.7", "--resolution", "256",
                       outdir=tmp_path) == EXIT_OK
        out = capsys.readouterr().out
        assert "m_star = " in out and "tau_axis = " in out and "tau_w = " in out

    def test_source_flags_exclusive(self, capsys, tmp_path):
        assert run_cli("wulff", "--beta", "0.7", "--isotropic", "1.0",
                       outdir=tmp_path) == EXIT_USAGE

    def test_subcritical_rejected(self, tmp_path):
        assert run_cli("wulff", "--beta", "0.3", outdir=tmp_path) == EXIT_USAGE


class TestChi:
    def test_ok_run(self, capsys, tmp_path):
        assert run_cli("chi", "--beta", "0.7", "--L", "16", "--sweeps", "400",
                       "--seed", "5", outdir=tmp_path) == EXIT_OK
        chi = float(capsys.readouterr().out)
        assert 0.0 < chi < 0.1
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["outputs"]["flagged"] is False
        assert doc["outputs"]["chi"] == chi

    def test_flagged_run_exits_3(self, tmp_path):
        # too few samples for blocking, the estimate is flagged but complete
        assert run_cli("chi", "--beta", "0.45", "--L", "32", "--sweeps", "16",
                       "--seed", "913", outdir=tmp_path) == EXIT_FLAGGED
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["outputs"]["flagged"] is True


SIM_ARGS = ["simulate", "--beta", "0.7", "--L", "8", "--delta", "1.3",
            "--replicas", "1", "--budget", "5", "--chi-sweeps", "400",
            "--seed", "7", "--quiet"]


class TestSimulate:
    def test_missing_beta_exits_1(self, capsys, tmp_path):
        assert run_cli("simulate", outdir=tmp_path) == EXIT_USAGE
        assert "--beta" in capsys.readouterr().err

    def test_delta_vl_exclusive(self, capsys, tmp_path):
        assert run_cli("simulate", "--beta", "0.7", "--L", "8", "--delta", "1.3",
                       "--vL", "5", outdir=tmp_path) == EXIT_USAGE

    def test_byte_identical_reruns(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*SIM_ARGS, outdir=a) == EXIT_OK
        assert run_cli(*SIM_ARGS, outdir=b) == EXIT_OK
        assert (a / "runs.csv").read_bytes() == (b / "runs.csv").read_bytes()
        assert (a / "summary.json").read_bytes() == (b / "summary.json").read_bytes()

    def test_outputs(self, tmp_path):
        assert run_cli(*SIM_ARGS, outdir=tmp_path) == EXIT_OK
        runs = (tmp_path / "runs.csv").read_text().splitlines()
        assert len(runs) == 2
        assert runs[0].startswith("beta,L,K,")
        # rate.csv always exists; header-only when logp mode is off
        assert (tmp_path / "rate.csv").read_text().count("\n") == 1
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["subcommand"] == "simulate"
        assert doc["config"]["beta"] == 0.7
        assert doc["n_points"] == 1

    def test_config_route_matches_flags(self, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({
            "beta": 0.7, "L_list": [8], "delta_grid": [1.3], "replicas": 1,
            "budget": 5, "chi_sweeps": 400, "seed": 7,
        }))
        a, b = tmp_path / "a", tmp_path / "b"
        assert run_cli(*SIM_ARGS, outdir=a) == EXIT_OK
        assert run_cli("simulate", "--config", str(cfg), "--quiet", outdir=b) == EXIT_OK
        assert (a / "runs.csv").read_bytes() == (b / "runs.csv").read_bytes()

    def test_config_clashes_with_flags(self, capsys, tmp_path):
        cfg = tmp_path / "sweep.json"
        cfg.write_text(json.dumps({"beta": 0.7, "L_list": [8], "delta_grid": [1.3]}))
        assert run_cli("simulate", "--config", str(cfg), "--beta", "0.8",
                       outdir=tmp_path) == EXIT_USAGE
        assert "--beta" in capsys.readouterr().err

    def test_stream_dir(self, tmp_path):
        streams = tmp_path / "streams"
        assert run_cli(*SIM_ARGS, "--stream-dir", str(streams), outdir=tmp_path) == EXIT_OK
        files = sorted(streams.iterdir())
        assert len(files) == 2  # one block and one random chain
        first = files[0].read_text().splitlines()
        assert first[0] == "sweep,M,energy,largest_contour_volume,n_intermediate,n_large"
        assert len(first) == 6

    def test_logp_mode_produces_rate_rows(self, tmp_path):
        assert run_cli("simulate", "--beta", "0.7", "--L", "8", "--vL", "3",
                       "--replicas", "1", "--budget", "5", "--chi-sweeps", "400",
                       "--seed", "7", "--logp", "--quiet", outdir=tmp_path) == EXIT_OK
        rate = (tmp_path / "rate.csv").read_text().splitlines()
        assert len(rate) == 2
        assert (tmp_path / "hist_L8.csv").exists()
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["logp_converged"] == [{"L": 8, "converged": True}]
        assert doc["n_rate_points"] == 1


class TestLogpAnalyze:
    def test_pipeline(self, capsys, tmp_path):
        assert run_cli("logp", "--beta", "0.7", "--L", "8", "--m-min", "40",
                       "--m-max", "64", "--seed", "3", "--production-sweeps", "2000",
                       "--max-stage-sweeps", "200000", outdir=tmp_path) == EXIT_OK
        hist = tmp_path / "hist.csv"
        assert hist.exists()
        capsys.readouterr()
        assert run_cli("analyze", "--hist", str(hist), "--v", "3", "6",
                       "--chi", "0.0215234375", outdir=tmp_path) == EXIT_OK
        out = capsys.readouterr().out.splitlines()
        assert len(out) == 2
        assert out[0].startswith("v=3.0 empirical=")
        rate = (tmp_path / "rate.csv").read_text().splitlines()
        assert len(rate) == 3
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["outputs"]["histogram_converged"] is True

    def test_unconverged_logp_exits_3(self, tmp_path):
        code = run_cli("logp", "--beta", "0.7", "--L", "8", "--m-min", "-64",
                       "--m-max", "64", "--seed", "3", "--chunk-sweeps", "5",
                       "--max-stage-sweeps", "5", "--production-sweeps", "50",
                       "--blocks", "2", outdir=tmp_path)
        assert code == EXIT_FLAGGED
        assert (tmp_path / "hist.csv").exists()
        doc = json.loads((tmp_path / "summary.json").read_text())
        assert doc["outputs"]["converged"] is False

    def test_missing_histogram_exits_2(self, capsys, tmp_path):
        assert run_cli("analyze", "--hist", str(tmp_path / "none.csv"), "--v", "3",
                       "--chi", "0.02", outdir=tmp_path) == EXIT_RUNTIME
        assert "error" in capsys.readouterr().err


class TestEnvAndEntryPoint:
    def test_outdir_env(self, tmp_path, monkeypatch, capsys):
        monkeypatch.setenv(OUTDIR_ENV, str(tmp_path / "envout"))
        assert main(["theory-critical", "--d", "2"]) == EXIT_OK
        assert (tmp_path / "envout" / "summary.json").exists()

    def test_module_entry_point(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "dropletlab", "theory-phi", "--d", "2",
             "--delta", "0.8", "--lambda", "0", "--outdir", str(tmp_path)],
            capture_output=True, text=True,
        )
        assert proc.returncode == EXIT_OK
        assert proc.stdout == "0.8\n"

    def test_usage_error_exit_code_in_subprocess(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "dropletlab", "simulate", "--outdir", str(tmp_path)],
            capture_output=True, text=True,
        )
        assert proc.returncode == EXIT_USAGE
        assert "usage error" in proc.stderr
        assert proc.stderr.count("\n") == 1  # one-line diagnostic
