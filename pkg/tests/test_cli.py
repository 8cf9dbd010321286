import json
import subprocess
import sys
from pathlib import Path

import jsonschema
import pytest

import phaserange.cli as cli
from phaserange.cli import main

from conftest import PLAN_FILES, REPO_ROOT

BASIS_SCHEMA = json.loads((REPO_ROOT / "schemas" / "basis.schema.json").read_text())
ESTIMATE_SCHEMA = json.loads((REPO_ROOT / "schemas" / "estimate.schema.json").read_text())


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def phases_for_range_20(tmp_path):
    """Noiseless phases for r0 = 20 under the 4-wavelength coprime plan."""
    f = tmp_path / "phases.txt"
    f.write_text("0.0\n" + f"{-1/3!r}\n" + "0.0\n" + f"{-1/7!r}\n")
    return f


class TestBasisCommand:
    def test_coprime_four(self, capsys):
        code, out, _ = run_cli(capsys, "basis", str(PLAN_FILES["coprime_integer_4"]))
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, BASIS_SCHEMA)
        assert doc["P"] == "210"
        assert doc["v"] == [105, 70, 42, 30]
        assert doc["gcd_chain"] == [1, 2, 6, 30]
        assert doc["pairwise_coprime_scalable"] is True
        assert [row[0] for row in doc["U"]] == [105, 70, 42, 30]
        assert len(doc["B"]) == 4 and len(doc["B"][0]) == 3

    def test_general_four_diagnostic(self, capsys):
        code, out, _ = run_cli(capsys, "basis", str(PLAN_FILES["general_rational_4"]))
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, BASIS_SCHEMA)
        assert doc["pairwise_coprime_scalable"] is False
        assert doc["integer_scale"] == "6124949/210"
        assert doc["scaled_wavelengths"] == [77531, 100409, 149389, 197579]

    def test_general_five_parses(self, capsys):
        code, out, _ = run_cli(capsys, "basis", str(PLAN_FILES["general_rational_5"]))
        assert code == 0
        doc = json.loads(out)
        assert doc["P"] == "2310"
        assert doc["v"] == [877, 523, 277, 221, 211]

    def test_single_wavelength_exit_2(self, capsys, tmp_path):
        f = tmp_path / "plan.txt"
        f.write_text("5\n")
        code, _, err = run_cli(capsys, "basis", str(f))
        assert code == 2
        assert "2 wavelengths" in err

    def test_bad_token_names_line(self, capsys, tmp_path):
        f = tmp_path / "plan.txt"
        f.write_text("2\n3\nnot-a-number\n7\n")
        code, _, err = run_cli(capsys, "basis", str(f))
        assert code == 2
        assert f"{f}:3" in err

    def test_missing_file_exit_2(self, capsys, tmp_path):
        code, _, err = run_cli(capsys, "basis", str(tmp_path / "nope.txt"))
        assert code == 2
        assert "nope.txt" in err

    def test_comments_and_blanks_ok(self, capsys, tmp_path):
        f = tmp_path / "plan.txt"
        f.write_text("# header\n\n2  # inline\n3\n5\n7\n")
        code, out, _ = run_cli(capsys, "basis", str(f))
        assert code == 0
        assert json.loads(out)["P"] == "210"


class TestEstimateCommand:
    def test_noiseless_range_20(self, capsys, phases_for_range_20):
        code, out, _ = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]),
            str(phases_for_range_20),
        )
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, ESTIMATE_SCHEMA)
        assert doc["r_hat"] == pytest.approx(20.0, abs=1e-7)
        assert doc["residual"] < 1e-12
        assert len(doc["z_hat"]) == 4

    def test_verify_flag_agrees(self, capsys, phases_for_range_20):
        code, out, _ = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]),
            str(phases_for_range_20), "--verify",
        )
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, ESTIMATE_SCHEMA)
        assert doc["oracle_agrees"] is True
        assert doc["oracle"]["grid_points"] == 1_000_000
        assert doc["oracle"]["r"] == pytest.approx(20.0, abs=1e-3)

    def test_verify_flag_on_noisy_input(self, capsys, tmp_path):
        import numpy as np

        from phaserange import build_plan, synthesize_observation
        from phaserange.wavelength_sets import COPRIME_INTEGER_4

        rng = np.random.default_rng(21)
        plan = build_plan(COPRIME_INTEGER_4)
        obs = synthesize_observation(plan, 87.3, rng.normal(0, 0.01, size=4))
        f = tmp_path / "phases.txt"
        f.write_text("".join(f"{float(v)!r}\n" for v in obs.values))
        code, out, _ = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]),
            str(f), "--verify",
        )
        assert code == 0
        doc = json.loads(out)
        jsonschema.validate(doc, ESTIMATE_SCHEMA)
        assert doc["oracle_agrees"] is True

    def test_phase_count_mismatch_exit_2(self, capsys, tmp_path):
        f = tmp_path / "phases.txt"
        f.write_text("0.1\n0.2\n")
        code, _, err = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]), str(f)
        )
        assert code == 2
        assert "4 wavelengths" in err

    def test_phase_out_of_range_exit_2(self, capsys, tmp_path):
        f = tmp_path / "phases.txt"
        f.write_text("0.1\n0.2\n0.7\n0.0\n")
        code, _, err = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]), str(f)
        )
        assert code == 2

    def test_bad_phase_token_names_line(self, capsys, tmp_path):
        f = tmp_path / "phases.txt"
        f.write_text("0.1\nxyz\n0.0\n0.0\n")
        code, _, err = run_cli(
            capsys, "estimate", str(PLAN_FILES["coprime_integer_4"]), str(f)
        )
        assert code == 2
        assert f"{f}:2" in err


class TestSimulateCommand:
    def test_default_grid_row_count(self, capsys, tmp_path):
        out_file = tmp_path / "sweep.csv"
        code, _, _ = run_cli(
            capsys, "simulate", "--plan", str(PLAN_FILES["coprime_integer_4"]),
            "--trials", "20", "--seed", "7", "--out", str(out_file),
        )
        assert code == 0
        lines = out_file.read_text().splitlines()
        assert lines[0] == "sigma2,mse,trials,mean_error,max_abs_error"
        assert len(lines) == 26

    def test_byte_identical_with_same_seed(self, capsys, tmp_path):
        args = [
            "simulate", "--plan", str(PLAN_FILES["general_rational_4"]),
            "--trials", "50", "--seed", "123",
            "--sigma2-min", "1e-5", "--sigma2-max", "1e-3", "--sigma2-points", "4",
        ]
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(args + ["--out", str(a)]) == 0
        assert main(args + ["--out", str(b)]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_stdout_output(self, capsys):
        code, out, _ = run_cli(
            capsys, "simulate", "--plan", str(PLAN_FILES["coprime_integer_4"]),
            "--trials", "10", "--sigma2-points", "2",
        )
        assert code == 0
        assert out.startswith("sigma2,")

    def test_r0_outside_period_exit_2(self, capsys, tmp_path):
        f = tmp_path / "plan.txt"
        f.write_text("3\n2\n")  # period 6
        code, _, err = run_cli(capsys, "simulate", "--plan", str(f))
        assert code == 2
        assert "r0" in err


class TestExitCodes:
    def test_internal_check_maps_to_3(self, capsys, monkeypatch):
        from phaserange.errors import InternalCheckError

        def boom(plan):
            raise InternalCheckError("synthetic")

        monkeypatch.setattr(cli, "build_dual_basis", boom)
        code, _, err = run_cli(capsys, "basis", str(PLAN_FILES["coprime_integer_4"]))
        assert code == 3
        assert "internal error" in err

    def test_console_script_installed(self):
        proc = subprocess.run(
            [sys.executable, "-m", "phaserange.cli", "basis",
             str(PLAN_FILES["coprime_integer_4"])],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert json.loads(proc.stdout)["P"] == "210"
