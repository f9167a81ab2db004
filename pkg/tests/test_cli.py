"""Command-line behavior: exit codes, report schema, gen/verify round trips.

Everything runs in-process through main(argv) except one true subprocess
check of the installed console script.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from gdrazin import CaseSpec, generate, preset
from gdrazin.cli import EXIT_IO, EXIT_MISMATCH, EXIT_OK, EXIT_PRECONDITION, main
from gdrazin.io import load_matrix, save_instance, save_matrix

REPORT_KEYS = {
    "schema_version",
    "command",
    "theorem",
    "lambda",
    "conditions",
    "result",
    "oracle",
    "axiom_residuals",
    "match",
    "error",
    "wall_ms",
}


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    doc = json.loads(out) if out.lstrip().startswith("{") else None
    return code, doc


@pytest.fixture()
def pair_files(tmp_path):
    case = generate(CaseSpec(target="2.4", dim=4, lam=0.5, seed=2))
    a, b = case.pair
    pa, pb = tmp_path / "a.json", tmp_path / "b.json"
    save_matrix(pa, a)
    save_matrix(pb, b)
    return str(pa), str(pb)


@pytest.fixture()
def block_files(tmp_path):
    case = generate(CaseSpec(target="4.3", dim=4, lam=3.0, seed=1))
    paths = []
    for name in ("a", "b", "c", "d"):
        p = tmp_path / f"{name}.json"
        save_matrix(p, case.matrices[name])
        paths.append(str(p))
    return paths


class TestDrazinCommand:
    def test_happy_path_report(self, tmp_path, capsys):
        m = tmp_path / "m.json"
        save_matrix(m, np.array([[2, 0, 0], [0, 0, 1], [0, 0, 0]], dtype=complex))
        code, doc = run(["drazin", str(m)], capsys)
        assert code == EXIT_OK
        assert REPORT_KEYS <= set(doc)
        assert doc["schema_version"] == 1
        assert doc["command"] == "drazin"
        assert doc["match"] is True
        assert doc["index"] == 2
        assert set(doc["axiom_residuals"]) == {"solution", "commute", "power"}
        got = np.array([[z[0] + 1j * z[1] for z in row] for row in np.array(doc["result"]["data"]).reshape(3, 3, 2)])
        assert np.allclose(got, np.diag([0.5, 0, 0]))

    def test_ambiguous_input_exits_mismatch(self, tmp_path, capsys):
        m = tmp_path / "m.json"
        save_matrix(m, np.diag([1.0, 3e-10]).astype(complex))
        code, doc = run(["drazin", str(m)], capsys)
        assert code == EXIT_MISMATCH
        assert doc["error"] is not None

    def test_missing_file_exits_io(self, tmp_path, capsys):
        code, _ = run(["drazin", str(tmp_path / "nope.json")], capsys)
        assert code == EXIT_IO


class TestSumCommand:
    def test_match_with_given_lambda(self, pair_files, capsys):
        a, b = pair_files
        code, doc = run(["sum", a, b, "--theorem", "2.4", "--lambda", "1/2"], capsys)
        assert code == EXIT_OK
        assert doc["match"] is True
        assert doc["lambda"] == [0.5, 0.0]
        assert doc["oracle_gap"] < 1e-10
        assert all(c["holds"] for c in doc["conditions"])

    def test_auto_lambda_fits(self, tmp_path, capsys):
        # generated 2.4 pairs are degenerate (both sides of the factor
        # condition vanish), so use the canonical preset pair instead
        case = preset("example-2.5")
        a, b = case.pair
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        save_matrix(pa, a)
        save_matrix(pb, b)
        code, doc = run(["sum", str(pa), str(pb), "--theorem", "2.4"], capsys)
        assert code == EXIT_OK
        lam = complex(*doc["lambda"])
        assert abs(lam - 0.5) < 1e-8

    def test_negated_without_force_exits_precondition(self, tmp_path, capsys):
        case = generate(CaseSpec(target="2.3", dim=4, lam=0.5, seed=0, negate=True))
        a, b = case.pair
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        save_matrix(pa, a)
        save_matrix(pb, b)
        code, doc = run(["sum", str(pa), str(pb), "--theorem", "2.3", "--lambda", "1/2"], capsys)
        assert code == EXIT_PRECONDITION
        assert "precondition" in doc["error"]
        assert doc["result"] is None

    def test_closure_theorem_reports_without_matrix(self, tmp_path, capsys):
        case = generate(CaseSpec(target="2.2", dim=4, lam=2.0, seed=0))
        a, b = case.pair
        pa, pb = tmp_path / "a.json", tmp_path / "b.json"
        save_matrix(pa, a)
        save_matrix(pb, b)
        code, doc = run(["sum", str(pa), str(pb), "--theorem", "2.2", "--lambda", "2"], capsys)
        assert code == EXIT_OK
        assert doc["match"] is True
        assert doc["result"] is None  # closure is a yes/no claim


class TestBlockCommand:
    def test_match(self, block_files, capsys):
        a, b, c, d = block_files
        code, doc = run(
            ["block", a, b, c, d, "--theorem", "4.3", "--lambda", "3"], capsys
        )
        assert code == EXIT_OK
        assert doc["match"] is True
        assert doc["oracle_gap"] < 1e-10

    def test_negated_without_force_exits_precondition(self, tmp_path, capsys):
        case = generate(CaseSpec(target="4.3", dim=4, lam=3.0, seed=1, negate=True))
        paths = []
        for name in ("a", "b", "c", "d"):
            p = tmp_path / f"{name}.json"
            save_matrix(p, case.matrices[name])
            paths.append(str(p))
        code, doc = run(
            ["block", *paths, "--theorem", "4.3", "--lambda", "3"], capsys
        )
        assert code == EXIT_PRECONDITION
        assert case.broken in doc["error"]

    def test_forced_failing_output_is_flagged(self, tmp_path, capsys):
        # this negated instance evaluates to a matrix that fails the axiom
        # check, so force must surface a mismatch, never exit 0
        case = generate(CaseSpec(target="4.1", dim=4, lam=0.5, seed=3, negate=True))
        paths = []
        for name in ("a", "b", "c", "d"):
            p = tmp_path / f"{name}.json"
            save_matrix(p, case.matrices[name])
            paths.append(str(p))
        code, doc = run(
            ["block", *paths, "--theorem", "4.1", "--lambda", "1/2", "--force"], capsys
        )
        assert code == EXIT_MISMATCH
        assert doc["match"] is False

    def test_forced_divergence_is_flagged(self, tmp_path, capsys):
        # identity blocks violate every hypothesis; the forced series blows up
        # and the run must end in the mismatch family, not in fake numbers
        for name in ("a", "b", "c", "d"):
            save_matrix(tmp_path / f"{name}.json", np.eye(3, dtype=complex))
        paths = [str(tmp_path / f"{n}.json") for n in ("a", "b", "c", "d")]
        code, doc = run(["block", *paths, "--theorem", "3.1", "--force"], capsys)
        assert code == EXIT_MISMATCH
        assert doc["error"] is not None


class TestGenVerify:
    def test_roundtrip_valid(self, tmp_path, capsys):
        out = tmp_path / "inst"
        code, doc = run(
            ["gen", "--target", "3.2", "--dim", "5", "--lambda", "i", "--seed", "4",
             "--out", str(out)], capsys
        )
        assert code == EXIT_OK
        assert doc["out_dir"] == str(out)
        assert (out / "instance.json").exists()
        code, doc = run(["verify", str(out)], capsys)
        assert code == EXIT_OK
        rows = doc["instances"]
        assert len(rows) == 1 and rows[0]["ok"]

    def test_roundtrip_negated(self, tmp_path, capsys):
        out = tmp_path / "neg"
        code, _ = run(
            ["gen", "--target", "2.3", "--dim", "4", "--lambda", "3", "--negate",
             "--out", str(out)], capsys
        )
        assert code == EXIT_OK
        code, doc = run(["verify", str(out)], capsys)
        assert code == EXIT_OK  # tripping the precondition is the contract
        assert "precondition tripped" in doc["instances"][0]["detail"]

    def test_preset_gen(self, tmp_path, capsys):
        out = tmp_path / "preset"
        code, _ = run(["gen", "--preset", "example-4.4", "--out", str(out)], capsys)
        assert code == EXIT_OK
        m = load_matrix(out / "a.json")
        assert np.array_equal(m, np.diag(np.ones(3), k=1).astype(complex))

    def test_verify_scans_subdirectories_and_filters(self, tmp_path, capsys):
        save_instance(tmp_path / "one", generate(CaseSpec(target="3.1", dim=4, lam=0.5, seed=0)))
        save_instance(tmp_path / "two", generate(CaseSpec(target="2.4", dim=4, lam=0.5, seed=0)))
        code, doc = run(["verify", str(tmp_path)], capsys)
        assert code == EXIT_OK
        assert len(doc["instances"]) == 2
        code, doc = run(["verify", str(tmp_path), "--theorem", "3.1"], capsys)
        assert code == EXIT_OK
        assert len(doc["instances"]) == 1
        assert doc["instances"][0]["target"] == "3.1"

    def test_verify_catches_tampering(self, tmp_path, capsys):
        out = tmp_path / "inst"
        case = generate(CaseSpec(target="3.2", dim=4, lam=0.5, seed=1))
        save_instance(out, case)
        tampered = case.matrices["b"].copy()
        tampered[0, 0] += 1.0
        save_matrix(out / "b.json", tampered)
        code, doc = run(["verify", str(out)], capsys)
        assert code == EXIT_MISMATCH
        assert not doc["instances"][0]["ok"]

    def test_verify_empty_directory_exits_io(self, tmp_path, capsys):
        code, _ = run(["verify", str(tmp_path)], capsys)
        assert code == EXIT_IO

    def test_gen_requires_concrete_lambda(self, tmp_path, capsys):
        code, _ = run(
            ["gen", "--target", "3.1", "--dim", "4", "--lambda", "auto",
             "--out", str(tmp_path / "x")], capsys
        )
        assert code == EXIT_IO  # usage error family


class TestUsageAndTolerances:
    def test_unknown_subcommand(self, capsys):
        assert main(["frobnicate"]) == EXIT_IO

    def test_missing_required_argument(self, capsys):
        assert main(["sum", "only-one.json"]) == EXIT_IO

    def test_bad_scalar(self, pair_files, capsys):
        a, b = pair_files
        assert main(["sum", a, b, "--theorem", "2.4", "--lambda", "wat"]) == EXIT_IO

    def test_bad_theorem_choice(self, pair_files, capsys):
        a, b = pair_files
        assert main(["sum", a, b, "--theorem", "7.7"]) == EXIT_IO

    def test_help_exits_zero(self, capsys):
        assert main(["--help"]) == EXIT_OK

    def test_env_fallback_tightens_tolerance(self, tmp_path, capsys, monkeypatch):
        m = tmp_path / "m.json"
        # coupling between the invertible and nilpotent parts leaves rounding
        # noise in the axiom residuals, so an absurd eps_match can trip them
        save_matrix(m, np.array([[2, 1, 0], [0, 0, 1], [0, 0, 0]], dtype=complex))
        code, _ = run(["drazin", str(m)], capsys)
        assert code == EXIT_OK
        monkeypatch.setenv("GDZ_TOL_MATCH", "1e-30")
        code, _ = run(["drazin", str(m)], capsys)
        assert code == EXIT_MISMATCH
        # explicit flag beats the environment
        code, _ = run(["drazin", str(m), "--eps-match", "1e-8"], capsys)
        assert code == EXIT_OK

    def test_bad_env_value_is_usage_error(self, tmp_path, capsys, monkeypatch):
        m = tmp_path / "m.json"
        save_matrix(m, np.eye(2, dtype=complex))
        monkeypatch.setenv("GDZ_TOL_RANK", "banana")
        assert main(["drazin", str(m)]) == EXIT_IO

    def test_out_flag_writes_report_file(self, pair_files, tmp_path, capsys):
        a, b = pair_files
        report = tmp_path / "report.json"
        code, _ = run(
            ["sum", a, b, "--theorem", "2.4", "--lambda", "1/2", "--out", str(report)],
            capsys,
        )
        assert code == EXIT_OK
        doc = json.loads(report.read_text())
        assert doc["match"] is True


def test_subprocess_real_exit_code(tmp_path):
    # one end-to-end run in a real process, so the exit code crosses an
    # actual process boundary instead of a return value
    m = tmp_path / "m.json"
    save_matrix(m, np.diag([1.0, 2.0]).astype(complex))
    proc = subprocess.run(
        [sys.executable, "-m", "gdrazin.cli", "drazin", str(m)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0
    doc = json.loads(proc.stdout)
    assert doc["match"] is True
