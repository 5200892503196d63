"""Command-line surface: human output, JSON sidecars, exit codes."""

import json
import pathlib
import subprocess
import sys

import pytest

from tiltkit.cli import main

REPO_ROOT = pathlib.Path(__file__).resolve().parents[1]
A3R = str(REPO_ROOT / "fixtures" / "fix_a3r.qws")
A2 = str(REPO_ROOT / "fixtures" / "fix_a2.qws")


@pytest.fixture(autouse=True)
def run_in_tmp(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)


def run(argv, capsys):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestCommands:
    def test_classify_prints_summary_verdicts(self, capsys):
        code, out, _ = run([A3R, "classify", "S3"], capsys)
        assert code == 0
        assert "X(2): yes; B(0): yes; B(2): no" in out.splitlines()
        assert "report written to classify-report.json" in out

    def test_classify_explicit_classes(self, capsys):
        code, out, _ = run([A3R, "classify", "S2", "K0", "X1", "B(2)"], capsys)
        assert code == 0
        assert "K0: yes; X(1): no; B(2): yes" in out.splitlines()

    def test_filter_jms_factor_vertex_dims_sum_to_module(self, capsys):
        code, out, _ = run([A3R, "filter-jms", "S2"], capsys)
        assert code == 0
        assert "factor vertex dims sum to (0, 1, 0)" in out
        assert "factor K0" in out and "factor K1" in out and "factor K2" in out

    def test_validate_tilting_passes_on_both_fixtures(self, capsys):
        for ws, n in ((A3R, 2), (A2, 1)):
            code, out, _ = run([ws, "validate-tilting"], capsys)
            assert code == 0
            assert "validation: pass" in out
            assert f"projective dimension n = {n}" in out

    def test_phi_dims(self, capsys):
        code, out, _ = run([A3R, "phi", "S2"], capsys)
        assert code == 0
        assert "Phi dims of S2: (1, 1, 0)" in out

    def test_psi_of_regular_is_the_tilting_module(self, capsys):
        code, out, _ = run([A3R, "psi", "regular"], capsys)
        assert code == 0
        assert "(0, 0, 5)" in out

    def test_psi_of_phi_cohomology(self, capsys):
        code, out, _ = run([A3R, "psi", "phi:S2:1"], capsys)
        assert code == 0
        assert "Psi dims of phi:S2:1 (degrees -2..0): (1, 0, 0)" in out

    def test_filter_general_on_hereditary_fixture(self, capsys):
        code, out, _ = run([A2, "filter-general", "S2"], capsys)
        assert code == 0
        assert "factor T(1)" in out and "factor F(1)" in out

    def test_check_lemma(self, capsys):
        code, out, _ = run([A3R, "check-lemma", "L7", "--dim-cap", "2"], capsys)
        assert code == 0
        assert "check L7 over 12 objects: confirmed" in out

    def test_check_pairs(self, capsys):
        code, out, _ = run([A3R, "check-pairs", "--dim-cap", "2", "--perp-bound", "3"], capsys)
        assert code == 0
        assert "pair (B(2), B(2)-perp) on the base side: pass" in out
        assert "pair (C(0), C(0)-perp) on the end side: pass" in out

    def test_check_hearts_unknowns_gate_the_exit_code(self, capsys):
        argv = [A3R, "check-hearts", "--dim-cap", "2", "--perp-bound", "3"]
        code, out, _ = run(argv, capsys)
        assert code == 1
        assert "0 refuted" in out
        assert "mirror observation table" in out
        code, _, _ = run(argv + ["--allow-unknown"], capsys)
        assert code == 0

    def test_check_hearts_hereditary_sweep(self, capsys):
        code, out, _ = run([A2, "check-hearts", "--dim-cap", "3"], capsys)
        assert code == 0
        assert "tilted heart sweep over 12 modules" in out

    def test_sweep(self, capsys):
        code, out, _ = run([A3R, "sweep", "2"], capsys)
        assert code == 0
        assert "S2: phi (1, 1, 0); classes B(2); roundtrip pass" in out
        assert "swept 12 modules: 0 failure(s), 0 unknown(s)" in out


class TestSidecarsAndVerify:
    def test_sidecar_verifies_and_custom_path(self, capsys, tmp_path):
        code, _, _ = run([A3R, "filter-jms", "S2", "--report", "my.json"], capsys)
        assert code == 0 and (tmp_path / "my.json").exists()
        code, out, _ = run([A3R, "verify", "my.json"], capsys)
        assert code == 0
        assert "report verifies" in out

    def test_verify_rejects_tampered_report(self, capsys, tmp_path):
        run([A3R, "filter-jms", "S2"], capsys)
        rep = json.loads((tmp_path / "filter-jms-report.json").read_text())
        rep["results"][0]["factors"][0]["dim"] = 3
        (tmp_path / "bad.json").write_text(json.dumps(rep))
        code, out, _ = run([A3R, "verify", "bad.json"], capsys)
        assert code == 1
        assert "factor 0 [K0]" in out and "does NOT verify" in out

    def test_verify_rejects_wrong_workspace(self, capsys, tmp_path):
        run([A3R, "classify", "S3"], capsys)
        code, out, _ = run([A2, "verify", "classify-report.json"], capsys)
        assert code == 1
        assert "digest mismatch" in out

    def test_verify_missing_file_is_a_usage_error(self, capsys):
        code, _, err = run([A3R, "verify", "nope.json"], capsys)
        assert code == 2
        assert "cannot read report" in err

    def test_sidecar_echoes_command_and_options(self, capsys, tmp_path):
        run([A3R, "classify", "S3", "--enum-cap", "5"], capsys)
        rep = json.loads((tmp_path / "classify-report.json").read_text())
        assert rep["command"] == ["classify", "S3"]
        assert rep["options"]["enum_cap"] == 5
        assert rep["options"]["perp_bound"] == 6  # workspace default


class TestErrors:
    def test_empty_workspace_file(self, capsys, tmp_path):
        empty = tmp_path / "empty.qws"
        empty.write_text("")
        code, _, err = run([str(empty), "classify", "S1"], capsys)
        assert code == 2
        assert "missing [field]" in err

    def test_unknown_module(self, capsys):
        code, _, err = run([A3R, "phi", "S9"], capsys)
        assert code == 2
        assert "unknown module 'S9'" in err

    def test_bad_psi_object(self, capsys):
        code, _, err = run([A3R, "psi", "bogus"], capsys)
        assert code == 2
        assert "unknown end-side object" in err

    def test_bad_class_token(self, capsys):
        code, _, err = run([A3R, "classify", "S2", "Q7"], capsys)
        assert code == 2
        assert "unknown class" in err

    def test_unknown_command_exits_2(self, capsys):
        with pytest.raises(SystemExit) as exc:
            main([A3R, "frobnicate"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestSubprocess:
    def test_module_invocation(self, tmp_path):
        proc = subprocess.run(
            [sys.executable, "-m", "tiltkit", A3R, "classify", "S3"],
            capture_output=True, text=True, cwd=tmp_path, timeout=120,
        )
        assert proc.returncode == 0
        assert "X(2): yes; B(0): yes; B(2): no" in proc.stdout
