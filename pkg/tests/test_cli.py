"""End-to-end tests of the command-line interface, run in process.

Each test invokes ``gisieve.cli.run`` with an argv list and inspects the
captured stdout/stderr and the exit status: 0 for success, 1 for an
honest numeric failure (a detected identity mismatch), 2 for usage and
domain errors.
"""

from __future__ import annotations

import json
import math

import pytest

from gisieve.archimedean import QuadratureConfig
from gisieve.cli import run


def _json_payload(capsys):
    out = capsys.readouterr().out
    return json.loads(out)


# ---------------------------------------------------------------------------
# Point evaluations
# ---------------------------------------------------------------------------


def test_kloosterman_worked_example(capsys):
    # S(1, 1; 2+i) = 2 + 2 cos(2 pi / 5): the residue field has five
    # elements and the additive character sends a to e(2a/5).
    assert run(["kloosterman", "--m", "1", "--n", "1", "--c", "2+i"]) == 0
    out = capsys.readouterr().out
    assert "2.618034" in out
    assert "# command = kloosterman" in out


def test_kloosterman_json_payload(capsys):
    code = run(["kloosterman", "--m", "1", "--n", "1", "--c", "2+i", "--format", "json"])
    assert code == 0
    payload = _json_payload(capsys)
    assert payload["tool"] == "gisieve"
    assert payload["command"] == "kloosterman"
    assert payload["columns"] == ["m", "n", "c", "value_re", "value_im", "abs"]
    (row,) = payload["rows"]
    assert row[0] == "1" and row[2] == "2+i"
    assert float(row[5]) == pytest.approx(2 + 2 * math.cos(2 * math.pi / 5), abs=1e-12)


def test_fsum_even_modulus(capsys):
    # F(1; 2) = 2 (both units mod 2 contribute e[1] = 1).
    assert run(["fsum", "--w", "1", "--c", "2", "--format", "json"]) == 0
    (row,) = _json_payload(capsys)["rows"]
    assert float(row[2]) == pytest.approx(2.0, abs=1e-12)
    assert float(row[3]) == pytest.approx(0.0, abs=1e-12)


def test_charsum_exps_filter(capsys):
    assert run(["charsum", "--c", "4", "--format", "json"]) == 0
    all_rows = _json_payload(capsys)["rows"]
    assert len(all_rows) > 1
    first_exps = all_rows[0][0].replace(":", ",")
    assert run(["charsum", "--c", "4", "--exps", first_exps, "--format", "json"]) == 0
    filtered = _json_payload(capsys)["rows"]
    assert len(filtered) == 1
    assert filtered[0] == all_rows[0]


def test_bessel_three_representations_agree(capsys):
    code = run(
        ["bessel", "--z", "0.5", "--T", "1", "--P", "1", "--compare", "--format", "json"]
    )
    assert code == 0
    payload = _json_payload(capsys)
    values = {name: complex(v.replace("j", "j")) for name, v in
              ((row[0], row[1]) for row in payload["rows"])}
    assert set(values) == {"spectral", "derivative", "weighted", "max_deviation"}
    assert abs(values["max_deviation"]) < 1e-8


def test_zeta_smoothed_dedekind_value(capsys):
    # zeta(2, 0) is the Dedekind zeta value zeta(2) L(2, chi_-4)
    # = (pi^2 / 6) * Catalan = 1.50670...
    assert run(["zeta", "--s", "2", "--p", "0", "--smoothed", "--format", "json"]) == 0
    (row,) = _json_payload(capsys)["rows"]
    want = (math.pi**2 / 6) * 0.9159655941772190
    assert float(row[2]) == pytest.approx(want, abs=1e-4)


def test_plancherel_quadrature_matches_closed_form(capsys):
    assert run(["plancherel", "--T", "1", "--P", "1", "--format", "json"]) == 0
    payload = _json_payload(capsys)
    rows = {row[0]: float(row[1]) for row in payload["rows"]}
    assert rows["closed_form"] == pytest.approx(3.1387, abs=5e-4)
    assert rows["abs_difference"] < 1e-8


# ---------------------------------------------------------------------------
# Experiments (determinism)
# ---------------------------------------------------------------------------


def test_hybrid_deterministic_across_runs(capsys):
    argv = ["hybrid", "--C", "4", "--T", "2", "--N", "10", "--trials", "4", "--format", "json"]
    assert run(argv) == 0
    first = capsys.readouterr().out
    assert run(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    payload = json.loads(first)
    (row,) = payload["rows"]
    assert row[0] == "hybrid" and int(row[1]) == 4
    assert float(row[4]) > 0


def test_quadform_runs_and_reports_ratio(capsys):
    argv = [
        "quadform", "--d", "1", "--theta", "0.5", "--C", "3", "--M", "2", "--N", "2",
        "--trials", "3", "--format", "json",
    ]
    assert run(argv) == 0
    (row,) = _json_payload(capsys)["rows"]
    ratio = float(row[4])
    assert math.isfinite(ratio) and ratio >= 0


def test_eisenstein_experiment_runs(capsys):
    argv = ["eisenstein", "--T", "2", "--P", "1", "--N", "8", "--trials", "3", "--format", "json"]
    assert run(argv) == 0
    (row,) = _json_payload(capsys)["rows"]
    assert float(row[4]) > 0


def test_kuznetsov_geometric_side_runs(capsys):
    argv = [
        "kuznetsov-geom", "--m", "1", "--n", "1", "--T", "1", "--P", "1",
        "--c-norm-max", "40", "--format", "json",
    ]
    assert run(argv) == 0
    payload = _json_payload(capsys)
    assert payload["command"] == "kuznetsov-geom"
    assert payload["rows"]


# ---------------------------------------------------------------------------
# Identity suites
# ---------------------------------------------------------------------------


def test_verify_all_default_range_passes(capsys):
    assert run(["verify"]) == 0
    out = capsys.readouterr().out
    assert "FAIL" not in out
    for suite in ("mellin", "parseval", "twisted", "lemma", "selberg", "shift",
                  "weil", "bessel", "plancherel"):
        assert suite in out


def test_verify_charsum_group_only(capsys):
    assert run(["verify", "charsum", "--max-norm", "100", "--format", "json"]) == 0
    payload = _json_payload(capsys)
    names = [row[0] for row in payload["rows"]]
    assert names == ["mellin", "parseval", "twisted"]
    assert all(row[4] == "pass" for row in payload["rows"])
    assert all(float(row[2]) < 1e-9 for row in payload["rows"])


def test_verify_unknown_suite_is_usage_error(capsys):
    assert run(["verify", "bogus"]) == 2
    err = capsys.readouterr().err
    assert "unknown suite 'bogus'" in err


def test_verify_max_norm_too_small(capsys):
    assert run(["verify", "--max-norm", "1"]) == 2
    assert "max_norm >= 2" in capsys.readouterr().err


def test_lemma_check_clean_below_first_dyadic_failure(capsys):
    assert run(["lemma-check", "--max-norm", "32"]) == 0
    out = capsys.readouterr().out
    assert "0 mismatches" in out
    assert "MISMATCH" not in out


def test_lemma_check_reports_dyadic_failures(capsys):
    # The first disagreements with the stated case formulas appear at
    # modulus norm 64: two characters there.
    assert run(["lemma-check", "--max-norm", "64"]) == 1
    out = capsys.readouterr().out
    assert "2 mismatches" in out
    assert out.count("MISMATCH") == 2
    assert "# mismatch:" in out


# ---------------------------------------------------------------------------
# Report formats and output files
# ---------------------------------------------------------------------------


def test_csv_format_shape(capsys):
    assert run(["kloosterman", "--m", "1", "--n", "1", "--c", "2+i", "--format", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("# gisieve ")
    assert "m,n,c,value_re,value_im,abs" in lines
    data = [ln for ln in lines if ln.startswith("1,1,2+i,")]
    assert len(data) == 1


def test_out_file_matches_stdout(tmp_path, capsys):
    path = tmp_path / "report.json"
    argv = ["fsum", "--w", "3", "--c", "2+i", "--format", "json", "--out", str(path)]
    assert run(argv) == 0
    out = capsys.readouterr().out
    assert path.read_text() == out


def test_quadrature_file_is_honoured(tmp_path, capsys):
    cfg = QuadratureConfig(gl_order=24)
    path = tmp_path / "quad.json"
    cfg.to_file(path)
    assert run(["plancherel", "--quadrature", str(path), "--format", "json"]) == 0
    payload = _json_payload(capsys)
    assert payload["config"]["quadrature.gl_order"] == "24"


def test_missing_quadrature_file_is_domain_error(capsys):
    assert run(["plancherel", "--quadrature", "/nonexistent/quad.json"]) == 2
    assert "plancherel" in capsys.readouterr().err


# ---------------------------------------------------------------------------
# Usage errors
# ---------------------------------------------------------------------------


def test_missing_required_flag(capsys):
    assert run(["kloosterman", "--m", "1", "--n", "1"]) == 2


def test_unknown_command(capsys):
    assert run(["frobnicate"]) == 2


def test_bad_gaussian_literal(capsys):
    assert run(["kloosterman", "--m", "1", "--n", "1", "--c", "pear"]) == 2
    assert "kloosterman" in capsys.readouterr().err


def test_bad_complex_literal(capsys):
    assert run(["bessel", "--z", "wibble"]) == 2
    assert "not a complex literal" in capsys.readouterr().err


def test_help_exits_zero(capsys):
    assert run(["--help"]) == 0
    assert "usage:" in capsys.readouterr().out
