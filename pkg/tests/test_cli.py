import json
import math

import pytest

from laguerre_ladder.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# -- eval -------------------------------------------------------------------------


def test_eval_ground_value(capsys):
    code, out, _ = run(capsys, "eval", "--family", "M", "--n", "0", "--alpha", "0", "--x", "0")
    assert code == 0
    assert out.strip() == "1"


def test_eval_plane_mode(capsys):
    code, out, _ = run(
        capsys, "eval", "--family", "Z", "--j", "1", "--m", "1", "--r", "1", "--phi", "0"
    )
    assert code == 0
    re, im = map(float, out.strip().split(","))
    # sqrt((j+m)!/(j-m)!) x^(-m) exp(-x/2) at x = 1 times the extended
    # polynomial x^2/2 collapses to exp(-1/2)/sqrt(2)
    assert re == pytest.approx(math.exp(-0.5) / math.sqrt(2), rel=1e-14)
    assert im == 0.0


def test_eval_invalid_labels(capsys):
    code, _, err = run(
        capsys, "eval", "--family", "M", "--n", "1", "--alpha", "-5", "--x", "1"
    )
    assert code == 2
    assert "n + alpha must be non-negative" in err


def test_eval_multiple_points(capsys):
    code, out, _ = run(
        capsys, "eval", "--family", "scriptM", "--n", "1", "--p", "1",
        "--x", "0", "--x", "1",
    )
    assert code == 0
    values = [float(v) for v in out.split()]
    assert values[0] == 1.0
    assert values[1] == 0.0


def test_eval_missing_option(capsys):
    code, _, err = run(capsys, "eval", "--family", "M", "--n", "1", "--x", "1")
    assert code == 2
    assert "--alpha" in err


# -- table ------------------------------------------------------------------------


def test_table_rows(capsys):
    code, out, _ = run(
        capsys, "table", "--family", "M", "--n", "1", "--alpha", "0",
        "--xmax", "2", "--points", "3",
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x,value"
    assert lines[1] == "0,1"
    assert lines[2] == "1,0"
    assert float(lines[3].split(",")[1]) == pytest.approx(-math.exp(-1.0), rel=1e-15)


# -- verify -----------------------------------------------------------------------


def test_verify_exact_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "exact", "--nmax", "8")
    assert code == 0
    report = json.loads(out)
    assert report["all_pass"] is True
    for check in report["suites"]["exact"].values():
        assert check["mode"] == "exact"
        assert check["max_residual"] == 0.0


def test_verify_algebra_reports_casimirs(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "algebra", "--nmax", "6")
    assert code == 0
    checks = json.loads(out)["suites"]["algebra"]
    for name in ("casimir-boson", "casimir-su2", "casimir-su11", "casimir-r", "casimir-s"):
        assert checks[name]["pass"] is True


def test_verify_so32_names_value(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "so32")
    assert code == 0
    checks = json.loads(out)["suites"]["so32"]
    assert checks["killing-casimir-value"]["eigenvalue"] == pytest.approx(-1.25, abs=1e-8)
    assert checks["killing-casimir-value"]["reference"] == -1.25


def test_verify_defect_fails_and_names_identity(capsys):
    code, out, err = run(
        capsys, "verify", "--suite", "algebra", "--nmax", "4", "--defect", "jplus-sign"
    )
    assert code == 1
    report = json.loads(out)
    assert report["all_pass"] is False
    failing = [n for n, c in report["suites"]["algebra"].items() if not c["pass"]]
    assert "su2-commutators" in failing
    assert "FAILED algebra/su2-commutators" in err


def test_verify_output_is_deterministic(capsys):
    _, first, _ = run(capsys, "verify", "--suite", "quadrature", "--nmax", "6", "--order", "32")
    _, second, _ = run(capsys, "verify", "--suite", "quadrature", "--nmax", "6", "--order", "32")
    assert first == second


def test_worker_pool_does_not_change_report(capsys, monkeypatch):
    from laguerre_ladder.verify import WORKERS_ENV

    args = ["verify", "--suite", "all", "--nmax", "4", "--alpha-max", "4",
            "--order", "16", "--jmax", "2", "--angular", "16"]
    _, serial, _ = run(capsys, *args)
    monkeypatch.setenv(WORKERS_ENV, "4")
    _, pooled, _ = run(capsys, *args)
    assert serial == pooled


# -- gram ------------------------------------------------------------------------


def test_gram_csv(capsys):
    code, out, _ = run(capsys, "gram", "--alpha", "2", "--nmax", "3", "--order", "16")
    assert code == 0
    rows = [line.split(",") for line in out.strip().splitlines()]
    assert len(rows) == 4 and all(len(r) == 4 for r in rows)
    for i, row in enumerate(rows):
        for k, cell in enumerate(row):
            assert float(cell) == pytest.approx(float(i == k), abs=1e-11)


# -- decompose / modes pipeline ------------------------------------------------------


def _write_single_mode_field(tmp_path, capsys, j, m, radial=16, angular=16):
    path = tmp_path / "modes.csv"
    path.write_text(f"j,m,re,im\n{j},{m},1,0\n")
    code, out, _ = run(
        capsys, "modes", "--input", str(path), "--to-field",
        "--radial-order", str(radial), "--angular", str(angular),
    )
    assert code == 0
    field = tmp_path / "field.csv"
    field.write_text(out)
    return field


def test_decompose_single_mode(tmp_path, capsys):
    field = _write_single_mode_field(tmp_path, capsys, 2, 1)
    code, out, err = run(capsys, "decompose", "--input", str(field), "--jmax", "4")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "j,m,re,im,power"
    assert len(lines) == 2
    j, m, re, im, power = lines[1].split(",")
    assert (j, m) == ("2", "1")
    assert float(power) == pytest.approx(1.0, abs=1e-10)
    assert "captured power" in err


def test_decompose_jmax_zero(tmp_path, capsys):
    field = _write_single_mode_field(tmp_path, capsys, 0, 0)
    code, out, _ = run(capsys, "decompose", "--input", str(field), "--jmax", "0")
    assert code == 0
    j, m, re, im, power = out.strip().splitlines()[1].split(",")
    assert (j, m) == ("0", "0")
    assert float(re) == pytest.approx(1.0, abs=1e-10)


def test_decompose_bad_cell_names_line(tmp_path, capsys):
    field = _write_single_mode_field(tmp_path, capsys, 1, 0)
    lines = field.read_text().splitlines()
    lines[6] = lines[6].replace(lines[6].split(",")[2], "not-a-number", 1)
    field.write_text("\n".join(lines) + "\n")
    code, _, err = run(capsys, "decompose", "--input", str(field), "--jmax", "2")
    assert code == 2
    assert "line 7" in err


def test_decompose_insufficient_grid(tmp_path, capsys):
    field = _write_single_mode_field(tmp_path, capsys, 1, 0, radial=16, angular=16)
    code, _, err = run(capsys, "decompose", "--input", str(field), "--jmax", "10")
    assert code == 2
    assert "angular" in err or "radial" in err


def test_modes_apply_raising(tmp_path, capsys):
    path = tmp_path / "modes.csv"
    path.write_text("j,m,re,im\n1,0,1,0\n")
    code, out, _ = run(capsys, "modes", "--input", str(path), "--apply", "Jplus")
    assert code == 0
    j, m, re, im, power = out.strip().splitlines()[1].split(",")
    assert (j, m) == ("1", "1")
    assert float(re) == pytest.approx(math.sqrt(2), rel=1e-15)


def test_modes_bad_header(tmp_path, capsys):
    path = tmp_path / "modes.csv"
    path.write_text("a,b,c,d\n1,0,1,0\n")
    code, _, err = run(capsys, "modes", "--input", str(path))
    assert code == 2
    assert "line 1" in err
