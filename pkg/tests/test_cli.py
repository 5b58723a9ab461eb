import json

import numpy as np
import pytest

import covreg as cr
from covreg.cli import main
from covreg.serialize import matrix_from_csv

PANEL_CSV = (
    "id,t0,t1,t2,t3,t4\n"
    "AAA,0.010,0.020,-0.010,0.005,0.015\n"
    "BBB,-0.020,0.000,0.030,-0.010,0.010\n"
    "CCC,0.005,-0.015,0.010,0.020,-0.005\n"
)


@pytest.fixture
def panel_path(tmp_path):
    p = tmp_path / "panel.csv"
    p.write_text(PANEL_CSV)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_scm_matches_library(panel_path, capsys):
    code, out, _ = run(capsys, "scm", "-i", panel_path)
    assert code == 0
    expected = cr.sample_covariance(cr.demean(cr.loads_panel(PANEL_CSV))).c
    np.testing.assert_allclose(matrix_from_csv(out), expected, rtol=1e-11)


def test_spectral_from_matrix(panel_path, tmp_path, capsys):
    code, out, _ = run(capsys, "scm", "-i", panel_path)
    mat = tmp_path / "scm.csv"
    mat.write_text(out)
    code, out, _ = run(capsys, "spectral", "-i", str(mat))
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 3
    assert payload["n_positive"] <= 3
    assert payload["eigenvalues"] == sorted(payload["eigenvalues"], reverse=True)


def test_shrink_q0_equals_scm_byte_for_byte(panel_path, capsys):
    _, scm_out, _ = run(capsys, "scm", "-i", panel_path)
    _, shrink_out, _ = run(
        capsys, "shrink", "-i", panel_path, "--q", "0", "--target", "diagonal"
    )
    assert shrink_out == scm_out


def test_shrink_emits_factor_model(panel_path, capsys):
    code, out, _ = run(
        capsys, "shrink", "-i", panel_path, "--q", "0.5", "--json"
    )
    assert code == 0
    payload = json.loads(out)
    assert payload["factor_model"]["q"] == 0.5
    n = payload["dense"]["n"]
    dense = np.array(payload["dense"]["data"]).reshape(n, n)
    fm = cr.FactorModel.from_json_dict(payload["factor_model"])
    np.testing.assert_allclose(cr.dense(fm), dense, atol=1e-12)


def test_truncate_fhat0_is_diagonal(panel_path, capsys):
    code, out, _ = run(
        capsys, "truncate", "-i", panel_path, "--f-hat", "0",
        "--target", "diagonal",
    )
    assert code == 0
    m = matrix_from_csv(out)
    off = m - np.diag(np.diag(m))
    assert np.abs(off).max() <= 1e-12 * np.abs(m).max()


def test_truncate_json_includes_nu(panel_path, capsys):
    code, out, _ = run(
        capsys, "truncate", "-i", panel_path, "--f-hat", "1", "--json"
    )
    payload = json.loads(out)
    assert payload["factor_model"]["f_hat"] == 1
    assert len(payload["factor_model"]["nu"]) == 3


def test_baiyin_deterministic(capsys):
    _, a, _ = run(capsys, "baiyin", "--n", "20", "--m", "80",
                  "--trials", "3", "--seed", "7")
    _, b, _ = run(capsys, "baiyin", "--n", "20", "--m", "80",
                  "--trials", "3", "--seed", "7")
    assert a == b
    payload = json.loads(a)
    assert payload["lambda_max_limit"] == 2.25


def test_eval_table_and_json(panel_path, tmp_path, capsys):
    big = tmp_path / "big.csv"
    panel = cr.generate_panel(cr.SyntheticSpec(n_assets=5, n_obs=40, seed=3))
    rows = ["id," + ",".join(f"t{s}" for s in range(40))]
    for i, aid in enumerate(panel.asset_ids):
        rows.append(aid + "," + ",".join(repr(float(v)) for v in panel.returns[i]))
    big.write_text("\n".join(rows) + "\n")
    code, out, _ = run(
        capsys, "eval", "-i", str(big), "--split", "0.5",
        "--method", "shrink,q=0.5,target=diagonal",
        "--method", "truncated_pc,f_hat=1",
        "--json",
    )
    assert code == 0
    payload = json.loads(out)
    assert len(payload["records"]) == 2
    code, out, _ = run(
        capsys, "eval", "-i", str(big), "--split", "0.5",
        "--method", "shrink,q=0.5",
    )
    assert code == 0
    assert "shrink" in out


def test_usage_error_exit_code(capsys):
    code, _, _ = run(capsys, "shrink")  # missing required args
    assert code == 1


def test_validation_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("id,t0,t1\nA,0.01,oops\nB,0.02,0.03\n")
    code, _, err = run(capsys, "scm", "-i", str(bad))
    assert code == 2
    assert "error:" in err


def test_numerical_error_exit_code(tmp_path, capsys):
    bad = tmp_path / "flat.csv"
    bad.write_text("id,t0,t1,t2\nA,1,1,1\nB,1,2,3\n")
    code, _, err = run(capsys, "scm", "-i", str(bad))
    assert code == 3
    assert "error:" in err


def test_q_range_validated(panel_path, capsys):
    code, _, err = run(capsys, "shrink", "-i", panel_path, "--q", "1.5")
    assert code == 2


def test_no_header_mode(tmp_path, capsys):
    p = tmp_path / "nh.csv"
    p.write_text("0.01,0.02,-0.01\n-0.02,0.00,0.03\n")
    code, out, _ = run(capsys, "scm", "-i", str(p), "--no-header")
    assert code == 0
    assert matrix_from_csv(out).shape == (2, 2)


def test_output_file(panel_path, tmp_path, capsys):
    dest = tmp_path / "out.csv"
    code, out, _ = run(capsys, "scm", "-i", panel_path, "-o", str(dest))
    assert code == 0
    assert out == ""
    assert matrix_from_csv(dest.read_text()).shape == (3, 3)


def test_rho_auto_matches_estimate(panel_path, capsys):
    scm = cr.sample_covariance(cr.demean(cr.loads_panel(PANEL_CSV)))
    rho = cr.estimate_rho(scm)
    code, out, _ = run(
        capsys, "shrink", "-i", panel_path, "--q", "1",
        "--target", "constant_correlation", "--rho", "auto", "--json",
    )
    assert code == 0
    payload = json.loads(out)
    n = payload["dense"]["n"]
    dense = np.array(payload["dense"]["data"]).reshape(n, n)
    expected = cr.dense(cr.constant_correlation_target(scm, rho))
    np.testing.assert_allclose(dense, expected, atol=1e-12)
