import json
import math

import numpy as np
import pytest

from chgbe import cli
from chgbe import densities as dn
from chgbe import io as tio
from chgbe import models as md


def run(argv):
    return cli.main(argv)


def data_section(path):
    with open(path) as fh:
        return [ln for ln in fh if not ln.startswith("#")]


def test_sample_jacobi_csv_schema(tmp_path):
    out = tmp_path / "jac.csv"
    assert run(["sample", "--beta", "0.7", "--m", "2", "--n", "2", "--kind", "none",
                "--reps", "4", "--seed", "9", "--out", str(out)]) == 0
    meta, columns, rows = tio.read_csv(str(out))
    assert columns == ["rep", "j", "a_j"]
    assert len(rows) == 4 * 3  # N-1 = 3 entries per rep
    assert meta["seed"] == "9" and meta["beta"] == "0.7"
    assert all(float(r[2]) > 0 for r in rows)


def test_sample_eigenvalue_rows_and_reproducibility(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    args = ["sample", "--beta", "2", "--m", "2", "--n", "3", "--kind", "herm",
            "--l", "1", "--reps", "100", "--seed", "7"]
    assert run(args + ["--out", str(a)]) == 0
    assert run(args + ["--out", str(b), "--threads", "3"]) == 0
    assert data_section(str(a)) == data_section(str(b))
    meta, columns, rows = tio.read_csv(str(a))
    assert columns == ["rep", "idx", "re", "im"]
    assert len(rows) == 100 * 4  # N = 2m = 4 eigenvalues per rep


def test_sample_dense_requires_supported_beta(tmp_path):
    with pytest.raises(SystemExit):
        run(["sample", "--beta", "0.7", "--m", "2", "--n", "2", "--kind", "herm",
             "--l", "1", "--dense", "--out", str(tmp_path / "x.csv")])


def test_eig_command_classifies(tmp_path):
    jac = tmp_path / "jac.csv"
    run(["sample", "--beta", "2", "--m", "1", "--n", "1", "--kind", "none",
         "--reps", "50", "--seed", "3", "--out", str(jac)])
    # patch the metadata so the eig command perturbs anti-Hermitially
    text = jac.read_text().replace("# kind = none", "# kind = antiherm")
    jac.write_text(text)
    out = tmp_path / "eigs.csv"
    assert run(["eig", "--input", str(jac), "--out", str(out)]) == 0
    meta, columns, rows = tio.read_csv(str(out))
    assert columns == ["rep", "idx", "re", "im", "class"]
    classes = {r[4] for r in rows}
    assert classes <= {"imag", "pair", "real"}
    assert "pair" in classes or "imag" in classes
    for r in rows:
        assert float(r[3]) > 0  # upper half plane


def test_density_eval_matches_library(tmp_path):
    eigs = tmp_path / "e.csv"
    run(["sample", "--beta", "2", "--m", "1", "--n", "1", "--kind", "herm",
         "--l", "1", "--reps", "5", "--seed", "4", "--out", str(eigs)])
    out = tmp_path / "d.csv"
    assert run(["density", "eval", "--input", str(eigs), "--out", str(out),
                "--beta", "2", "--m", "1", "--n", "1", "--kind", "herm",
                "--l-mode", "fixed", "--l", "1"]) == 0
    meta, columns, rows = tio.read_csv(str(out))
    assert columns == ["rep", "logpdf"]
    _, ec, erows = tio.read_csv(str(eigs))
    by = {}
    for r in erows:
        by.setdefault(int(r[0]), []).append(float(r[2]))
    dp = dn.DensityParams(md.EnsembleParams(2.0, 1, 1), mode="fixed", l=1.0)
    for rep_id, logpdf in ((int(r[0]), float(r[1])) for r in rows):
        want = dn.hermitian_logdensity(np.array(by[rep_id]), dp)
        assert logpdf == pytest.approx(want, rel=1e-12)
        assert np.isfinite(logpdf)


def test_export_round_trip_and_binning(tmp_path):
    src = tmp_path / "e.csv"
    run(["sample", "--beta", "2", "--m", "1", "--n", "1", "--kind", "antiherm",
         "--l", "1", "--reps", "200", "--seed", "5", "--out", str(src)])
    j = tmp_path / "e.json"
    back = tmp_path / "back.csv"
    assert run(["export", "--input", str(src), "--out", str(j), "--to", "json"]) == 0
    assert run(["export", "--input", str(j), "--out", str(back), "--to", "csv"]) == 0
    assert data_section(str(src)) == data_section(str(back))

    hist = tmp_path / "h.csv"
    assert run(["export", "--input", str(src), "--out", str(hist), "--to", "hist",
                "--column", "im", "--bins", "20"]) == 0
    _, hc, hrows = tio.read_csv(str(hist))
    assert hc == ["bin_lo", "bin_hi", "count"]
    assert sum(int(r[2]) for r in hrows) == 400

    hx = tmp_path / "hex.csv"
    assert run(["export", "--input", str(src), "--out", str(hx), "--to", "hexbin"]) == 0
    _, xc, xrows = tio.read_csv(str(hx))
    assert xc == ["x", "y", "count"]
    assert sum(int(r[2]) for r in xrows) == 400


def test_verify_subcommand_report_and_exit_code(tmp_path):
    rpt = tmp_path / "report.json"
    code = run(["verify", "jacobian", "--trials", "10", "--seed", "2",
                "--report", str(rpt)])
    assert code == 0
    payload = json.loads(rpt.read_text())
    assert payload["suite"] == "jacobian"
    assert payload["criteria"][0]["criterion"] == "C5-jacobians"
    assert payload["criteria"][0]["passed"] is True


def test_chi_coupling_sampling(tmp_path):
    out = tmp_path / "chi.csv"
    assert run(["sample", "--beta", "2", "--m", "1", "--n", "1", "--kind", "herm",
                "--l", "chi", "--reps", "30", "--seed", "6", "--out", str(out)]) == 0
    _, columns, rows = tio.read_csv(str(out))
    # trace of each rep equals its own coupling, which now varies
    sums = {}
    for r in rows:
        sums[int(r[0])] = sums.get(int(r[0]), 0.0) + float(r[2])
    ls = np.array(sorted(sums.values()))
    assert (ls > 0).all() and ls.std() > 0.01
