import json
import subprocess
import sys

import numpy as np
import pytest

from largest_root import tw
from largest_root.cli import UsageError, build_parser, read_labeled_groups, read_matrix, run_cli


def write_csv(path, arr, header=None):
    np.savetxt(path, arr, delimiter=",", header=",".join(header) if header else "", comments="")
    return str(path)


def run_json(capsys, argv):
    code = run_cli(argv)
    out, err = capsys.readouterr()
    assert code == 0, err
    return json.loads(out)


def test_tw_quantile(capsys):
    payload = run_json(capsys, ["tw", "--quantile", "0.95"])
    assert payload["value"] == pytest.approx(0.98, abs=0.01)
    assert payload["query"] == "quantile"


def test_tw_cdf_and_pvalue(capsys):
    assert run_json(capsys, ["tw", "--cdf", "-1.27"])["value"] == pytest.approx(0.5, abs=1e-3)
    assert run_json(capsys, ["tw", "--pvalue", "0.98"])["value"] == pytest.approx(0.05, abs=1e-3)


def test_tw_out_of_range(capsys):
    assert run_cli(["tw", "--quantile", "1.5"]) == 2
    assert "between 0 and 1" in capsys.readouterr().err


def test_tw_table_override(tmp_path, capsys):
    s = np.linspace(-5, 5, 101)
    path = write_csv(tmp_path / "t.csv", np.column_stack([s, 1 / (1 + np.exp(-s))]), header=["s", "cdf"])
    payload = run_json(capsys, ["--tw-table", path, "tw", "--quantile", "0.5"])
    assert payload["value"] == pytest.approx(0.0, abs=1e-8)
    assert tw.active_table() is tw.default_table()
    payload = run_json(capsys, ["tw", "--quantile", "0.5", "--tw-table", path])
    assert payload["value"] == pytest.approx(0.0, abs=1e-8)


def test_bad_tw_table(tmp_path, capsys):
    path = tmp_path / "bad.csv"
    path.write_text("s,cdf\n0,0.5\n1,0.4\n")
    assert run_cli(["--tw-table", str(path), "tw", "--cdf", "0"]) == 2


@pytest.fixture
def cca_files(tmp_path, rng):
    z = rng.standard_normal((40, 3))
    y = 0.8 * z[:, :2] + rng.standard_normal((40, 2))
    return write_csv(tmp_path / "z.csv", z, ["a", "b", "c"]), write_csv(tmp_path / "y.csv", y), z, y


def test_cca(capsys, cca_files):
    zp, yp, z, y = cca_files
    payload = run_json(capsys, ["test-cca", "--z", zp, "--y", yp])
    assert payload["method"] == "CCA"
    assert payload["dims"] == {"m1": 3, "n1": 2, "n2": 2, "n": 40}
    assert set(payload) >= {"lambda1", "rescaled", "p_value", "alpha", "reject", "config"}
    assert payload["config"]["alpha"] == 0.05


def test_cca_alpha_out_of_range(capsys, cca_files):
    zp, yp, _, _ = cca_files
    assert run_cli(["test-cca", "--z", zp, "--y", yp, "--alpha", "1.5"]) == 2
    assert "between 0 and 1" in capsys.readouterr().err


def test_cca_out_file(tmp_path, capsys, cca_files):
    zp, yp, _, _ = cca_files
    out = tmp_path / "report.json"
    assert run_cli(["test-cca", "--z", zp, "--y", yp, "--out", str(out)]) == 0
    assert json.loads(out.read_text())["method"] == "CCA"


def test_cca_mismatched_rows(tmp_path, capsys, rng):
    zp = write_csv(tmp_path / "z.csv", rng.standard_normal((10, 2)))
    yp = write_csv(tmp_path / "y.csv", rng.standard_normal((9, 2)))
    assert run_cli(["test-cca", "--z", zp, "--y", yp]) == 2


def test_manova_group_files(tmp_path, capsys, rng):
    paths = [write_csv(tmp_path / f"g{k}.csv", rng.standard_normal((8, 3)) + k) for k in range(3)]
    payload = run_json(capsys, ["test-manova", "--groups", *paths])
    assert payload["method"] == "MANOVA"
    assert payload["dims"] == {"m1": 3, "n1": 2, "n2": 3, "n": 24}
    assert payload["reject"] is True


def test_manova_labeled(tmp_path, capsys, rng):
    x = rng.standard_normal((18, 2))
    labels = np.repeat(["a", "b", "c"], 6)
    path = tmp_path / "d.csv"
    lines = ["x1,group,x2"] + [f"{r[0]},{g},{r[1]}" for r, g in zip(x, labels)]
    path.write_text("\n".join(lines) + "\n")
    groups = read_labeled_groups(str(path), "group")
    assert [g.shape for g in groups] == [(6, 2)] * 3
    np.testing.assert_allclose(groups[1], x[6:12])
    a = run_json(capsys, ["test-manova", "--data", str(path)])
    b = run_json(capsys, ["test-manova", "--data", str(path), "--label-col", "1"])
    assert a["lambda1"] == b["lambda1"]


def test_lm(tmp_path, capsys, rng):
    x = rng.standard_normal((30, 4))
    y = x @ rng.standard_normal((4, 3)) + rng.standard_normal((30, 3))
    c = np.hstack([np.eye(2), np.zeros((2, 2))])
    args = ["test-lm", "--y", write_csv(tmp_path / "y.csv", y), "--x", write_csv(tmp_path / "x.csv", x),
            "--c", write_csv(tmp_path / "c.csv", c)]
    linear = run_json(capsys, args)
    assert linear["method"] == "LinModelLinear"
    assert linear["dims"] == {"m1": 3, "n1": 2, "n2": 4, "n": 30}
    intra = run_json(capsys, args + ["--d", write_csv(tmp_path / "d.csv", np.eye(3))])
    assert intra["method"] == "LinModelIntraSubject"
    assert intra["lambda1"] == pytest.approx(linear["lambda1"], rel=1e-12)


def test_lm_singular_design_is_math_error(tmp_path, capsys, rng):
    x = rng.standard_normal((30, 3))
    x[:, 2] = x[:, 0]
    y = rng.standard_normal((30, 2))
    code = run_cli(["test-lm", "--y", write_csv(tmp_path / "y.csv", y), "--x", write_csv(tmp_path / "x.csv", x),
                    "--c", write_csv(tmp_path / "c.csv", np.eye(3)[:1])])
    assert code == 1
    err = json.loads(capsys.readouterr().err)
    assert err["error"] == "RankDeficiencyError"


def test_malformed_csv(tmp_path, capsys):
    bad = tmp_path / "bad.csv"
    bad.write_text("1,2\n3,oops\n")
    assert run_cli(["test-cca", "--z", str(bad), "--y", str(bad)]) == 2
    assert "non-numeric" in capsys.readouterr().err
    ragged = tmp_path / "ragged.csv"
    ragged.write_text("1,2\n3\n")
    with pytest.raises(UsageError, match="row 2 has 1 fields"):
        read_matrix(str(ragged))
    assert run_cli(["test-cca", "--z", str(tmp_path / "missing.csv"), "--y", str(bad)]) == 2


def test_unknown_flag(capsys):
    assert run_cli(["tw", "--quantile", "0.5", "--bogus"]) == 2


def test_header_detection(tmp_path):
    path = write_csv(tmp_path / "h.csv", np.arange(6.0).reshape(3, 2), ["a", "b"])
    np.testing.assert_array_equal(read_matrix(path), np.arange(6.0).reshape(3, 2))


@pytest.mark.parametrize("command", ["tw", "test-cca", "test-manova", "test-lm", "simulate"])
def test_help_lists_flags(command, capsys):
    assert run_cli([command, "--help"]) == 0
    text = capsys.readouterr().out
    assert "--out" in text and "--tw-table" in text
    if command.startswith("test-"):
        assert "--alpha" in text and "(default: 0.05)" in text
    if command == "simulate":
        for flag in ("--preset", "--dist", "--mag", "--reps", "--seed", "--workers", "--format"):
            assert flag in text
        assert "(default: 2000)" in text


SIM_ARGS = ["simulate", "--preset", "table1", "--dist", "normal", "--mag", "1", "--reps", "40", "--seed", "7"]


def test_simulate_repeatable(capsys):
    first = run_cli(SIM_ARGS + ["--workers", "1"])
    a = capsys.readouterr().out
    second = run_cli(SIM_ARGS + ["--workers", "1"])
    b = capsys.readouterr().out
    assert first == second == 0
    assert a == b
    payload = json.loads(a)
    assert payload["metadata"]["seed"] == 7
    assert len(payload["rows"]) == 18


def test_simulate_csv(capsys):
    assert run_cli(SIM_ARGS + ["--format", "csv", "--workers", "1"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("seed,scenario,dims")
    assert len(lines) == 19


def test_simulate_bad_dims(capsys):
    assert run_cli(["simulate", "--preset", "table1", "--dims", "5,8,10,12", "--reps", "5", "--workers", "1"]) == 2


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "largest_root", "tw", "--quantile", "0.95"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["value"] == pytest.approx(0.979, abs=1e-3)


def test_parser_builds():
    assert build_parser().prog == "largest-root"
