import csv
import math

import pytest

from hopfreeb.cli import main
from hopfreeb.config import ConfigError, RunConfig, parse_config


def _write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def _rows(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_parse_config_values():
    cfg = parse_config("# comment\nn = 3\nlambda = 1/3  # trailing\nfield = w1 + cos_theta\n\n", "obstruct")
    assert cfg.n == 3 and cfg.lam == pytest.approx(1 / 3)
    assert cfg.field == "w1 + cos_theta"
    assert cfg.model.n == 3 and cfg.grid.sphere_pts == 16


@pytest.mark.parametrize(
    "text,line",
    [
        ("n = 2\nbogus = 1\n", 2),
        ("n = 2\n\nlambda\n", 3),
        ("n = two\n", 1),
        ("n = 2\nn = 3\n", 2),
        ("field =\n", 1),
        ("theta_pts = 4\n", 1),
        ("lambda = 1.5\n", 1),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ConfigError, match=f"line {line}"):
        parse_config(text, "obstruct")


def test_unknown_command():
    with pytest.raises(ConfigError):
        RunConfig(command="plot")


def test_obstruct_const1(tmp_path, capsys):
    cfg = _write(tmp_path, "lambda = 0.5\nfield = const1\n")
    assert main(["obstruct", "--config", cfg, "--out", str(tmp_path / "o")]) == 0
    row = _rows(tmp_path / "o" / "obstruction.csv")[0]
    assert float(row["c"]) == pytest.approx(2 * math.log(2), abs=1e-6)
    assert row["d"] == "undefined"
    h = _rows(tmp_path / "o" / "obstruction_h.csv")
    assert len(h) == 256 and set(h[0]) == {"u1", "u2", "theta", "h"}


def test_obstruct_t_over_r(tmp_path):
    cfg = _write(tmp_path, "field = t_over_r\n")
    assert main(["obstruct", "--config", cfg, "--out", str(tmp_path)]) == 0
    row = _rows(tmp_path / "obstruction.csv")[0]
    assert abs(float(row["c"])) < 1e-6
    assert float(row["d"]) == pytest.approx(-math.log(2), abs=1e-6)


def test_solve_exit_codes_and_determinism(tmp_path):
    cfg = _write(tmp_path, "field = coboundary:cos_theta\nsphere_pts = 8\ntheta_pts = 8\n")
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "a")]) == 0
    assert main(["solve", "--config", cfg, "--out", str(tmp_path / "b")]) == 0
    summary = _rows(tmp_path / "a" / "solve_summary.csv")[0]
    assert summary["solvable"] == "True" and float(summary["residual"]) < 1e-5
    for name in ("obstruction.csv", "obstruction_h.csv", "solution.csv", "solve_summary.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()

    bad = _write(tmp_path, "field = const1\n", "bad.cfg")
    assert main(["solve", "--config", bad, "--out", str(tmp_path / "c")]) == 2
    assert not (tmp_path / "c" / "solution.csv").exists()


def test_errors_exit_one(tmp_path, capsys):
    assert main(["obstruct", "--config", _write(tmp_path, "field = nope\n")]) == 1
    assert "nope" in capsys.readouterr().err
    assert main(["obstruct", "--config", _write(tmp_path, "zzz = 1\n", "z.cfg")]) == 1
    assert "line 1" in capsys.readouterr().err
    assert main(["obstruct", "--config", str(tmp_path / "missing.cfg")]) == 1


def test_appendix_outputs(tmp_path):
    cfg = _write(tmp_path, "phi = sqrt\np_max = 8\n")
    assert main(["appendix", "--config", cfg, "--out", str(tmp_path)]) == 0
    conv = _rows(tmp_path / "convergence.csv")
    assert list(conv[0]) == ["k", "r", "p", "rho", "p_times_rho"]
    assert len(conv) == 3 * 3 * 8
    wit = _rows(tmp_path / "witness.csv")
    assert float(wit[-1]["sup_derivative"]) == pytest.approx(256.0)


def test_invariants_output(tmp_path):
    cfg = _write(tmp_path, "sphere_pts = 8\ntheta_pts = 8\nseed = 3\n")
    assert main(["invariants", "--config", cfg, "--out", str(tmp_path)]) == 0
    rows = _rows(tmp_path / "pairings.csv")
    fields = {r["field"] for r in rows}
    assert "const1" in fields and "coboundary:random:4" in fields
    for r in rows:
        if r["field"].startswith("coboundary:"):
            assert abs(complex(r["pairing"])) < 1e-6
