import json

import pytest

from maxradial.cli import EXIT_DOMAIN, EXIT_NUMERIC, EXIT_OK, EXIT_USAGE, parse_grid, run
from maxradial.profile import ProfileError

EXP = '{"family": "exp", "lambda": 1}'


def _json(capsys, argv, code=EXIT_OK):
    assert run(argv) == code
    return json.loads(capsys.readouterr().out)


def test_check_pd_exponential(capsys):
    out = _json(capsys, ["check-pd", "--profile", EXP])
    assert out["results"]["verdict"] == "strictly_positive"
    assert out["input"] == {"family": "exp", "lambda": 1.0}
    assert out["schema_version"] == 1


def test_check_pd_output_is_byte_identical(capsys):
    argv = ["check-pd", "--profile", '{"family": "power", "alpha": 1}', "--method", "f1"]
    run(argv)
    first = capsys.readouterr().out
    run(argv)
    assert capsys.readouterr().out == first
    assert json.loads(first)["results"]["via_f1"]["verdict"] == "indefinite"


def test_spline_construct(capsys):
    out = _json(capsys, ["spline", "construct", "--r", "1", "--d", "3"])["results"]
    assert out["coefficients"] == ["1", "4"] and out["exponent"] == "4"
    out = _json(capsys, ["spline", "construct", "--r", "2", "--d", "3"])["results"]
    assert out["coefficients"] == ["1", "6", "35/3"]


def test_spline_eval_h_csv(capsys):
    assert run(["spline", "eval-h", "--mu", "2", "--nu", "2", "--grid", "0,0.5,1", "--out", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "x,h" and len(lines) == 4
    assert float(lines[1].split(",")[1]) == pytest.approx(1 / 12, rel=1e-12)


def test_transform_csv_columns(capsys):
    assert run(["transform", "--profile", '{"family": "power", "alpha": 2}',
                "--grid", "0:2:3", "--out", "csv"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "y1,y2,fhat,oracle,abs_diff" and len(lines) == 10
    assert max(float(l.split(",")[4]) for l in lines[1:]) < 1e-12


def test_transform_writes_file(tmp_path, capsys):
    path = tmp_path / "t.json"
    assert run(["transform", "--profile", EXP, "--grid", "0.5,1", "--out", str(path)]) == 0
    assert capsys.readouterr().out == ""
    out = json.loads(path.read_text())
    assert len(out["results"]["points"]) == 4
    assert out["results"]["max_abs_diff"] < 1e-5


def test_profile_from_file(tmp_path, capsys):
    path = tmp_path / "p.json"
    path.write_text('{"family": "power", "alpha": 0.5}')
    out = _json(capsys, ["check-wiener", "--profile", f"@{path}", "--criterion", "t4"])
    assert out["results"]["report"]["classification"] == "convergent"
    assert len(out["results"]["report"]["epsilon_ladder"]) == 17


def test_dimwalk_down_and_up(capsys):
    f1 = '{"family": "spline", "m": 1, "coeffs": ["1/2", "1/2"]}'
    assert run(["dimwalk", "--f1", f1, "--d", "3", "--direction", "down", "--grid", "0,1,2"]) == 0
    rows = [l.split(",") for l in capsys.readouterr().out.splitlines()[1:]]
    assert float(rows[0][1]) == pytest.approx(0.5)
    assert float(rows[1][1]) == pytest.approx(1 / 3)
    assert run(["dimwalk", "--f1", f1, "--d", "3", "--direction", "up", "--grid", "0.2"]) == 0
    assert float(capsys.readouterr().out.splitlines()[1].split(",")[1]) == pytest.approx(0.44)


def test_summability_measures(capsys):
    out = _json(capsys, ["summability", "--generator", '{"kind": "riesz"}', "--scale", "4",
                         "--measure", "norm", "--grid-density", "64"])
    assert out["results"]["norm"] == pytest.approx(1.313, abs=2e-3)
    out = _json(capsys, ["summability", "--generator", EXP, "--scale", "1",
                         "--measure", "positivity", "--grid-density", "64", "--threads", "1"])
    assert out["results"]["nonnegative"] is True


def test_strict_flags_truncated_lattice(capsys):
    argv = ["summability", "--generator", EXP, "--scale", "0.5", "--measure", "positivity",
            "--K", "10", "--grid-density", "32"]
    assert run(argv) == EXIT_OK
    capsys.readouterr()
    assert run(argv + ["--strict"]) == EXIT_NUMERIC


@pytest.mark.parametrize("argv", [
    ["check-pd", "--profile", '{"family": "nope"}'],
    ["check-pd", "--profile", "not json"],
    ["check-pd", "--profile", "@/nonexistent/file.json"],
    ["spline", "construct", "--r", "1", "--d", "2"],
    ["check-wiener", "--profile", EXP, "--criterion", "t4"],
    ["summability", "--generator", '{"kind": "sharp"}', "--scale", "4", "--measure", "periodization"],
])
def test_domain_errors_exit_2(argv, capsys):
    assert run(argv) == EXIT_DOMAIN
    assert "maxradial:" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [
    [], ["frobnicate"], ["check-pd"], ["check-pd", "--profile", EXP, "--bogus"],
    ["check-wiener", "--profile", EXP, "--criterion", "t9"],
])
def test_usage_errors_exit_64(argv, capsys):
    assert run(argv) == EXIT_USAGE
    assert "usage" in capsys.readouterr().err


def test_parse_grid():
    assert parse_grid("0:1:3").tolist() == [0.0, 0.5, 1.0]
    assert parse_grid("1,2.5").tolist() == [1.0, 2.5]
    with pytest.raises(ProfileError):
        parse_grid("0:1")
