"""Tests for the ``idxf`` command line."""

import csv
import json

import numpy as np
import pytest

from idxf.cli import ConfigError, main, parse_complex, parse_grid, parse_indices, parse_reals
from idxf.oscillator import eigen_envelope, eigenfunction_eval


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def table(text):
    lines = text.splitlines()
    assert lines[0].startswith("# ")
    meta = json.loads(lines[0][2:])
    rows = list(csv.reader(lines[1:]))
    return meta, rows[0], [[float(v) for v in r] for r in rows[1:]]


@pytest.mark.parametrize(
    "token, expected",
    [("2", 2), ("-1.5", -1.5), ("1+2i", 1 + 2j), ("2-i", 2 - 1j), ("i", 1j), ("-3j", -3j), (" 1 + i ", 1 + 1j)],
)
def test_parse_complex(token, expected):
    assert parse_complex(token) == expected


@pytest.mark.parametrize("token", ["", "abc", "1+", "nan", "inf"])
def test_parse_complex_rejects(token):
    with pytest.raises(ConfigError):
        parse_complex(token)


def test_parse_grid_forms():
    assert parse_grid("1,1+i,-2i") == [1, 1 + 1j, -2j]
    circle = parse_grid("|z|=2:4")
    assert np.allclose(circle, [2, 2j, -2, -2j])
    assert parse_grid("|z|=1") == [1 + 0j]
    lat = parse_grid("lattice:0,1,2,0,2,3")
    assert lat == [0, 1, 1j, 1 + 1j, 2j, 1 + 2j]


@pytest.mark.parametrize("spec", ["1,,2", "|z|=-1", "|z|=1:0", "lattice:0,1,2", "lattice:0,1,x,0,1,2"])
def test_parse_grid_rejects(spec):
    with pytest.raises(ConfigError):
        parse_grid(spec)


def test_parse_indices_and_reals():
    assert parse_indices("0..3") == [0, 1, 2, 3]
    assert parse_indices("1,4") == [1, 4]
    assert parse_reals("0:1:3") == [0.0, 0.5, 1.0]
    with pytest.raises(ConfigError):
        parse_indices("-1")
    with pytest.raises(ConfigError):
        parse_indices("a..b")


def test_kernel_diagonal(capsys):
    code, out, _ = run(capsys, "eval", "--what", "kernel-diagonal", "--gamma", "1", "--grid", "|z|=1")
    meta, header, rows = table(out)
    assert code == 0
    assert header == ["z_re", "z_im", "K"]
    assert rows[0][2] == pytest.approx(1.5906368546373291, rel=1e-12)
    assert meta["measure_bessel_order"] == "2*gamma-1"
    assert meta["coherent_state_sqrt2"] is True


def test_energy(capsys):
    code, out, _ = run(capsys, "eval", "--what", "energy", "--n", "0..3", "--gamma", "2")
    assert code == 0
    assert [r[1] for r in table(out)[2]] == pytest.approx([4, 6, 8, 10], rel=1e-13)


def test_eigenfunction_at_origin(capsys):
    code, out, _ = run(capsys, "eval", "--what", "eigenfunction", "--n", "0", "--x", "0", "--gamma", "2")
    assert code == 0
    assert table(out)[2] == [[0.0, 0.0, 0.0, 0.0]]


def test_eval_other_objects(capsys):
    for what, extra in (("basis", ["--n", "0..2"]), ("kernel", ["--w", "1-i"]),
                        ("coherent-state", ["--x", "0.5,1"])):
        code, out, _ = run(capsys, "eval", "--what", what, "--gamma", "2", "--grid", "1,1+i", *extra)
        assert code == 0
        assert all(np.isfinite(r).all() for r in table(out)[2])


def test_transform_ground_state_is_one(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("1\n")
    code, out, _ = run(capsys, "transform", "--gamma", "2", "--input", str(src), "--grid", "|z|=1.5:4")
    meta, header, rows = table(out)
    assert code == 0
    assert header == ["z_re", "z_im", "F_re", "F_im"]
    assert [r[2:] for r in rows] == [[1.0, 0.0]] * 4
    assert meta["convention"] == "conjugate-linear"


def test_transform_first_excited(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("0,1\n")
    _, out, _ = run(capsys, "transform", "--gamma", "2", "--input", str(src), "--grid", "2")
    assert table(out)[2][0][2:] == pytest.approx([1.0, 0.0], abs=1e-15)


def test_transform_linear_flag(tmp_path, capsys):
    src = tmp_path / "c.txt"
    src.write_text("0, i\n")
    args = ["transform", "--gamma", "2", "--input", str(src), "--grid", "1+i,2"]
    _, out_a, _ = run(capsys, *args)
    _, out_b, _ = run(capsys, *args, "--linear")
    a, b = table(out_a)[2], table(out_b)[2]
    assert a[0][2:] == pytest.approx([0.5, -0.5])
    for ra, rb in zip(a, b):
        assert rb[2] == ra[2] and rb[3] == -ra[3]
    assert table(out_b)[0]["convention"] == "linear"


def test_transform_sampled_file(tmp_path, capsys):
    x = np.linspace(0, 60, 3001)[1:]
    v = eigenfunction_eval(1, 2.0, x)
    env = eigen_envelope(1, 2.0)
    lines = [f"envelope,{env.scale!r},{env.rate!r},{env.poly_degree!r}", "x,re,im"]
    lines += [f"{a!r},{b.real!r},{b.imag!r}" for a, b in zip(x.tolist(), v.tolist())]
    src = tmp_path / "s.csv"
    src.write_text("\n".join(lines) + "\n")
    code, out, _ = run(capsys, "transform", "--gamma", "2", "--input", str(src), "--grid", "2")
    meta, _, rows = table(out)
    assert code == 0
    assert meta["path"] == "quadrature"
    assert rows[0][2] == pytest.approx(1.0, abs=1e-7)


def test_verify_writes_report(tmp_path, capsys):
    dest = tmp_path / "r.json"
    code, out, err = run(capsys, "verify", "--suite", "gamma", "--gamma", "2", "--out", str(dest))
    assert code == 0 and out == ""
    report = json.loads(dest.read_text())
    assert report["summary"]["ok"]
    assert [r["check"] for r in report["reports"]] == ["gamma.recurrence", "gamma.imaginary_axis_modulus"]
    assert all(r["cases"] for r in report["reports"])
    assert "ok" in err


def test_verify_bergman_at_half(capsys):
    code, out, err = run(capsys, "verify", "--suite", "bergman", "--gamma", "0.5")
    assert code == 0
    names = {r["check"]: r for r in json.loads(out)["reports"]}
    assert names["bergman.orthonormality_alternate_order"]["pass"]


def test_expected_failure_is_reported(capsys):
    code, out, err = run(capsys, "verify", "--suite", "bergman", "--gamma", "1")
    assert code == 0
    alt = [r for r in json.loads(out)["reports"] if r["check"] == "bergman.orthonormality_alternate_order"][0]
    assert not alt["pass"] and alt["expect_failure"] and alt["errata_notes"]
    assert "(expected failure)" in err


def test_config_file(tmp_path, capsys):
    conf = tmp_path / "c.json"
    conf.write_text(json.dumps({"gamma": 2, "what": "energy", "n": "0..1"}))
    code, out, _ = run(capsys, "eval", "--config", str(conf))
    assert code == 0
    assert [r[1] for r in table(out)[2]] == pytest.approx([4, 6])
    # flags win over the file
    code, out, _ = run(capsys, "eval", "--config", str(conf), "--n", "3")
    assert [r[1] for r in table(out)[2]] == pytest.approx([10])


def test_eval_is_deterministic(capsys):
    args = ["eval", "--what", "coherent-state", "--gamma", "2.5", "--grid", "lattice:-2,2,3,-1,1,3", "--x", "0.1:4:5"]
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize(
    "argv, code",
    [
        (["verify", "--gamma", "2", "--tol", "1"], 2),
        (["verify", "--suite", "transform", "--gamma", "1"], 2),
        (["verify", "--gamma", "1.3"], 2),
        (["eval", "--what", "energy", "--gamma", "2"], 2),
        (["eval", "--what", "energy", "--n", "0", "--gamma", "1"], 2),
        (["eval", "--what", "kernel-diagonal", "--gamma", "1", "--grid", "40"], 2),
        (["frobnicate"], 2),
    ],
)
def test_exit_codes(argv, code, capsys):
    assert run(capsys, *argv)[0] == code
