"""Acceptance suite.

Each test covers one acceptance criterion at its stated tolerance and records
a single pass/fail line, printed in the pytest terminal summary.
"""

import json
import subprocess
import sys

import numpy as np
import pytest

from idxf.bergman import GammaParam
from idxf.oscillator import eigen_envelope, eigenfunction_eval
from idxf.verify import suite_bergman, suite_bessel, suite_gamma, suite_hyper, suite_oscillator, suite_transform

RESULTS: list[str] = []

BERGMAN_GAMMAS = (0.5, 1.0, 1.5, 2.0, 3.0)
OSCILLATOR_GAMMAS = (1.5, 2.0, 2.5)


def record(label: str, ok: bool, detail: str) -> None:
    RESULTS.append(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


def by_name(reports) -> dict:
    return {r.check: r for r in reports}


def worst(reports) -> float:
    return max(r.max_abs_error for r in reports)


# Heavy suites are run once per gamma and shared between criteria.
_cache: dict = {}


def cached(suite, gamma: float, tol: float):
    key = (suite.__name__, gamma, tol)
    if key not in _cache:
        _cache[key] = by_name(suite(GammaParam(gamma), tol))
    return _cache[key]


def test_gamma_identities():
    r = cached(suite_gamma, 2.0, 1e-12)
    checks = [r["gamma.recurrence"], r["gamma.imaginary_axis_modulus"]]
    ok = all(c.passed and c.tolerance == 1e-12 for c in checks)
    record("gamma identities", ok,
           f"recurrence {checks[0].max_abs_error:.2e}, |Gamma(ix)|^2 {checks[1].max_abs_error:.2e} (tol 1e-12)")
    assert ok


def test_bessel_oracles():
    r = cached(suite_bessel, 2.0, 1e-11)
    checks = [(r["bessel.k_half_closed_form"], 1e-10), (r["bessel.i_half_closed_form"], 1e-11),
              (r["bessel.k_order_symmetry"], 1e-11)]
    ok = all(c.passed and c.tolerance == t for c, t in checks)
    record("Bessel oracles", ok, ", ".join(f"{c.check} {c.max_abs_error:.2e}/{t:.0e}" for c, t in checks))
    assert ok


def test_generating_function():
    rep = cached(suite_hyper, 2.0, 1e-10)["hyper.generating_function"]
    gammas = {c["inputs"]["gamma"] for c in rep.cases}
    ok = rep.passed and rep.tolerance == 1e-10 and {1.5, 2.0, 2.5} <= gammas and len(rep.cases) == 54
    record("generating function", ok, f"{len(rep.cases)} cases, max rel {rep.max_abs_error:.2e} (tol 1e-10)")
    assert ok


def test_bergman_orthonormality():
    good, alternate = [], []
    for g in BERGMAN_GAMMAS:
        r = cached(suite_bergman, g, 1e-8)
        good.append(r["bergman.orthonormality"])
        alternate.append((g, r["bergman.orthonormality_alternate_order"]))
    ok_main = all(rep.passed and rep.parameters["n_max"] == 12 for rep in good)
    # alternate Bessel order must fail away from gamma = 1/2 and agree at 1/2
    ok_alt = all(rep.passed == (g == 0.5) for g, rep in alternate)
    alt_err = ", ".join(f"{g:g}:{rep.max_abs_error:.1e}" for g, rep in alternate)
    record("Bergman orthonormality", ok_main and ok_alt,
           f"max {worst(good):.2e} (tol 1e-8); alternate order errors {alt_err}")
    assert ok_main and ok_alt


def test_kernel_closed_form_and_reproducing():
    closed, repro = [], []
    for g in BERGMAN_GAMMAS:
        r = cached(suite_bergman, g, 1e-8)
        closed.append(r["bergman.kernel_closed_form"])
        repro.append(r["bergman.reproducing_property"])
    ok = (all(c.passed and c.tolerance == 1e-10 and len(c.cases) == 49 for c in closed)
          and all(p.passed for p in repro))
    record("kernel closed form", ok,
           f"closed vs series {worst(closed):.2e} (tol 1e-10), reproducing {worst(repro):.2e} (tol 1e-8)")
    assert ok


def test_oscillator_orthonormality():
    reps = [cached(suite_oscillator, g, 1e-8)["oscillator.orthonormality"] for g in OSCILLATOR_GAMMAS]
    ok = all(r.passed and r.parameters["n_max"] == 8 for r in reps)
    record("oscillator orthonormality", ok, f"max {worst(reps):.2e} (tol 1e-8)")
    assert ok


def test_coherent_state_consistency():
    series, norm, half = [], [], []
    for g in OSCILLATOR_GAMMAS:
        r = cached(suite_transform, g, 1e-6)
        series.append(r["transform.coherent_state_series_vs_closed"])
        norm.append(r["transform.coherent_state_normalization"])
        half.append(r["transform.coherent_state_without_sqrt2"])
    ok = (all(s.passed and s.tolerance == 1e-9 for s in series)
          and all(n.passed and n.tolerance == 1e-6 for n in norm)
          and all(h.passed and h.tolerance == 1e-6 for h in half))
    record("coherent-state consistency", ok,
           f"series vs closed {worst(series):.2e} (tol 1e-9), |norm^2-1| {worst(norm):.2e}, "
           f"|norm^2-1/2| without sqrt(2) {worst(half):.2e} (tol 1e-6)")
    assert ok


def test_transform_identity_and_isometry():
    ident, iso = [], []
    for g in OSCILLATOR_GAMMAS:
        r = cached(suite_transform, g, 1e-6)
        ident.append(r["transform.eigenstate_to_monomial"])
        iso.append(r["transform.isometry"])
    ok = (all(i.passed and len(i.cases) == 7 * 5 for i in ident)
          and all(s.passed and len(s.cases) == 20 for s in iso))
    record("transform identity", ok,
           f"F[phi_n] vs psi_n rel {worst(ident):.2e}, isometry {worst(iso):.2e} (tol 1e-6)")
    assert ok


def test_omega0_consistency():
    reps = [cached(suite_oscillator, g, 1e-8) for g in OSCILLATOR_GAMMAS]
    main = [r["oscillator.omega0_consistency"] for r in reps]
    alt = [r["oscillator.omega0_alternate_form"] for r in reps]
    ok = all(m.passed and m.tolerance == 1e-12 for m in main) and not any(a.passed for a in alt)
    record("omega0 consistency", ok,
           f"max rel {worst(main):.2e} (tol 1e-12); alternate form off by {min(a.max_abs_error for a in alt):.2e}")
    assert ok


# -- command line ---------------------------------------------------------------

def idxf(*argv, cwd=None):
    return subprocess.run([sys.executable, "-m", "idxf.cli", *argv], capture_output=True, cwd=cwd)


def _malformed_corpus(tmp) -> list[tuple[str, list[str], int]]:
    bad_coeffs = tmp / "bad_coeffs.txt"
    bad_coeffs.write_text("1, 2+, 3\n")
    bad_json = tmp / "bad.json"
    bad_json.write_text("{gamma: 2")
    unknown_key = tmp / "unknown.json"
    unknown_key.write_text(json.dumps({"gamma": 2, "colour": "red"}))
    no_env = tmp / "no_env.csv"
    no_env.write_text("0.1,0.0,0.0\n0.2,0.0,0.0\n0.3,0.0,0.0\n0.4,0.0,0.0\n")
    short = tmp / "short.csv"
    x = np.linspace(0, 4, 201)[1:]
    v = eigenfunction_eval(0, 2.0, x)
    env = eigen_envelope(0, 2.0)
    lines = [f"envelope,{env.scale!r},{env.rate!r},{env.poly_degree!r}"]
    lines += [f"{a!r},{b.real!r},{b.imag!r}" for a, b in zip(x.tolist(), v.tolist())]
    short.write_text("\n".join(lines) + "\n")
    return [
        ("tolerance out of range", ["verify", "--gamma", "2", "--tol", "0.5"], 2),
        ("transform suite at gamma 1", ["verify", "--suite", "transform", "--gamma", "1"], 2),
        ("unknown suite", ["verify", "--suite", "everything", "--gamma", "2"], 2),
        ("missing gamma", ["eval", "--what", "energy", "--n", "0"], 2),
        ("malformed grid", ["eval", "--what", "basis", "--gamma", "2", "--n", "0", "--grid", "1,,2"], 2),
        ("malformed coefficient", ["transform", "--gamma", "2", "--input", str(bad_coeffs), "--grid", "1"], 2),
        ("config not JSON", ["verify", "--config", str(bad_json)], 2),
        ("unknown config key", ["verify", "--config", str(unknown_key)], 2),
        ("samples without envelope",
         ["transform", "--gamma", "2", "--input", str(no_env), "--input-kind", "samples", "--grid", "1"], 2),
        ("samples end before tail bound", ["transform", "--gamma", "2", "--input", str(short), "--grid", "1"], 3),
    ]


def test_cli_end_to_end(tmp_path):
    first = idxf("verify", "--suite", "all", "--gamma", "2")
    second = idxf("verify", "--suite", "all", "--gamma", "2")
    ok_run = first.returncode == 0 and json.loads(first.stdout)["summary"]["ok"]

    coeffs = tmp_path / "c.txt"
    coeffs.write_text("0.5, 0.5i, -0.5, 0.5\n")
    targs = ["transform", "--gamma", "2", "--input", str(coeffs), "--grid", "lattice:-2,2,5,-2,2,5"]
    eargs = ["eval", "--what", "coherent-state", "--gamma", "2", "--grid", "|z|=3:6", "--x", "0.1:5:7"]
    same = (first.stdout == second.stdout
            and idxf(*targs).stdout == idxf(*targs).stdout
            and idxf(*eargs).stdout == idxf(*eargs).stdout)

    corpus = _malformed_corpus(tmp_path)
    wrong = []
    for name, argv, code in corpus:
        got = idxf(*argv).returncode
        if got != code:
            wrong.append(f"{name}: {got} != {code}")

    ok = ok_run and same and not wrong
    record("CLI end-to-end", ok,
           f"verify all exit {first.returncode}, byte-identical reruns {same}, "
           f"exit codes {len(corpus) - len(wrong)}/{len(corpus)}" + (f" ({'; '.join(wrong)})" if wrong else ""))
    assert ok_run, first.stderr.decode()
    assert same
    assert not wrong, wrong


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
