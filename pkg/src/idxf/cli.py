"""Command-line interface: ``idxf verify|transform|eval``.

Exit codes: 0 success, 1 a check failed, 2 configuration or input error,
3 numerical failure (non-converged series or quadrature, envelope violation).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from importlib.metadata import PackageNotFoundError, version
from pathlib import Path

import numpy as np

from .bergman import GammaParam, basis_element, kernel, kernel_diagonal
from .errors import DomainError, IdxfError, NumericalError
from .oscillator import EigenExpansion, eigenfunction_eval, energy_level, physical_config_for_gamma
from .quadrature import DecayEnvelope
from .report import jsonable
from .transform import SampledFunction, cs_closed, transform_apply_coeffs, transform_apply_sampled
from .verify import DEFAULT_TOL, run_suites, suite_names

__all__ = ["RunConfig", "main", "parse_grid", "parse_complex", "build_parser"]

EXIT_OK, EXIT_FAIL, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3
TOL_RANGE = (1e-12, 1e-3)
SUITE_CHOICES = ("gamma", "bessel", "hyper", "bergman", "oscillator", "transform", "all")
WHAT_CHOICES = ("basis", "kernel", "kernel-diagonal", "eigenfunction", "coherent-state", "energy")

CONVENTIONS = {
    "measure_bessel_order": "2*gamma-1",
    "omega0": "1/(2*gamma*(gamma-1))",
    "coherent_state_sqrt2": True,
    "hypergeometric_argument": "-z",
}


class ConfigError(IdxfError, ValueError):
    """Invalid command-line or config-file input."""


def _tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0.0.0"


@dataclass
class RunConfig:
    """Validated settings for one invocation."""

    command: str
    gamma: GammaParam
    tol: float = DEFAULT_TOL
    suite: str = "all"
    what: str | None = None
    input: Path | None = None
    input_kind: str = "auto"
    grid: list[complex] = field(default_factory=list)
    out: Path | None = None
    linear: bool = False
    n: list[int] = field(default_factory=list)
    x: list[float] = field(default_factory=list)
    w: complex = 0j


# -- parsing helpers ------------------------------------------------------------

_IMAG = re.compile(r"(^|[+-])([ij])$")


def parse_complex(token: str) -> complex:
    """Parse ``2``, ``-1.5``, ``1+2i``, ``2-i``, ``i``, ``3j``."""
    s = token.strip().replace(" ", "").replace("I", "i").replace("J", "j")
    if not s:
        raise ConfigError("empty complex number")
    s = _IMAG.sub(lambda m: m.group(1) + "1j", s)
    s = s.replace("i", "j")
    try:
        value = complex(s)
    except ValueError:
        raise ConfigError(f"cannot parse complex number {token!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise ConfigError(f"non-finite complex number {token!r}")
    return value


def _parse_float(token: str, what: str) -> float:
    try:
        v = float(token)
    except ValueError:
        raise ConfigError(f"cannot parse {what} {token!r}") from None
    if not math.isfinite(v):
        raise ConfigError(f"{what} must be finite")
    return v


def _parse_count(token: str) -> int:
    try:
        n = int(token)
    except ValueError:
        raise ConfigError(f"cannot parse count {token!r}") from None
    if n < 1 or n > 10_000:
        raise ConfigError("grid counts must lie in 1..10000")
    return n


def parse_grid(spec: str) -> list[complex]:
    """Label grid from one of three forms.

    * ``z1,z2,...`` complex list, e.g. ``1,1+i,-2i``;
    * ``|z|=r`` or ``|z|=r:n``, ``n`` equally spaced points on the circle;
    * ``lattice:re0,re1,nre,im0,im1,nim``, a rectangular lattice (row-major in
      the imaginary part).
    """
    s = spec.strip()
    if s.startswith("|z|="):
        body = s[4:]
        radius, _, count = body.partition(":")
        r = _parse_float(radius, "radius")
        if r < 0:
            raise ConfigError("radius must be nonnegative")
        n = _parse_count(count) if count else 1
        return [complex(r * math.cos(2 * math.pi * k / n), r * math.sin(2 * math.pi * k / n)) for k in range(n)]
    if s.startswith("lattice:"):
        parts = s[len("lattice:"):].split(",")
        if len(parts) != 6:
            raise ConfigError("lattice needs re0,re1,nre,im0,im1,nim")
        re0, re1 = (_parse_float(p, "lattice bound") for p in parts[0:2])
        im0, im1 = (_parse_float(p, "lattice bound") for p in parts[3:5])
        nre, nim = _parse_count(parts[2]), _parse_count(parts[5])
        res, ims = np.linspace(re0, re1, nre), np.linspace(im0, im1, nim)
        return [complex(a, b) for b in ims for a in res]
    tokens = [t for t in s.split(",")]
    if not tokens or any(not t.strip() for t in tokens):
        raise ConfigError(f"malformed grid {spec!r}")
    return [parse_complex(t) for t in tokens]


def parse_indices(spec: str) -> list[int]:
    """``3``, ``0..3`` (inclusive) or ``0,2,5``."""
    out = []
    for part in spec.split(","):
        part = part.strip()
        lo, sep, hi = part.partition("..")
        try:
            if sep:
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
        except ValueError:
            raise ConfigError(f"malformed index list {spec!r}") from None
    if not out or min(out) < 0:
        raise ConfigError("indices must be nonnegative")
    return out


def parse_reals(spec: str) -> list[float]:
    """``0.5,1,2`` or ``a:b:n`` (``n`` equally spaced points)."""
    if spec.count(":") == 2:
        a, b, n = spec.split(":")
        return np.linspace(_parse_float(a, "x"), _parse_float(b, "x"), _parse_count(n)).tolist()
    return [_parse_float(t, "x") for t in spec.split(",")]


def read_coefficients(path: Path) -> np.ndarray:
    """Complex coefficients separated by commas, whitespace or newlines; ``#`` starts a comment."""
    tokens = []
    for line in path.read_text().splitlines():
        line = line.split("#", 1)[0]
        tokens.extend(t for t in re.split(r"[,\s]+", line) if t)
    if not tokens:
        raise ConfigError(f"{path} holds no coefficients")
    return np.array([parse_complex(t) for t in tokens])


def read_samples(path: Path) -> SampledFunction:
    """Rows ``x,re,im`` plus one line ``envelope,scale,rate,degree``."""
    xs, vals, env = [], [], None
    for raw in path.read_text().splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = [p.strip() for p in line.split(",")]
        if parts[0] == "envelope":
            if env is not None or len(parts) != 4:
                raise ConfigError("expected exactly one line 'envelope,scale,rate,degree'")
            scale, rate, deg = (_parse_float(p, "envelope field") for p in parts[1:])
            try:
                env = DecayEnvelope("exponential-rate", rate, deg, scale)
            except DomainError as exc:
                raise ConfigError(str(exc)) from None
            continue
        if parts[0] in ("x", "x_re"):
            continue
        if len(parts) != 3:
            raise ConfigError(f"sample rows need x,re,im: {raw!r}")
        x, a, b = (_parse_float(p, "sample") for p in parts)
        xs.append(x)
        vals.append(complex(a, b))
    if env is None:
        raise ConfigError("sampled input needs an 'envelope,scale,rate,degree' line")
    try:
        return SampledFunction(np.array(xs), np.array(vals), env)
    except DomainError as exc:
        raise ConfigError(str(exc)) from None


def _detect_kind(path: Path) -> str:
    text = path.read_text()
    return "samples" if re.search(r"^\s*envelope\s*,", text, re.M) else "coeffs"


# -- config assembly ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="idxf",
        description="Index 2F2 transform toolkit: verification suites, transform, tabulation.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--config", type=Path, help="JSON file with defaults for any flag")
        p.add_argument("--gamma", type=float, help="space parameter gamma")
        p.add_argument("--mode", choices=("strict", "extended"), help="strict: 2*gamma integer (default)")
        p.add_argument("--tol", type=float, help=f"tolerance in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")
        p.add_argument("--grid", help="labels: 'z1,z2', '|z|=r[:n]' or 'lattice:re0,re1,nre,im0,im1,nim'")
        p.add_argument("--out", type=Path, help="output file (default: stdout)")

    p = sub.add_parser("verify", help="run verification suites and write a JSON report")
    common(p)
    p.add_argument("--suite", choices=SUITE_CHOICES, help="suite to run (default: all)")

    p = sub.add_parser("transform", help="apply the transform to an input file")
    common(p)
    p.add_argument("--input", type=Path, help="coefficient file or sampled-function file")
    p.add_argument("--input-kind", choices=("auto", "coeffs", "samples"), help="input format")
    p.add_argument("--linear", action="store_true", default=None,
                   help="output the conjugate, i.e. the variant linear in the input")

    p = sub.add_parser("eval", help="tabulate basis, kernel, eigenfunction, coherent state or energy")
    common(p)
    p.add_argument("--what", choices=WHAT_CHOICES, help="object to tabulate")
    p.add_argument("--n", help="indices: '3', '0..3' or '0,2,5'")
    p.add_argument("--x", help="abscissae: '0.5,1' or 'a:b:n'")
    p.add_argument("--w", help="second kernel argument (complex)")
    return parser


def _load_config(path: Path | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path} is not valid JSON: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError("config file must hold a JSON object")
    return {k.replace("-", "_"): v for k, v in data.items()}


def _pick(args, conf: dict, name: str, default=None):
    value = getattr(args, name, None)
    if value is not None:
        return value
    return conf.get(name, default)


def make_config(args: argparse.Namespace) -> RunConfig:
    conf = _load_config(args.config)
    command = args.command
    allowed = {"gamma", "mode", "tol", "grid", "out", "suite", "input", "input_kind", "linear",
               "what", "n", "x", "w"}
    unknown = set(conf) - allowed
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")

    tol = float(_pick(args, conf, "tol", DEFAULT_TOL))
    if not TOL_RANGE[0] <= tol <= TOL_RANGE[1]:
        raise ConfigError(f"tol must lie in [{TOL_RANGE[0]:g}, {TOL_RANGE[1]:g}]")

    raw_gamma = _pick(args, conf, "gamma")
    mode = _pick(args, conf, "mode", "strict")
    if mode not in ("strict", "extended"):
        raise ConfigError(f"unknown mode {mode!r}")
    if raw_gamma is None:
        raise ConfigError("--gamma is required")
    try:
        gp = GammaParam(float(raw_gamma), mode)
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None

    cfg = RunConfig(command=command, gamma=gp, tol=tol)
    grid = _pick(args, conf, "grid")
    if grid is not None:
        cfg.grid = parse_grid(str(grid))
    out = _pick(args, conf, "out")
    cfg.out = Path(out) if out is not None else None

    if command == "verify":
        cfg.suite = str(_pick(args, conf, "suite", "all"))
        if cfg.suite not in SUITE_CHOICES:
            raise ConfigError(f"unknown suite {cfg.suite!r}")
    elif command == "transform":
        src = _pick(args, conf, "input")
        if src is None:
            raise ConfigError("transform needs --input")
        cfg.input = Path(src)
        if not cfg.input.is_file():
            raise ConfigError(f"input file {cfg.input} not found")
        cfg.input_kind = str(_pick(args, conf, "input_kind", "auto"))
        if cfg.input_kind not in ("auto", "coeffs", "samples"):
            raise ConfigError(f"unknown input kind {cfg.input_kind!r}")
        cfg.linear = bool(_pick(args, conf, "linear", False))
        if not cfg.grid:
            raise ConfigError("transform needs --grid")
    else:
        cfg.what = _pick(args, conf, "what")
        if cfg.what not in WHAT_CHOICES:
            raise ConfigError(f"--what must be one of {', '.join(WHAT_CHOICES)}")
        n = _pick(args, conf, "n")
        cfg.n = parse_indices(str(n)) if n is not None else []
        x = _pick(args, conf, "x")
        cfg.x = parse_reals(str(x)) if x is not None else []
        w = _pick(args, conf, "w")
        cfg.w = parse_complex(str(w)) if w is not None else 0j
    return cfg


# -- output ---------------------------------------------------------------------

def _fmt(v: float) -> str:
    return repr(float(v))


def _meta_line(cfg: RunConfig, **extra) -> str:
    fields = {"tool": "idxf", "version": _tool_version(), "command": cfg.command,
              "gamma": cfg.gamma.gamma, "mode": cfg.gamma.mode}
    fields.update(CONVENTIONS)
    fields.update(extra)
    return "# " + json.dumps(jsonable(fields), sort_keys=True)


def _write(cfg: RunConfig, text: str) -> None:
    if cfg.out is None:
        sys.stdout.write(text)
        return
    try:
        cfg.out.write_text(text)
    except OSError as exc:
        raise ConfigError(f"cannot write {cfg.out}: {exc.strerror}") from None


def _csv(cfg: RunConfig, header: list[str], rows, **meta) -> str:
    buf = io.StringIO()
    buf.write(_meta_line(cfg, **meta) + "\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([v if isinstance(v, (int, str)) else _fmt(v) for v in row])
    return buf.getvalue()


# -- commands -------------------------------------------------------------------

def run_verify(cfg: RunConfig) -> int:
    names = suite_names(cfg.suite)
    reports = run_suites(names, cfg.gamma, cfg.tol)
    failed = [r.check for r in reports if not r.ok]
    payload = {
        "tool": "idxf",
        "version": _tool_version(),
        "parameters": {"gamma": cfg.gamma.gamma, "mode": cfg.gamma.mode, "tol": cfg.tol, "suites": names},
        "conventions": CONVENTIONS,
        "summary": {"checks": len(reports), "failed": failed, "ok": not failed},
        "reports": [r.to_dict() for r in reports],
    }
    _write(cfg, json.dumps(jsonable(payload), indent=2, sort_keys=True) + "\n")
    for r in reports:
        tag = "ok" if r.ok else "FAIL"
        expect = " (expected failure)" if r.expect_failure else ""
        rel = "<=" if r.passed else ">"
        print(f"{tag:4s} {r.check}: {r.max_abs_error:.3e} {rel} {r.tolerance:.0e}{expect}", file=sys.stderr)
    return EXIT_FAIL if failed else EXIT_OK


def run_transform(cfg: RunConfig) -> int:
    kind = _detect_kind(cfg.input) if cfg.input_kind == "auto" else cfg.input_kind
    gp = cfg.gamma
    gp.require_oscillator()
    if kind == "coeffs":
        exp = EigenExpansion(gp, read_coefficients(cfg.input))
        result = transform_apply_coeffs(exp, cfg.grid, linear=cfg.linear)
        path = "exact"
    else:
        phi = read_samples(cfg.input)
        result = transform_apply_sampled(phi, cfg.grid, gp, linear=cfg.linear)
        path = "quadrature"
    convention = "linear" if cfg.linear else "conjugate-linear"
    text = _csv(cfg, ["z_re", "z_im", "F_re", "F_im"], result.rows(),
                convention=convention, path=path, input=kind)
    _write(cfg, text)
    return EXIT_OK


def _need(values, flag: str):
    if not values:
        raise ConfigError(f"--what needs {flag}")
    return values


def run_eval(cfg: RunConfig) -> int:
    gp, what = cfg.gamma, cfg.what
    if what == "basis":
        rows = []
        for n in _need(cfg.n, "--n"):
            for z in _need(cfg.grid, "--grid"):
                v = basis_element(n, gp, z)
                rows.append((n, z.real, z.imag, v.real, v.imag))
        text = _csv(cfg, ["n", "z_re", "z_im", "re", "im"], rows, what=what)
    elif what == "kernel":
        rows = []
        for z in _need(cfg.grid, "--grid"):
            v = complex(kernel(z, cfg.w, gp))
            rows.append((z.real, z.imag, cfg.w.real, cfg.w.imag, v.real, v.imag))
        text = _csv(cfg, ["z_re", "z_im", "w_re", "w_im", "re", "im"], rows, what=what)
    elif what == "kernel-diagonal":
        rows = [(z.real, z.imag, kernel_diagonal(z, gp)) for z in _need(cfg.grid, "--grid")]
        text = _csv(cfg, ["z_re", "z_im", "K"], rows, what=what)
    elif what == "eigenfunction":
        rows = []
        for n in _need(cfg.n, "--n"):
            for x in _need(cfg.x, "--x"):
                v = eigenfunction_eval(n, gp, x)
                rows.append((n, x, v.real, v.imag))
        text = _csv(cfg, ["n", "x", "re", "im"], rows, what=what)
    elif what == "coherent-state":
        rows = []
        for z in _need(cfg.grid, "--grid"):
            for x in _need(cfg.x, "--x"):
                v = cs_closed(x, z, gp)
                rows.append((x, z.real, z.imag, v.real, v.imag))
        text = _csv(cfg, ["x", "z_re", "z_im", "re", "im"], rows, what=what)
    else:
        pc = physical_config_for_gamma(gp)
        rows = [(n, energy_level(n, pc) / (pc.hbar * pc.omega)) for n in _need(cfg.n, "--n")]
        text = _csv(cfg, ["n", "E_over_hbar_omega"], rows, what=what)
    _write(cfg, text)
    return EXIT_OK


COMMANDS = {"verify": run_verify, "transform": run_transform, "eval": run_eval}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = make_config(args)
        return COMMANDS[cfg.command](cfg)
    except (NumericalError, OverflowError) as exc:
        print(f"idxf: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (IdxfError, ValueError, OSError) as exc:
        print(f"idxf: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
