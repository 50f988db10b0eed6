"""Command-line front end.

Commands: ``eig``, ``sweep``, ``predict``, ``verify``. A problem is defined by
flags, by a flat ``key = value`` config file (``--config``), or both; flags
win. Exit status is 0 on success, 1 for configuration errors and 2 for solver
failures. Errors are printed to stderr as a single ``<kind>-error: ...`` line.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import potential as pot
from .errors import ConfigError, DomainPertError, ExprSyntaxError
from .ode_engine import DEFAULT_TOL
from .perturbation import (build_pair, greens_apply, greens_residual, predict_shift,
                           verify_trial_residual)
from .spectrum import DEFAULT_EIG_TOL, ProblemSpec, solve_eigenvalues
from .sweep_analysis import compare, decade_grid, fit_exponent, run_sweep, write_csv

SCHEMA_VERSION = 1
FAMILIES = ("free", "inverse-square", "bessel", "disc", "custom")
KEYS = ("family", "nu", "gamma", "c", "expr", "singular_end", "interval", "n", "eps",
        "eps_grid", "tol", "ode_tol", "delta0", "out", "json", "workers",
        "exponent_rtol", "coefficient_rtol")
DEFAULT_EPS_GRID = decade_grid(1, 6)
SMALL_EPS = 1e-3


@dataclass(frozen=True)
class Config:
    potential: pot.Potential
    n_lo: int
    n_hi: int
    eps: float
    eps_grid: tuple
    tol: float
    ode_tol: tuple
    delta0: Optional[float]
    out: Optional[str]
    json: Optional[str]
    workers: int
    exponent_rtol: float
    coefficient_rtol: float


def read_config_file(path) -> dict:
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    out = {}
    try:
        with open(path) as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ConfigError("config", f"cannot read {path}: {exc.strerror}") from None
    for lineno, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("config", f"line {lineno}: expected key = value")
        key, value = (t.strip() for t in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
        out[key] = value
    return out


def _float(key, text):
    try:
        v = float(text)
    except (TypeError, ValueError):
        raise ConfigError(key, f"not a number: {text!r}") from None
    if not math.isfinite(v):
        raise ConfigError(key, f"not finite: {text!r}")
    return v


def _float_list(key, text):
    parts = [t for t in str(text).replace(" ", "").split(",") if t]
    if not parts:
        raise ConfigError(key, "empty list")
    return [_float(key, t) for t in parts]


def _index_range(text):
    text = str(text).strip()
    try:
        if ".." in text:
            lo, hi = (int(t) for t in text.split("..", 1))
        else:
            lo = hi = int(text)
    except ValueError:
        raise ConfigError("n", f"expected an index or LO..HI, got {text!r}") from None
    if lo < 0 or hi < lo:
        raise ConfigError("n", f"need 0 <= LO <= HI, got {text!r}")
    return lo, hi


def _build_potential(raw) -> pot.Potential:
    family = raw.get("family")
    if family is None:
        raise ConfigError("family", "missing")
    if family not in FAMILIES:
        raise ConfigError("family", f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    interval = (0.0, 1.0)
    if "interval" in raw:
        if family == "disc":
            raise ConfigError("interval", "the disc family fixes its own interval (0, 1/(1-gamma))")
        vals = _float_list("interval", raw["interval"])
        if len(vals) != 2:
            raise ConfigError("interval", "expected LO,HI")
        if not vals[0] < vals[1]:
            raise ConfigError("interval", f"lower end {vals[0]} must be below upper end {vals[1]}")
        interval = tuple(vals)

    def need(key):
        if key not in raw:
            raise ConfigError(key, f"required for family {family}")
        return _float(key, raw[key])

    try:
        if family == "free":
            return pot.free(interval)
        if family == "inverse-square":
            return pot.inverse_square(need("c"), interval)
        if family == "bessel":
            return pot.bessel(need("nu"), interval)
        if family == "disc":
            return pot.disc(need("gamma"), need("nu"))
        if "expr" not in raw:
            raise ConfigError("expr", "required for family custom")
        end = raw.get("singular_end", "left")
        if end not in ("left", "right", "none"):
            raise ConfigError("singular_end", f"expected left, right or none, got {end!r}")
        strength = None if end == "none" else need("c")
        return pot.custom(raw["expr"], interval, strength, end)
    except ExprSyntaxError as exc:
        raise ConfigError("expr", str(exc)) from None
    except ConfigError:
        raise
    except DomainPertError as exc:
        raise ConfigError("family", str(exc)) from None


def build_config(raw: dict) -> Config:
    """Validate a raw key/value mapping into a :class:`Config`."""
    for key in raw:
        if key not in KEYS:
            raise ConfigError(key, "unknown key")
    potential = _build_potential(raw)
    n_lo, n_hi = _index_range(raw.get("n", "0"))
    eps = _float("eps", raw["eps"]) if "eps" in raw else 0.0
    if eps < 0:
        raise ConfigError("eps", "must be >= 0")
    grid = tuple(_float_list("eps_grid", raw["eps_grid"])) if "eps_grid" in raw \
        else tuple(DEFAULT_EPS_GRID)
    if any(e <= 0 for e in grid) or any(b >= a for a, b in zip(grid, grid[1:])):
        raise ConfigError("eps_grid", "values must be positive and strictly decreasing")
    L = potential.interval.length
    if grid[0] >= L:
        raise ConfigError("eps_grid", f"eps={grid[0]} leaves no interval (length {L})")
    if eps >= L:
        raise ConfigError("eps", f"eps={eps} leaves no interval (length {L})")
    tol = _float("tol", raw["tol"]) if "tol" in raw else DEFAULT_EIG_TOL
    if tol <= 0:
        raise ConfigError("tol", "must be positive")
    if "ode_tol" in raw:
        ot = _float("ode_tol", raw["ode_tol"])
        if ot <= 0:
            raise ConfigError("ode_tol", "must be positive")
        ode_tol = (ot, ot)
    else:
        ode_tol = DEFAULT_TOL
    delta0 = _float("delta0", raw["delta0"]) if "delta0" in raw else None
    if delta0 is not None and not 0 < delta0 < L:
        raise ConfigError("delta0", "must lie in (0, b - a)")
    try:
        workers = int(raw.get("workers", 1))
    except ValueError:
        raise ConfigError("workers", "expected an integer") from None
    if workers < 1:
        raise ConfigError("workers", "must be >= 1")
    return Config(potential, n_lo, n_hi, eps, grid, tol, ode_tol, delta0,
                  raw.get("out"), raw.get("json"), workers,
                  _float("exponent_rtol", raw.get("exponent_rtol", 0.02)),
                  _float("coefficient_rtol", raw.get("coefficient_rtol", 0.1)))


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("argv", message)


def _parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--family")
    common.add_argument("--nu")
    common.add_argument("--gamma")
    common.add_argument("--c")
    common.add_argument("--expr")
    common.add_argument("--singular-end", dest="singular_end")
    common.add_argument("--interval", metavar="LO,HI")
    common.add_argument("--n", metavar="RANGE")
    common.add_argument("--eps")
    common.add_argument("--eps-grid", dest="eps_grid", metavar="LIST")
    common.add_argument("--tol")
    common.add_argument("--ode-tol", dest="ode_tol")
    common.add_argument("--delta0")
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--json", metavar="PATH")
    common.add_argument("--workers")
    p = _Parser(prog="domainpert", description=__doc__.split("\n")[0])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("eig", parents=[common], help="eigenvalues of the full or truncated problem")
    sub.add_parser("sweep", parents=[common], help="eps-sweep, exponent fit and comparison")
    sub.add_parser("predict", parents=[common], help="predicted exponent and coefficient")
    sub.add_parser("verify", parents=[common], help="perturbation residual diagnostics")
    return p


def _canonical(potential):
    # truncation happens at the singular end, which the solver wants on the left
    if potential.singularity.location == "right":
        return pot.reflect_problem(potential)
    return potential


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True)


def _emit_json(cfg: Config, report: dict, stdout):
    text = _dump(report)
    if cfg.json:
        with open(cfg.json, "w") as fh:
            fh.write(text + "\n")
    return text


def cmd_eig(cfg: Config, stdout) -> int:
    potential = _canonical(cfg.potential) if cfg.eps > 0 else cfg.potential
    problem = ProblemSpec(potential, cfg.eps, cfg.delta0, cfg.ode_tol)
    results = solve_eigenvalues(problem, cfg.n_lo, cfg.n_hi, cfg.tol)
    print(f"{'n':>3}  {'lambda':>24}  {'bracket_width':>13}", file=stdout)
    for r in results:
        print(f"{r.n:>3}  {r.lam:>24.17g}  {r.width:>13.3e}", file=stdout)
    if cfg.json:
        _emit_json(cfg, {"schema": f"domainpert.eig/{SCHEMA_VERSION}",
                         "potential": cfg.potential.describe(), "eps": cfg.eps,
                         "eigenvalues": [{"n": r.n, "lambda": r.lam, "bracket": list(r.bracket)}
                                         for r in results]}, stdout)
    return 0


def _predictions(cfg, potential):
    problem = ProblemSpec(potential, 0.0, cfg.delta0, cfg.ode_tol)
    eigs = solve_eigenvalues(problem, cfg.n_lo, cfg.n_hi, cfg.tol)
    return eigs, [predict_shift(potential, e) for e in eigs]


def cmd_predict(cfg: Config, stdout) -> int:
    potential = _canonical(cfg.potential)
    _, preds = _predictions(cfg, potential)
    report = {"schema": f"domainpert.predict/{SCHEMA_VERSION}",
              "potential": cfg.potential.describe(),
              "p": preds[0].p,
              "predictions": [pr.as_dict() for pr in preds]}
    print(_emit_json(cfg, report, stdout), file=stdout)
    return 0


def cmd_sweep(cfg: Config, stdout) -> int:
    if cfg.n_lo != cfg.n_hi:
        raise ConfigError("n", "sweep takes a single index")
    potential = _canonical(cfg.potential)
    eigs, preds = _predictions(cfg, potential)
    records = run_sweep(potential, cfg.n_lo, cfg.eps_grid, cfg.tol, cfg.delta0, cfg.ode_tol,
                        workers=cfg.workers, lambda_n=eigs[0].lam)
    fit_all = fit_exponent(records)
    small = [r for r in records if r.eps <= SMALL_EPS]
    try:
        fit_small = fit_exponent(small).as_dict()
    except DomainPertError:
        fit_small = None
    cmp = compare(preds[0], fit_all, cfg.exponent_rtol, cfg.coefficient_rtol)
    if cfg.out:
        write_csv(records, cfg.out)
    else:
        _csv_to(records, stdout)
    report = {"schema": f"domainpert.sweep/{SCHEMA_VERSION}",
              "potential": cfg.potential.describe(),
              "n": cfg.n_lo,
              "prediction": preds[0].as_dict(),
              "fit": fit_all.as_dict(),
              "fit_small_eps": fit_small,
              "small_eps_max": SMALL_EPS,
              "comparison": cmp.as_dict(),
              "delta": fit_all.delta,
              "p": preds[0].p,
              "verdict": "pass" if cmp.passed else "fail",
              "records": [r.__dict__ for r in records]}
    _emit_json(cfg, report, stdout)
    print(f"verdict: {'pass' if cmp.passed else 'fail'} p={cmp.p:.6g} delta={cmp.delta:.6g} "
          f"c_n={cmp.c_n:.6g} c_hat={cmp.c_hat:.6g}", file=stdout)
    return 0


def _csv_to(records, stream):
    stream.write("eps,lambda_eps,shift,solver_tol\n")
    for r in records:
        stream.write(",".join(f"{v:.17g}" for v in (r.eps, r.lambda_eps, r.shift, r.solver_tol)) + "\n")


def cmd_verify(cfg: Config, stdout) -> int:
    potential = _canonical(cfg.potential)
    eigs, _ = _predictions(cfg, potential)
    out = []
    ok = True
    for e in eigs:
        pair = build_pair(potential, e.lam, cfg.delta0, cfg.ode_tol)
        xi = greens_apply(pair, pair.phi1)
        a, b = pair.phi1.lo, pair.phi1.hi
        L = b - a
        xq = np.linspace(a + 0.05 * L, b - 0.05 * L, 100)
        gres = float(greens_residual(xi, xq).max() / np.abs(xi.f).max())
        rows = []
        for eps in cfg.eps_grid:
            if potential.interval.a + eps < pair.phi1.lo:
                continue
            rep = verify_trial_residual(pair, xi, eps)
            rows.append(rep.as_dict())
            ok &= rep.boundary_rel <= 1e-10 and rep.rel_residual <= 1e-6
        ok &= pair.kappa_deviation <= 1e-6 and gres <= 1e-6
        out.append({"n": e.n, "lambda_n": e.lam, "kappa": pair.kappa,
                    "kappa_deviation": pair.kappa_deviation, "greens_residual_rel": gres,
                    "trial": rows})
    report = {"schema": f"domainpert.verify/{SCHEMA_VERSION}",
              "potential": cfg.potential.describe(), "results": out,
              "verdict": "pass" if ok else "fail"}
    print(_emit_json(cfg, report, stdout), file=stdout)
    return 0


COMMANDS = {"eig": cmd_eig, "sweep": cmd_sweep, "predict": cmd_predict, "verify": cmd_verify}


def main(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = _parser().parse_args(argv)
        raw = read_config_file(args.config) if args.config else {}
        for key in KEYS:
            val = getattr(args, key, None)
            if val is not None:
                raw[key] = val
        cfg = build_config(raw)
    except ConfigError as exc:
        print(f"config-error: {exc}", file=stderr)
        return 1
    try:
        return COMMANDS[args.command](cfg, stdout)
    except ConfigError as exc:
        print(f"config-error: {exc}", file=stderr)
        return 1
    except DomainPertError as exc:
        print(f"solver-error: {type(exc).__name__}: {exc}".replace("\n", " "), file=stderr)
        return 2
    except OSError as exc:
        print(f"io-error: {exc}".replace("\n", " "), file=stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
