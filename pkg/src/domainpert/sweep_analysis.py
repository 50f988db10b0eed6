"""Eigenvalue sweeps over the truncation parameter and power-law fits.

A sweep solves the truncated problem on ``(a + eps, b)`` for each ``eps`` in a
grid and records ``shift = lambda_{n,eps} - lambda_n``. The exponent is fitted
by ordinary least squares of ``log(shift)`` against ``log(eps)``.
"""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, FitError, SweepError, DomainPertError
from .ode_engine import DEFAULT_TOL
from .perturbation import PerturbationPrediction
from .potential import Potential
from .spectrum import DEFAULT_EIG_TOL, ProblemSpec, solve_eigenvalues

__all__ = ["SweepRecord", "FitResult", "ComparisonReport", "run_sweep", "fit_exponent",
           "compare", "write_csv", "records_from_table", "DROP_THRESHOLD", "decade_grid"]

# shifts at or below DROP_THRESHOLD * solver_tol are treated as noise
DROP_THRESHOLD = 1e3


@dataclass(frozen=True)
class SweepRecord:
    eps: float
    lambda_eps: float
    shift: float
    solver_tol: float


@dataclass(frozen=True)
class FitResult:
    delta: float
    log_c: float
    c_hat: float
    rms_residual: float
    points_used: int

    def as_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class ComparisonReport:
    p: float
    delta: float
    exponent_discrepancy: float
    c_n: float
    c_hat: float
    coefficient_discrepancy: float
    exponent_rtol: float
    coefficient_rtol: float
    passed: bool

    def as_dict(self) -> dict:
        return asdict(self)


def decade_grid(first: int, last: int) -> list:
    """``[10^-first, ..., 10^-last]``."""
    return [10.0 ** -k for k in range(first, last + 1)]


def _solve_row(args):
    problem, n, tol = args
    return solve_eigenvalues(problem, n, n, tol)[0].lam


def run_sweep(potential: Potential, n: int, eps_grid: Sequence[float], tol: float = DEFAULT_EIG_TOL,
              delta0: Optional[float] = None, ode_tol=DEFAULT_TOL, workers: int = 1,
              lambda_n: Optional[float] = None) -> list:
    """Truncated eigenvalues ``lambda_{n,eps}`` for each ``eps`` in ``eps_grid``.

    ``lambda_n`` of the full problem is solved once (unless supplied) and
    subtracted to give each record's shift. With ``workers > 1`` the rows
    are solved in separate processes; results do not depend on ``workers``.

    Raises
    ------
    SweepError
        When a solve fails; ``partial`` holds the rows completed before it.
    """
    eps_grid = [float(e) for e in eps_grid]
    if not eps_grid:
        raise DomainError("empty eps grid")
    if any(e <= 0 for e in eps_grid):
        raise DomainError("eps values must be positive")
    if any(e2 >= e1 for e1, e2 in zip(eps_grid, eps_grid[1:])):
        raise DomainError("eps grid must be strictly decreasing")
    base = ProblemSpec(potential, 0.0, delta0, tuple(ode_tol))
    problems = [base.with_eps(e) for e in eps_grid]  # validates a + eps < b up front
    if lambda_n is None:
        lambda_n = solve_eigenvalues(base, n, n, tol)[0].lam

    records = []
    jobs = [(pr, n, tol) for pr in problems]
    try:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for eps, lam in zip(eps_grid, pool.map(_solve_row, jobs)):
                    records.append(SweepRecord(eps, lam, lam - lambda_n, tol))
        else:
            for eps, job in zip(eps_grid, jobs):
                lam = _solve_row(job)
                records.append(SweepRecord(eps, lam, lam - lambda_n, tol))
    except DomainPertError as exc:
        raise SweepError(f"sweep aborted after {len(records)} rows: {exc}", records) from exc
    return records


def records_from_table(rows, lambda_n: float, solver_tol: float = 1e-10) -> list:
    """Turn ``(eps, lambda_eps)`` pairs into records against ``lambda_n``."""
    return [SweepRecord(float(e), float(v), float(v) - lambda_n, solver_tol) for e, v in rows]


def fit_exponent(records: Sequence[SweepRecord], drop_threshold: float = DROP_THRESHOLD,
                 eps_max: Optional[float] = None) -> FitResult:
    """Least-squares fit of ``shift = c eps^delta`` in log-log coordinates.

    Records with ``shift <= drop_threshold * solver_tol`` (or ``eps > eps_max``)
    are excluded. Raises :class:`FitError` if fewer than two remain.
    """
    use = [r for r in records
           if r.shift > drop_threshold * r.solver_tol and (eps_max is None or r.eps <= eps_max)]
    if len(use) < 2:
        raise FitError(f"need at least 2 usable records, have {len(use)}")
    x = np.log([r.eps for r in use])
    y = np.log([r.shift for r in use])
    delta, log_c = np.polyfit(x, y, 1)
    resid = y - (delta * x + log_c)
    return FitResult(float(delta), float(log_c), math.exp(log_c),
                     float(np.sqrt(np.mean(resid ** 2))), len(use))


def compare(prediction: PerturbationPrediction, fit: FitResult, exponent_rtol: float = 0.02,
            coefficient_rtol: float = 0.1) -> ComparisonReport:
    """Relative discrepancies between predicted ``(p, c_n)`` and fitted ``(delta, c_hat)``."""
    de = abs(fit.delta - prediction.p) / prediction.p
    dc = abs(fit.c_hat - prediction.c_n) / prediction.c_n
    return ComparisonReport(prediction.p, fit.delta, de, prediction.c_n, fit.c_hat, dc,
                            exponent_rtol, coefficient_rtol,
                            bool(de <= exponent_rtol and dc <= coefficient_rtol))


def write_csv(records: Sequence[SweepRecord], path) -> None:
    """CSV with header ``eps,lambda_eps,shift,solver_tol``; 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["eps", "lambda_eps", "shift", "solver_tol"])
        for r in records:
            w.writerow([f"{v:.17g}" for v in (r.eps, r.lambda_eps, r.shift, r.solver_tol)])
