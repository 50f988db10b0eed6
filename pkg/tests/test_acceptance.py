"""Acceptance criteria 1-9, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v`` (lines appear in the terminal
summary) or directly with ``python tests/test_acceptance.py``.
"""
import math
import time
import warnings

import numpy as np
import pytest

from domainpert import (ProblemSpec, bessel, build_pair, c_epsilon, disc, free, greens_apply,
                        greens_residual, predict_shift, reflect_problem, solve_eigenvalues,
                        trial_eigenvalue, verify_trial_residual, wronskian)
from domainpert.reference import FITTED_SLOPE, LAMBDA_0, TRUNCATED_TABLE
from domainpert.sweep_analysis import (SweepRecord, compare, decade_grid, fit_exponent,
                                       records_from_table)

RESULTS = []
PI2 = math.pi ** 2
_cache = {}


def record(n, ok, detail, soft=False):
    tag = "PASS" if ok else ("WARN" if soft else "FAIL")
    line = f"criterion {n}: {tag}  {detail}"
    RESULTS.append(line)
    return line


def _bessel():
    return bessel(0.6, (0.0, 1.0))


def _table_sweep():
    """Truncated eigenvalues on the six-decade grid, with timing."""
    if "sweep" not in _cache:
        V = _bessel()
        lam0 = solve_eigenvalues(ProblemSpec(V))[0].lam
        t0 = time.perf_counter()
        recs = []
        for eps in decade_grid(1, 6):
            lam = solve_eigenvalues(ProblemSpec(V, eps=eps))[0].lam
            recs.append(SweepRecord(eps, lam, lam - lam0, 1e-10))
        _cache["sweep"] = (recs, time.perf_counter() - t0)
    return _cache["sweep"]


def check_1():
    t0 = time.perf_counter()
    lam = solve_eigenvalues(ProblemSpec(_bessel()))[0].lam
    dt = time.perf_counter() - t0
    err = abs(lam - LAMBDA_0)
    ok = err <= 1e-4 and dt < 5.0
    return ok, f"lambda_0={lam:.10f} |err|={err:.2e} (tol 1e-4) time={dt:.2f}s (<5s)"


def check_2():
    recs, dt = _table_sweep()
    errs = [abs(r.lambda_eps - lam) for r, (_, lam) in zip(recs, TRUNCATED_TABLE)]
    ok = max(errs) <= 1e-4 and dt < 30.0
    return ok, f"max |err| over 6 rows={max(errs):.2e} (tol 1e-4) time={dt:.2f}s (<30s)"


def check_3():
    fit = fit_exponent(records_from_table(TRUNCATED_TABLE, LAMBDA_0))
    err = abs(fit.delta - FITTED_SLOPE)
    return err <= 1e-6, f"delta={fit.delta:.9f} vs {FITTED_SLOPE} |err|={err:.1e} (tol 1e-6)"


def check_4():
    recs, _ = _table_sweep()
    d_all = fit_exponent(recs).delta
    d_small = fit_exponent(recs, eps_max=1e-3).delta
    ok = 1.19 <= d_all <= 1.22 and abs(d_small - 1.2) <= 0.01
    return ok, f"delta_all={d_all:.6f} in [1.19,1.22]; delta(eps<=1e-3)={d_small:.6f} (|d-1.2|<=0.01)"


def check_5():
    V = _bessel()
    eig = solve_eigenvalues(ProblemSpec(V))[0]
    pred = predict_shift(V, eig)
    table_c = (10.7751337 - 10.7751055) / 1e-6
    rel = abs(pred.c_n - table_c) / table_c
    return rel <= 0.02, f"c_0={pred.c_n:.4f} vs table {table_c:.1f} rel={rel:.2%} (tol 2%)"


def check_6():
    V = free((0.0, 1.0))
    errs = []
    for eps in (1e-2, 1e-3):
        lam = solve_eigenvalues(ProblemSpec(V, eps=eps))[0].lam
        errs.append(abs(lam - PI2 / (1 - eps) ** 2) / (PI2 / (1 - eps) ** 2))
    eig = solve_eigenvalues(ProblemSpec(V))[0]
    pred = predict_shift(V, eig)
    # eps grid 1e-2..1e-6: on 1e-2..1e-5 even the exact spectrum fits c_hat 2.07% off
    recs = [SweepRecord(e, l, l - eig.lam, 1e-10) for e in decade_grid(2, 6)
            for l in [solve_eigenvalues(ProblemSpec(V, eps=e))[0].lam]]
    fit = fit_exponent(recs)
    ok = (max(errs) <= 1e-9 and pred.p == 1.0 and abs(pred.c_n - 2 * PI2) <= 1e-6 * 2 * PI2
          and abs(fit.delta - 1) <= 0.02 and abs(fit.c_hat - 2 * PI2) <= 0.02 * 2 * PI2)
    return ok, (f"max rel err vs pi^2/(1-eps)^2={max(errs):.1e}; p={pred.p} c_0={pred.c_n:.6f} "
                f"(2pi^2={2 * PI2:.6f}); fit delta={fit.delta:.4f} "
                f"c_hat={fit.c_hat:.3f} ({abs(fit.c_hat / (2 * PI2) - 1):.2%})")


def check_7():
    R = reflect_problem(disc(0.25, 0.6))
    eig = solve_eigenvalues(ProblemSpec(R))[0]
    pred = predict_shift(R, eig)
    recs = [SweepRecord(e, l, l - eig.lam, 1e-10) for e in decade_grid(2, 5)
            for l in [solve_eigenvalues(ProblemSpec(R, eps=e))[0].lam]]
    fit = fit_exponent(recs)
    rel = abs(fit.delta - 4 / 3) / (4 / 3)
    ok = abs(pred.p - 4 / 3) <= 1e-14 and rel <= 0.02
    cmp = compare(pred, fit)
    return ok, (f"p={pred.p:.15f} delta={fit.delta:.6f} rel={rel:.2%} (tol 2%); "
                f"c_n={pred.c_n:.4f} c_hat={fit.c_hat:.4f} verdict={'pass' if cmp.passed else 'fail'}")


def check_8():
    V = _bessel()
    eigs = solve_eigenvalues(ProblemSpec(V), 0, 2)
    pair = build_pair(V, eigs[0].lam)
    xi = greens_apply(pair, pair.phi1)
    parts = {}
    x = np.linspace(0.05, 0.95, 50)
    w = wronskian(pair.phi1, pair.phi2, x)
    parts["kappa_drift"] = (float(np.max(np.abs(w - pair.kappa)) / abs(pair.kappa)), 1e-6)
    parts["kappa_vs_-2s"] = (abs(pair.kappa + 1.2) / 1.2, 1e-4)
    scaled = pair.rescaled(3.0, 7.0)
    xs = greens_apply(scaled, scaled.phi1)
    parts["c_eps_rescale"] = (max(abs(c_epsilon(pair, xi, e) - c_epsilon(scaled, xs, e))
                                  / c_epsilon(pair, xi, e) for e in (1e-2, 1e-3, 1e-4)), 1e-12)
    mono = True
    for n in (0, 1, 2):
        lams = [solve_eigenvalues(ProblemSpec(V, eps=e), n, n)[0].lam for e in decade_grid(1, 5)]
        mono &= all(a > b for a, b in zip(lams, lams[1:])) and lams[-1] > eigs[n].lam
    parts["monotone_n012"] = (0.0 if mono else 1.0, 0.0)
    osc = all(e.oscillation_count == e.n for e in eigs)
    parts["oscillation"] = (0.0 if osc else 1.0, 0.0)
    xq = np.linspace(0.05, 0.95, 100)
    parts["greens_residual"] = (float(greens_residual(xi, xq).max() / np.abs(xi.f).max()), 1e-6)
    parts["h(a+eps)"] = (max(verify_trial_residual(pair, xi, e).boundary_rel
                             for e in (1e-2, 1e-3, 1e-4)), 1e-10)
    ok = all(v <= tol for v, tol in parts.values())
    detail = "; ".join(f"{k}={v:.1e}" if tol else f"{k}={'ok' if v == 0 else 'FAIL'}"
                       for k, (v, tol) in parts.items())
    return ok, detail


def check_9():
    V = _bessel()
    eig = solve_eigenvalues(ProblemSpec(V))[0]
    pair = build_pair(V, eig.lam)
    xi = greens_apply(pair, pair.phi1)
    eps = [1e-2, 1e-3, 1e-4]
    gaps = [abs(solve_eigenvalues(ProblemSpec(V, eps=e))[0].lam - trial_eigenvalue(pair, xi, e))
            for e in eps]
    slope = np.polyfit(np.log(eps), np.log(gaps), 1)[0]
    target = 2 * 1.2 - 0.3
    return slope >= target, (f"gaps={', '.join(f'{g:.2e}' for g in gaps)} "
                             f"slope={slope:.3f} (>= {target:.1f}, soft)")


CHECKS = [(1, check_1), (2, check_2), (3, check_3), (4, check_4), (5, check_5),
          (6, check_6), (7, check_7), (8, check_8), (9, check_9)]


@pytest.mark.parametrize("n,check", CHECKS[:-1], ids=[f"criterion_{n}" for n, _ in CHECKS[:-1]])
def test_criterion(n, check):
    ok, detail = check()
    print(record(n, ok, detail))
    assert ok, detail


def test_criterion_9_soft():
    ok, detail = check_9()
    print(record(9, ok, detail, soft=True))
    if not ok:
        warnings.warn(f"second-order diagnostic below target: {detail}")


if __name__ == "__main__":
    for n, check in CHECKS:
        ok, detail = check()
        print(record(n, ok, detail, soft=(n == 9)), flush=True)
