import csv
import math

import numpy as np
import pytest

from domainpert import ProblemSpec, disc, free, predict_shift, reflect_problem, solve_eigenvalues
from domainpert import sweep_analysis as sa
from domainpert.errors import DomainError, EigenvalueSearchError, FitError, SweepError
from domainpert.perturbation import PerturbationPrediction
from domainpert.reference import FITTED_SLOPE, LAMBDA_0, TRUNCATED_TABLE
from domainpert.sweep_analysis import (SweepRecord, compare, decade_grid, fit_exponent,
                                       records_from_table, run_sweep, write_csv)

PI2 = math.pi ** 2


@pytest.fixture(scope="module")
def bessel_sweep(bessel06):
    return run_sweep(bessel06, 0, decade_grid(1, 6))


def test_decade_grid():
    assert decade_grid(1, 3) == [0.1, 0.01, 0.001]


def test_bessel_sweep_matches_table(bessel_sweep):
    for rec, (eps, lam) in zip(bessel_sweep, TRUNCATED_TABLE):
        assert rec.eps == eps
        assert abs(rec.lambda_eps - lam) < 1e-4
        assert rec.shift > 0


def test_free_single_row():
    rec = run_sweep(free(), 0, [0.01])[0]
    assert rec.lambda_eps == pytest.approx(PI2 / 0.99 ** 2, rel=1e-10)
    assert rec.shift == pytest.approx(PI2 / 0.99 ** 2 - PI2, rel=1e-8)


def test_fit_reference_rows():
    fit = fit_exponent(records_from_table(TRUNCATED_TABLE, LAMBDA_0))
    assert abs(fit.delta - FITTED_SLOPE) < 1e-6
    assert fit.points_used == 6


def test_fit_exact_power_law():
    eps = decade_grid(1, 6)
    recs = [SweepRecord(e, 1.0 + 7 * e ** 1.5, 7 * e ** 1.5, 1e-16) for e in eps]
    fit = fit_exponent(recs)
    assert fit.delta == pytest.approx(1.5, abs=1e-12)
    assert fit.c_hat == pytest.approx(7.0, rel=1e-12)
    assert fit.rms_residual < 1e-12


def test_fit_scale_equivariance(bessel_sweep):
    fit = fit_exponent(bessel_sweep)
    scaled = [SweepRecord(r.eps, r.lambda_eps, 5.0 * r.shift, r.solver_tol) for r in bessel_sweep]
    fit5 = fit_exponent(scaled)
    assert abs(fit5.delta - fit.delta) < 1e-12
    assert fit5.log_c == pytest.approx(fit.log_c + math.log(5.0), abs=1e-12)


def test_noise_guard():
    recs = [SweepRecord(1e-2, 0, 1e-3, 1e-10), SweepRecord(1e-3, 0, 1e-4, 1e-10),
            SweepRecord(1e-4, 0, 5e-8, 1e-10)]
    assert fit_exponent(recs).points_used == 2
    with pytest.raises(FitError):
        fit_exponent(recs[1:])
    assert fit_exponent(recs, eps_max=1e-2).points_used == 2


def test_free_sweep_closed_form():
    grid = decade_grid(2, 5)
    recs = run_sweep(free(), 0, grid)
    fit = fit_exponent(recs)
    # the same fit on the exact truncated spectrum pi^2 / (1 - eps)^2
    e = np.array(grid)
    d, lc = np.polyfit(np.log(e), np.log(PI2 / (1 - e) ** 2 - PI2), 1)
    assert fit.delta == pytest.approx(d, abs=1e-6)
    assert fit.c_hat == pytest.approx(math.exp(lc), rel=1e-5)
    assert fit.delta == pytest.approx(1.0, abs=0.02)
    # with one more decade the coefficient is inside 2%
    fit6 = fit_exponent(run_sweep(free(), 0, decade_grid(2, 6)))
    assert fit6.c_hat == pytest.approx(2 * PI2, rel=0.02)


def test_compare_bessel(bessel06, bessel_sweep):
    eig = solve_eigenvalues(ProblemSpec(bessel06))[0]
    pred = predict_shift(bessel06, eig)
    fit = fit_exponent(bessel_sweep)
    rep = compare(pred, fit)
    assert rep.passed
    assert abs(rep.delta - rep.p) < 0.01
    small = fit_exponent(bessel_sweep, eps_max=1e-3)
    assert abs(small.delta - 1.2) <= abs(fit.delta - 1.2) + 0.005
    assert abs(small.delta - 1.2) < 0.01
    d = rep.as_dict()
    assert set(d) >= {"p", "delta", "c_n", "c_hat", "passed"}


def test_compare_verdict_fails_on_mismatch():
    pred = PerturbationPrediction(0, 1.0, 1.0, 10.0, -1.0, 0.1)
    fit = sa.FitResult(1.2, math.log(10.0), 10.0, 0.0, 4)
    assert not compare(pred, fit).passed
    assert compare(pred, fit, exponent_rtol=0.25).passed


def test_disc_exponent():
    R = reflect_problem(disc(0.25, 0.6))
    recs = run_sweep(R, 0, decade_grid(2, 5))
    fit = fit_exponent(recs)
    assert fit.delta == pytest.approx(4.0 / 3.0, rel=0.02)
    eig = solve_eigenvalues(ProblemSpec(R))[0]
    assert compare(predict_shift(R, eig), fit).passed


def test_parallel_matches_serial(bessel06):
    grid = [1e-2, 1e-3, 1e-4]
    a = run_sweep(bessel06, 0, grid)
    b = run_sweep(bessel06, 0, grid, workers=2)
    assert a == b


def test_grid_validation(bessel06):
    with pytest.raises(DomainError):
        run_sweep(bessel06, 0, [])
    with pytest.raises(DomainError):
        run_sweep(bessel06, 0, [1e-3, 1e-2])
    with pytest.raises(DomainError):
        run_sweep(bessel06, 0, [-1e-3])
    with pytest.raises(DomainError):
        run_sweep(bessel06, 0, [2.0, 1e-2])


def test_partial_results_on_failure(bessel06, monkeypatch):
    real = sa.solve_eigenvalues
    calls = {"n": 0}

    def flaky(problem, *args, **kw):
        if problem.eps and problem.eps < 1e-3:
            raise EigenvalueSearchError("forced failure")
        calls["n"] += 1
        return real(problem, *args, **kw)

    monkeypatch.setattr(sa, "solve_eigenvalues", flaky)
    with pytest.raises(SweepError) as info:
        run_sweep(bessel06, 0, [1e-1, 1e-2, 1e-4, 1e-5])
    assert [r.eps for r in info.value.partial] == [1e-1, 1e-2]


def test_write_csv(tmp_path, bessel_sweep):
    path = tmp_path / "sweep.csv"
    write_csv(bessel_sweep, path)
    text = path.read_text()
    rows = list(csv.reader(text.splitlines()))
    assert rows[0] == ["eps", "lambda_eps", "shift", "solver_tol"]
    assert len(rows) == 7
    for row, rec in zip(rows[1:], bessel_sweep):
        assert float(row[1]) == rec.lambda_eps  # 17 significant digits round-trip
