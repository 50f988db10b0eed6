import math

import numpy as np
import pytest

from domainpert import (ProblemSpec, custom, disc, eigen_count, free, inverse_square,
                        miss_distance, reflect_problem, solve_eigenvalues)
from domainpert.errors import ClassificationError, DomainError, EigenvalueSearchError
from domainpert.reference import LAMBDA_0, TRUNCATED_TABLE

PI2 = math.pi ** 2


def test_free_dirichlet_spectrum(regular_zero):
    res = solve_eigenvalues(ProblemSpec(regular_zero), 0, 3)
    for r in res:
        assert r.lam == pytest.approx((r.n + 1) ** 2 * PI2, rel=1e-10)
        assert r.width <= 1e-10
        assert r.bracket[0] <= r.lam <= r.bracket[1]


def test_free_friedrichs_equals_dirichlet():
    # c = 0: the recessive germ is f = x - a, i.e. a Dirichlet condition
    res = solve_eigenvalues(ProblemSpec(free()), 0, 2)
    assert np.allclose([r.lam for r in res], [PI2, 4 * PI2, 9 * PI2], rtol=0, atol=1e-8)


def test_miss_distance(regular_zero):
    P = ProblemSpec(regular_zero)
    assert abs(miss_distance(P, PI2)) < 1e-9
    lo, hi = miss_distance(P, 0.5 * PI2), miss_distance(P, 2 * PI2)
    assert lo * hi < 0 and abs(hi) > 1e-3


def test_miss_distance_bessel(bessel06):
    assert abs(miss_distance(ProblemSpec(bessel06), LAMBDA_0)) < 1e-6


def test_bessel_ground_state(bessel_ground):
    assert bessel_ground.lam == pytest.approx(LAMBDA_0, abs=1e-4)
    assert bessel_ground.oscillation_count == 0


def test_bessel_truncated(bessel06):
    r = solve_eigenvalues(ProblemSpec(bessel06, eps=0.01))[0]
    assert r.lam == pytest.approx(10.8878760, abs=1e-4)
    assert r.problem.left_condition == "dirichlet"


def test_table_rows(bessel06):
    for eps, lam in TRUNCATED_TABLE:
        r = solve_eigenvalues(ProblemSpec(bessel06, eps=eps))[0]
        assert abs(r.lam - lam) < 1e-4


@pytest.mark.parametrize("eps", [1e-1, 1e-2, 1e-3])
def test_truncated_bessel_oracle(bessel06, eps):
    # with Dirichlet at eps the eigenfunction is sqrt(x) [J_nu(kx) J_-nu(k eps) - J_-nu(kx) J_nu(k eps)]
    from scipy.optimize import brentq
    from scipy.special import jv

    nu = 0.6

    def cross(k):
        return jv(nu, k * eps) * jv(-nu, k) - jv(-nu, k * eps) * jv(nu, k)

    k0 = math.sqrt(LAMBDA_0)
    k = brentq(cross, k0, k0 + 1.0, xtol=1e-15)
    r = solve_eigenvalues(ProblemSpec(bessel06, eps=eps))[0]
    assert r.lam == pytest.approx(k * k, rel=1e-8)


@pytest.mark.parametrize("n", [0, 1, 2])
def test_domain_monotonicity_and_continuity(bessel06, n):
    full = solve_eigenvalues(ProblemSpec(bessel06), n, n)[0].lam
    grid = [1e-1, 1e-2, 1e-3, 1e-4, 1e-5]
    lams = [solve_eigenvalues(ProblemSpec(bessel06, eps=e), n, n)[0].lam for e in grid]
    assert all(l1 > l2 for l1, l2 in zip(lams, lams[1:]))
    gaps = [l - full for l in lams]
    assert all(g > 0 for g in gaps)
    assert all(g1 > g2 for g1, g2 in zip(gaps, gaps[1:]))


def test_index_and_disjoint_brackets(bessel06):
    res = solve_eigenvalues(ProblemSpec(bessel06), 0, 4)
    for r in res:
        assert r.oscillation_count == r.n
        f = r.phi1_path.f
        f = f[np.abs(f) > 1e-8 * np.abs(f).max()]  # drop the boundary zero
        assert np.count_nonzero(np.diff(np.sign(f))) == r.n
    for r1, r2 in zip(res, res[1:]):
        assert r1.bracket[1] < r2.bracket[0]


def test_partial_index_range(bessel06):
    full = solve_eigenvalues(ProblemSpec(bessel06), 0, 2)
    mid = solve_eigenvalues(ProblemSpec(bessel06), 2, 2)
    assert mid[0].n == 2
    assert mid[0].lam == pytest.approx(full[2].lam, abs=1e-9)


def test_eigen_count(bessel06):
    P = ProblemSpec(bessel06)
    assert eigen_count(P, 0.0) == 0
    assert eigen_count(P, 20.0) == 1
    assert eigen_count(P, 50.0) == 2


def test_negative_eigenvalue_found():
    V = custom("-50", (0.0, 1.0), location="none")
    r = solve_eigenvalues(ProblemSpec(V))[0]
    assert r.lam == pytest.approx(PI2 - 50.0, abs=1e-8)


def test_ceiling_exceeded(bessel06):
    with pytest.raises(EigenvalueSearchError):
        solve_eigenvalues(ProblemSpec(bessel06), 0, 0, lam_ceiling=5.0)
    with pytest.raises(EigenvalueSearchError):
        solve_eigenvalues(ProblemSpec(custom("-50", (0.0, 1.0), location="none")),
                          lam_floor=-20.0)


def test_problem_validation(bessel06):
    with pytest.raises(DomainError):
        ProblemSpec(bessel06, eps=1.0)
    with pytest.raises(DomainError):
        ProblemSpec(bessel06, eps=-0.1)
    with pytest.raises(DomainError):
        ProblemSpec(bessel06, eps=1e-8)  # closer than delta0
    with pytest.raises(ClassificationError):
        ProblemSpec(inverse_square(1.0))
    with pytest.raises(ClassificationError):
        ProblemSpec(disc(0.25, 0.6), eps=0.01)
    with pytest.raises(DomainError):
        solve_eigenvalues(ProblemSpec(bessel06), 2, 1)


def test_disc_both_orientations():
    V = disc(0.25, 0.6)
    R = reflect_problem(V)
    assert ProblemSpec(V).left_condition == "friedrichs"
    assert ProblemSpec(V).right_condition == "friedrichs"
    a = solve_eigenvalues(ProblemSpec(V), 0, 1)
    b = solve_eigenvalues(ProblemSpec(R), 0, 1)
    for x, y in zip(a, b):
        assert x.lam == pytest.approx(y.lam, abs=1e-8)
    assert a[0].lam < a[1].lam
    # truncation at the reflected singular end raises the eigenvalue
    t = solve_eigenvalues(ProblemSpec(R, eps=0.01))[0]
    assert t.lam > b[0].lam
