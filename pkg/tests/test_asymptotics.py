import math

import pytest
from scipy.special import gamma, jv, jvp

from domainpert import bessel, free, integrate, inverse_square
from domainpert.asymptotics import default_delta0, local_germs, power_law_state
from domainpert.errors import ClassificationError, GermError
from domainpert.perturbation import wronskian

LAM0 = 10.7751055


def test_free_germs():
    rec, dom = local_germs(free(), math.pi ** 2, 1e-4)
    assert rec.kind == "recessive" and dom.kind == "dominant"
    assert rec.x0 == pytest.approx(1e-4)
    assert rec.value == pytest.approx(1e-4) and rec.derivative == pytest.approx(1.0)
    exact = math.sin(math.pi * 1e-4) / math.pi
    assert rec.value == pytest.approx(exact, rel=1e-7)
    assert dom.value == pytest.approx(1.0) and dom.derivative == 0.0


def bessel_closed_form(nu, lam, x):
    k = math.sqrt(lam)
    A = 2 ** nu * gamma(1 + nu) * lam ** (-nu / 2)
    f = A * math.sqrt(x) * jv(nu, k * x)
    df = A * (0.5 / math.sqrt(x) * jv(nu, k * x) + math.sqrt(x) * k * jvp(nu, k * x))
    return f, df


def test_bessel_germ_matches_special_function():
    V = bessel(0.6)
    rec, _ = local_germs(V, LAM0, 1e-5)
    f, df = bessel_closed_form(0.6, LAM0, rec.x0)
    assert rec.value == pytest.approx(f, rel=1e-4)
    assert rec.derivative == pytest.approx(df, rel=1e-4)


def test_bessel_germ_integrates_to_closed_form():
    V = bessel(0.6)
    rec, _ = local_germs(V, LAM0, 1e-6)
    path = integrate(V, LAM0, rec.state(), 0.7)
    f, df = bessel_closed_form(0.6, LAM0, 0.7)
    assert path.end().f == pytest.approx(f, rel=1e-8)
    assert path.end().df == pytest.approx(df, rel=1e-8)


def test_error_estimate_shrinks_with_delta0():
    V = bessel(0.6)
    errs = [local_germs(V, LAM0, d, error_target=1.0)[0].rel_error for d in (1e-2, 1e-3, 1e-4)]
    assert errs[0] > 10 * errs[1] > 100 * errs[2]
    rec, dom = local_germs(V, LAM0)
    assert rec.rel_error < 1e-9 and dom.rel_error < 1e-9


def test_wronskian_defect_shrinks():
    # pair recessive germs at delta0 with a dominant germ taken much closer
    V = bessel(0.6)
    _, dom = local_germs(V, LAM0, 1e-10, estimate_error=False)
    pd = integrate(V, LAM0, dom.state(), 0.5).end()
    defects = []
    for d in (1e-2, 1e-3, 1e-4, 1e-5):
        rec, _ = local_germs(V, LAM0, d, estimate_error=False)
        pr = integrate(V, LAM0, rec.state(), 0.5).end()
        defects.append(abs(wronskian(pr, pd) + 1.2))
    assert all(d1 >= 2 * d2 for d1, d2 in zip(defects, defects[1:]))


def test_recessive_germs_agree_in_the_limit():
    # [f+^(d), f+^(d/2)](x) -> 0 at a fixed interior point
    V = bessel(0.6)
    vals = []
    for d in (1e-2, 1e-3, 1e-4):
        r1, _ = local_germs(V, LAM0, d, estimate_error=False)
        r2, _ = local_germs(V, LAM0, d / 2, estimate_error=False)
        u = integrate(V, LAM0, r1.state(), 0.5).end()
        v = integrate(V, LAM0, r2.state(), 0.5).end()
        vals.append(abs(wronskian(u, v)) / (abs(u.f) * abs(v.df) + abs(u.df) * abs(v.f)))
    assert vals[0] > vals[1] > vals[2]


def test_same_point_pair_wronskian_is_exact():
    for c in (-0.2, 0.0, 0.11, 0.5):
        s = math.sqrt(c + 0.25)
        rec, dom = local_germs(inverse_square(c), 3.0, 1e-6, estimate_error=False)
        assert wronskian(rec.state(), dom.state()) == pytest.approx(-2 * s, rel=1e-12)


def test_rejects_non_lcno():
    with pytest.raises(ClassificationError):
        local_germs(inverse_square(1.0), 1.0)
    with pytest.raises(ClassificationError):
        local_germs(inverse_square(-0.25), 1.0)


def test_delta0_limits():
    V = bessel(0.6)
    with pytest.raises(GermError):
        local_germs(V, LAM0, 0.5)
    with pytest.raises(GermError):
        local_germs(V, LAM0, -1e-6)
    with pytest.raises(GermError):
        local_germs(V, LAM0, 1e-2)  # error target 1e-6 not met
    assert default_delta0(V) == pytest.approx(1e-6)


def test_power_law_state_right_side():
    v, d = power_law_state(0.6, "recessive", 1e-3, "right")
    vl, dl = power_law_state(0.6, "recessive", 1e-3)
    assert v == vl and d == -dl
