import mpmath as mp
import numpy as np
import pytest

from frachardy.fraclap import (
    LineFunction,
    RadialFracLap,
    VtFamily,
    fraclap_line,
    fraclap_line_q,
    fraclap_radial,
    fraclap_radial_q,
    fraclap_vt,
    fraclap_vt_q,
    limit_t_zero,
    squared_difference_radial,
)
from frachardy.params import FracParams, ParameterError
from frachardy.specfun import lambda_closed
from frachardy.testfns import bump, compose_U


def bump_closed_form(N, s, beta, x):
    """(-Delta)^s (1 - |x|^2)_+^beta inside the unit ball, as a hypergeometric function."""
    pref = 4**s * mp.gamma(beta + 1) * mp.gamma(N / 2 + s) / (mp.gamma(beta + 1 - s) * mp.gamma(N / 2))
    return float(pref * mp.hyp2f1(N / 2 + s, s - beta, N / 2, x * x))


@pytest.mark.parametrize("N", [1, 2, 3, 5])
@pytest.mark.parametrize("s", [0.25, 0.5, 0.75, 0.95])
@pytest.mark.parametrize("beta", [2, 2.5, 4])
def test_radial_against_closed_form(N, s, beta):
    F = RadialFracLap(bump(beta, 1), N, s)
    for x in (0.0, 0.3, 0.9, 0.999):
        q = F.result(x)
        ref = bump_closed_form(N, s, beta, x)
        assert q.converged
        assert abs(q.value - ref) <= 1e-9 * max(1.0, abs(ref))


def test_zero_profile():
    z = bump(2, 1).scaled(0.0)
    assert all(fraclap_radial(z, 3, 0.5, r) == 0.0 for r in (0.0, 0.4, 2.0))
    assert fraclap_line(z, 0.3, 0.2) == 0.0


def test_radial_matches_line_evaluator_in_one_dimension():
    u = bump(2, 1)
    for s in (0.25, 0.6, 0.9):
        for rho in (0.0, 0.3, 0.99, 1.0, 1.5):
            a = fraclap_radial_q(u, 1, s, rho)
            b = fraclap_line_q(u, s, rho)
            assert abs(a.value - b.value) <= a.abs_err + b.abs_err + 1e-12


def test_spec_cross_check_point():
    a = fraclap_radial_q(bump(2, 1), 1, 0.6, 0.3)
    b = fraclap_line_q(bump(2, 1), 0.6, 0.3)
    assert abs(a.value - b.value) <= a.abs_err + b.abs_err + 1e-12


def test_linearity():
    u1, u2 = bump(2, 1), bump(3.5, 0.7)
    both = u1.scaled(2.0) + u2.scaled(3.0)
    for rho in (0.0, 0.35, 0.7, 0.95, 1.4):
        lhs = fraclap_radial(both, 3, 0.4, rho)
        rhs = 2 * fraclap_radial(u1, 3, 0.4, rho) + 3 * fraclap_radial(u2, 3, 0.4, rho)
        assert lhs == pytest.approx(rhs, rel=1e-9, abs=1e-11)


@pytest.mark.parametrize("lam", [0.5, 2.0])
@pytest.mark.parametrize("N", [1, 3])
def test_dilation_covariance(lam, N):
    u = bump(2.5, 0.8)
    s = 0.45
    for rho in (0.0, 0.2, 0.6, 1.0):
        a = fraclap_radial(u.dilated(lam), N, s, rho)
        b = lam ** (-2 * s) * fraclap_radial(u, N, s, rho / lam)
        assert a == pytest.approx(b, rel=1e-7)


def test_negative_outside_support():
    u = bump(2, 0.8)
    for N in (1, 2, 3):
        for rho in (0.81, 1.0, 3.0, 40.0):
            assert fraclap_radial(u, N, 0.5, rho) < 0.0


def test_far_field_matches_folded_form():
    import frachardy.fraclap as fl

    u = compose_U(bump(2, 0.8), 0.1, 2)
    near = RadialFracLap(u, 3, 0.5)
    old = fl.FAR_FIELD_RATIO
    try:
        fl.FAR_FIELD_RATIO = 10.0
        folded = RadialFracLap(u, 3, 0.5)
        a, b = near.result(1.6), folded.result(1.6)
    finally:
        fl.FAR_FIELD_RATIO = old
    assert abs(a.value - b.value) <= a.abs_err + b.abs_err + 1e-15


def test_far_field_decay_rate():
    F = RadialFracLap(bump(2, 1), 3, 0.5)
    vals = [F(r) * r**4 for r in (1e3, 1e6, 1e12)]
    assert vals[1] == pytest.approx(vals[2], rel=1e-9)
    assert vals[0] == pytest.approx(vals[2], rel=1e-5)


def test_vt_theta_zero_is_zero():
    fam = VtFamily(FracParams(3, 0.5, 0.0), 0.3)
    assert fraclap_vt(fam, 0.7) == 0.0


def test_vt_rejects_bad_input():
    with pytest.raises(ParameterError):
        VtFamily(FracParams(3, 0.5, 1.0), 0.0)
    with pytest.raises(ParameterError):
        fraclap_vt(VtFamily(FracParams(3, 0.5, 1.0), 0.2), 0.0)
    with pytest.raises(ParameterError):
        VtFamily(FracParams(3, 0.5, -1.5), 0.2)


def test_vt_scaling():
    params = FracParams(3, 0.4, 1.3)
    lam = 2.5
    a = fraclap_vt(VtFamily(params, lam * 0.2), lam * 0.6)
    b = lam ** (-1.3 - 0.8) * fraclap_vt(VtFamily(params, 0.2), 0.6)
    assert a == pytest.approx(b, rel=1e-9)


def test_vt_against_line_evaluator():
    fam = VtFamily(FracParams(1, 0.4, 1.0), 0.5)
    a = fraclap_vt_q(fam, 0.7)
    b = fraclap_line_q(fam.profile, 0.4, 0.7)
    assert abs(a.value - b.value) <= a.abs_err + b.abs_err + 1e-12


def test_vt_negative_theta():
    # theta in (-2s, 0): v_t grows at infinity, the fold must still converge
    params = FracParams(3, 0.6, -0.5)
    fam = VtFamily(params, 1e-3)
    val = fraclap_vt(fam, 0.8)
    assert val == pytest.approx(fam.limit(0.8), rel=1e-3)


def test_line_odd_function():
    u = bump(2, 0.5)
    odd = LineFunction(
        value=lambda x: u.value(np.abs(x - 0.5)) - u.value(np.abs(x + 0.5)),
        support=1.0,
        kinks=(-1.0, 0.0, 1.0),
    )
    for x in (0.2, 0.45, 0.8):
        assert fraclap_line(odd, 0.35, -x) == pytest.approx(-fraclap_line(odd, 0.35, x), rel=1e-12, abs=1e-14)


def test_limit_t_zero_table():
    tab = limit_t_zero(FracParams(3, 0.5, 1.0), 0.7, [0.2, 0.1, 0.05, 0.025])
    assert tab["strictly_decreasing"]
    assert tab["limit"] == pytest.approx(lambda_closed(3, 0.5, 1.0) * 0.7**-2, rel=1e-14)
    flat = limit_t_zero(FracParams(3, 0.5, 0.0), 0.7, [0.2, 0.1])
    assert all(r.value == 0.0 and r.error == 0.0 for r in flat["rows"])


def test_limit_rescales_with_radius():
    p = FracParams(2, 0.3, 0.8)
    a = limit_t_zero(p, 0.5, [0.1])["limit"]
    b = limit_t_zero(p, 1.0, [0.1])["limit"]
    assert b == pytest.approx(a * 2 ** (-0.8 - 0.6), rel=1e-14)


def test_grouped_bracket_is_second_order():
    u = bump(3, 1)
    rho = 0.4
    for k in range(2, 7):
        eps = 10.0**-k
        r = 1 - eps
        d1 = u.diff(np.array([rho]), np.array([-rho * eps]))[0]
        d2 = u.diff(np.array([rho]), np.array([rho * eps / r]))[0]
        bracket = r**2 * d1 + r ** (2 * 0.5 - 1) * d2
        assert abs(bracket) <= 10 * eps**2


@pytest.mark.parametrize("N,s", [(1, 0.3), (3, 0.5), (2, 0.8)])
def test_product_rule_squared_difference(N, s):
    u = bump(2.5, 1)
    U = compose_U(u, 0.3, 2)
    Fu, FU = RadialFracLap(u, N, s), RadialFracLap(U, N, s)
    for rho in (0.0, 0.3, 0.9, 1.2):
        lhs = 2 * u.value(np.array([rho]))[0] * Fu(rho) - FU(rho)
        q = squared_difference_radial(u, N, s, rho)
        assert q.value > 0
        assert lhs == pytest.approx(q.value, rel=1e-9)
