import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from frachardy.params import ParameterError
from frachardy.testfns import (
    DomainBall,
    bump,
    combo,
    compose_U,
    format_profile,
    parse_profile,
    weighted_lp_ball,
)


def test_bump_examples():
    u = bump(2, 1)
    assert u.value(np.array([0.0]))[0] == 1.0
    assert u.value(np.array([1.0]))[0] == 0.0
    assert u.value(np.array([0.5]))[0] == 0.5625
    assert u.value(np.array([1.1]))[0] == 0.0
    assert u.d1(np.array([1.0 - 1e-12]))[0] == pytest.approx(0.0, abs=1e-10)
    assert u.support == 1.0 and u.kinks == (1.0,)


def test_bump_rejects_low_exponent():
    with pytest.raises(ParameterError):
        bump(1.5, 1.0)
    with pytest.raises(ParameterError):
        bump(2.0, -1.0)


def test_derivatives_match_finite_differences():
    u = combo([1.0, -0.4], [2.5, 4.0], 0.9)
    x = np.linspace(0.05, 0.85, 9)
    h = 1e-5
    fd1 = (u.value(x + h) - u.value(x - h)) / (2 * h)
    fd2 = (u.value(x + h) - 2 * u.value(x) + u.value(x - h)) / h**2
    assert np.allclose(u.d1(x), fd1, rtol=1e-7, atol=1e-9)
    assert np.allclose(u.d2(x), fd2, rtol=1e-4, atol=1e-5)


def test_diff_is_compensated():
    u = bump(3, 1)
    x = np.array([0.4])
    dy = np.array([1e-13])
    ref = -u.d1(x) * dy - 0.5 * u.d2(x) * dy**2
    assert u.diff(x, dy)[0] == pytest.approx(ref[0], rel=1e-9)


def test_dilation_and_scaling():
    u = bump(2.5, 0.6)
    v = u.dilated(2.0)
    x = np.linspace(0, 1.3, 14)
    assert np.allclose(v.value(x), u.value(x / 2))
    assert np.allclose(u.scaled(3.0).value(x), 3 * u.value(x))


def test_compose_U_examples():
    u = bump(2, 1)
    U = compose_U(u, 0.37, 2)
    x = np.linspace(0, 1.2, 25)
    assert np.allclose(U.value(x), u.value(x) ** 2, rtol=1e-14, atol=0)
    assert np.all(compose_U(u.scaled(0.0), 0.5, 3).value(x) == 0.0)
    one = bump(2, 1)
    U1 = compose_U(one, 100.0, 1)
    assert U1.value(np.array([0.0]))[0] == pytest.approx(4.99987500625e-3, rel=1e-9)
    with pytest.raises(ParameterError):
        compose_U(u, 0.0, 2)


def test_compose_U_monotone_in_amplitude():
    u = bump(2.5, 0.9)
    x = np.linspace(0, 1, 41)
    for p in (1.0, 1.5, 3.0):
        small = compose_U(u.scaled(0.5), 0.2, p).value(x)
        big = compose_U(u, 0.2, p).value(x)
        assert np.all(small <= big)
        assert np.all(small >= 0.0)


def test_compose_U_zero_iff_u_zero():
    u = bump(2, 0.5)
    U = compose_U(u, 0.3, 1.5)
    x = np.array([0.2, 0.49, 0.5, 0.7])
    assert np.array_equal(U.value(x) == 0.0, u.value(x) == 0.0)


def test_weighted_lp_ball_examples():
    r = weighted_lp_ball(bump(2, 1), 1.0, 0.0, DomainBall(1.0), 1)
    assert r.value == pytest.approx(16 / 15, rel=1e-12)
    r = weighted_lp_ball(bump(2, 1).scaled(0.0), 2.0, 0.5, DomainBall(1.0), 3)
    assert r.value == 0.0
    with pytest.raises(ParameterError, match="-1"):
        weighted_lp_ball(bump(2, 1), 2.0, 3.0, DomainBall(1.0), 3)


def test_weighted_lp_ball_against_closed_form():
    # int_{B_1} (1 - |x|^2)^4 |x|^-1 dx in R^3 = 4 pi int_0^1 rho (1 - rho^2)^4 = 4 pi / 10
    r = weighted_lp_ball(bump(2, 1), 2.0, 1.0, DomainBall(1.0), 3, 1e-10)
    assert r.value == pytest.approx(4 * np.pi / 10, rel=1e-10)
    assert abs(r.value - 4 * np.pi / 10) <= r.abs_err


@settings(max_examples=20, deadline=None)
@given(st.floats(0.1, 20.0), st.sampled_from([1.0, 1.5, 2.0, 3.0]))
def test_weighted_lp_ball_homogeneous(lam, p):
    u = bump(2.5, 0.8)
    a = weighted_lp_ball(u, p, 0.7, DomainBall(1.0), 2).value
    b = weighted_lp_ball(u.scaled(lam), p, 0.7, DomainBall(1.0), 2).value
    assert b == pytest.approx(lam**p * a, rel=1e-11)


def test_domain_ball():
    assert DomainBall(1.0).contains(bump(2, 0.8))
    with pytest.raises(ParameterError):
        DomainBall(0.5).require_contains(bump(2, 0.8))
    with pytest.raises(ParameterError):
        DomainBall(0.0)


def test_profile_grammar_round_trip():
    u = parse_profile("family=bump,beta=2.5,R=0.8")
    assert u.betas == (2.5,) and u.support == 0.8
    v = parse_profile("family=combo,coeffs=[1,-0.3],betas=[2,3],R=1")
    assert v.coefficients == (1.0, -0.3) and v.betas == (2.0, 3.0)
    assert parse_profile(format_profile(v)) == v
    w = parse_profile("family=bump,beta=2,R=1,amplitude=4")
    assert w.value(np.array([0.0]))[0] == 4.0


@pytest.mark.parametrize(
    "text", ["family=wave,beta=2", "family=bump,beta=abc", "family=combo,coeffs=[1]", "family=bump,beta=2,colour=red", "beta=1"]
)
def test_profile_grammar_errors(text):
    with pytest.raises(ParameterError):
        parse_profile(text)
