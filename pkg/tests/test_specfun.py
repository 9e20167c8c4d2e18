import math

import mpmath as mp
import pytest

from frachardy.params import FracParams, ParameterError
from frachardy.specfun import (
    b_limit_s1,
    c_ns,
    classical_rellich_constant,
    fs_closed_p2,
    gamma,
    gamma_ratio,
    herbst_constant,
    lambda_closed,
    log_gamma,
    relative_difference,
    s_one_table,
    sphere_area,
)

mp.mp.dps = 30


@pytest.mark.parametrize("x", [0.1, 0.5, 1.0, 1.5, 2.7, 7.3, 10.0, 23.5, 49.9, -0.5, -1.3, -7.6, -20.25])
def test_log_gamma_against_mpmath(x):
    val, sign = log_gamma(x)
    ref = mp.gamma(x)
    assert sign == (1 if ref > 0 else -1)
    assert abs(math.exp(val) * sign - float(ref)) <= 1e-12 * abs(float(ref))


def test_gamma_examples():
    assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)
    assert gamma(0.5) == pytest.approx(1.7724538509055159, rel=1e-13)
    assert gamma(-0.5) == pytest.approx(-3.5449077018110318, rel=1e-13)


@pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -17.0])
def test_log_gamma_poles(x):
    with pytest.raises(ParameterError):
        log_gamma(x)


def test_gamma_recurrence_grid():
    for k in range(1, 101):
        x = 0.1 * k
        assert abs(gamma(x + 1) - x * gamma(x)) / gamma(x + 1) <= 1e-12


def test_gamma_ratio_pole_in_denominator_is_zero():
    assert gamma_ratio([1.5], [0.0]) == 0.0


def test_sphere_area():
    assert sphere_area(1) == 2.0
    assert sphere_area(2) == pytest.approx(2 * math.pi, rel=1e-14)
    assert sphere_area(3) == pytest.approx(4 * math.pi, rel=1e-14)


def test_c_ns_examples():
    assert c_ns(1, 0.5) == pytest.approx(1 / math.pi, rel=1e-13)
    assert c_ns(2, 0.5) == pytest.approx(1 / (2 * math.pi), rel=1e-13)
    assert c_ns(3, 1e-9) < 1e-8
    with pytest.raises(ParameterError):
        c_ns(3, 1.0)


def test_c_ns_against_mpmath():
    for N in (1, 2, 3, 5):
        for s in (0.1, 0.25, 0.75, 0.95):
            ref = s * 4**s * mp.gamma((N + 2 * s) / 2) / (mp.pi ** (N / 2) * mp.gamma(1 - s))
            assert c_ns(N, s) == pytest.approx(float(ref), rel=1e-12)


def test_lambda_closed_examples():
    assert lambda_closed(3, 0.5, 1.0) == pytest.approx(2 / math.pi, rel=1e-13)
    assert lambda_closed(4, 0.3, 0.0) == 0.0
    assert lambda_closed(4, 0.3, 4 - 0.6) == 0.0
    with pytest.raises(ParameterError):
        lambda_closed(3, 0.5, 3.0)
    with pytest.raises(ParameterError):
        lambda_closed(3, 0.5, -1.0)


def test_lambda_closed_symmetry_and_sign():
    for N in (1, 2, 3, 5):
        for s in (0.25, 0.5, 0.75):
            if N <= 2 * s:
                continue
            for frac in (0.1, 0.3, 0.45):
                theta = frac * (N - 2 * s)
                a = lambda_closed(N, s, theta)
                b = lambda_closed(N, s, N - 2 * s - theta)
                assert a > 0
                assert a == pytest.approx(b, rel=1e-12)


def test_lambda_closed_against_mpmath_negative_theta():
    N, s, theta = 3, 0.6, -0.5
    ref = 4**s * mp.gamma((N - theta) / 2) * mp.gamma((2 * s + theta) / 2) / (
        mp.gamma((N - theta - 2 * s) / 2) * mp.gamma(theta / 2)
    )
    assert lambda_closed(N, s, theta) == pytest.approx(float(ref), rel=1e-12)


def test_herbst_examples():
    assert herbst_constant(3, 0.5, 2) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-12)
    assert herbst_constant(4, 0.75, 2) == pytest.approx(2**-0.75 * math.gamma(0.625) / math.gamma(1.375), rel=1e-12)
    assert herbst_constant(3, 1e-10, 3) == pytest.approx(1.0, abs=1e-8)
    with pytest.raises(ParameterError):
        herbst_constant(1, 0.6, 2)


def test_fs_closed_p2_against_mpmath():
    for N, s in [(1, 0.25), (1, 0.4), (3, 0.5), (2, 0.7)]:
        ref = (
            2 * mp.pi ** (N / 2) * mp.gamma((N + 2 * s) / 4) ** 2 * abs(mp.gamma(-s))
            / (mp.gamma((N - 2 * s) / 4) ** 2 * mp.gamma((N + 2 * s) / 2))
        )
        assert fs_closed_p2(N, s) == pytest.approx(float(ref), rel=1e-12)


def test_fs_closed_p2_blows_up_towards_one():
    vals = [fs_closed_p2(3, s) for s in (0.9, 0.99, 0.999)]
    assert vals[0] < vals[1] < vals[2]
    with pytest.raises(ParameterError):
        fs_closed_p2(1, 0.5)


def test_classical_rellich():
    assert classical_rellich_constant(5, 2, 0) == 2.25
    assert classical_rellich_constant(4, 2, 0) == 1.0
    assert classical_rellich_constant(6, 3, 4.0) == 0.0
    with pytest.raises(ParameterError):
        classical_rellich_constant(6, 3, 4.5)


def test_b_limit_s1():
    assert b_limit_s1(7, 0.0) == 0.0
    assert b_limit_s1(5, 1.0) == pytest.approx(2.0, rel=1e-14)
    with pytest.raises(ParameterError):
        b_limit_s1(3, 1.0)
    diffs = [abs(lambda_closed(6, s, 1.5) - b_limit_s1(6, 1.5)) for s in (0.9, 0.99, 0.999)]
    assert diffs[0] > diffs[1] > diffs[2]


def test_s_one_table_rate():
    rows = s_one_table(5, 1.0, [0.9, 0.95, 0.975, 0.9875])
    assert rows[0].ratio is None
    assert all(r.ratio >= 1.8 for r in rows[1:])


def test_relative_difference_floor():
    assert relative_difference(0.0, 0.0) == 0.0
    assert relative_difference(1.0, 2.0) == 0.5


def test_fracparams_validation():
    with pytest.raises(ParameterError):
        FracParams(0, 0.5)
    with pytest.raises(ParameterError):
        FracParams(2.5, 0.5)
    with pytest.raises(ParameterError):
        FracParams(3, 1.2)
    with pytest.raises(ParameterError):
        FracParams(3, 0.5, 0.0, 0.5)
    p = FracParams(3, 0.5, 0.5, 2)
    assert p.bounded_admissible and p.hardy_weight == 1.5 and p.rellich_weight == -0.5
    with pytest.raises(ParameterError):
        FracParams(3, 0.5, 3.0).require_bounded()
