import math

import mpmath as mp
import numpy as np
import pytest

from frachardy.kernels import b_constant, fs_constant, kernel, kernel_samples, phi_fs, psi, scaled_kernel
from frachardy.params import FracParams, ParameterError
from frachardy.specfun import fs_closed_p2

mp.mp.dps = 40


def kernel_oracle(N, sigma, r):
    """Hypergeometric closed form of the spherical average, in exact arithmetic on r."""
    r = mp.mpf(r)
    area = 2 * mp.pi ** (mp.mpf(N) / 2) / mp.gamma(mp.mpf(N) / 2)
    sigma = mp.mpf(sigma)
    return area * (1 - r * r) ** (-1 - sigma) * mp.hyp2f1(-sigma / 2, mp.mpf(N) / 2 - 1 - sigma / 2, mp.mpf(N) / 2, r * r)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 7])
@pytest.mark.parametrize("sigma", [0.2, 0.9, 1.5, 1.9])
def test_kernel_against_hypergeometric_form(N, sigma):
    for r in (1e-6, 0.05, 0.3, 0.5, 0.8, 0.95, 0.999):
        ref = float(kernel_oracle(N, sigma, r))
        assert float(kernel(N, sigma, r)[0]) == pytest.approx(ref, rel=1e-11)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_scaled_kernel_near_one_uses_exact_eps(N):
    sigma = 1.2
    for k in range(1, 9):
        eps = 10.0**-k
        ref = kernel_oracle(N, sigma, 1 - mp.mpf(eps)) * mp.mpf(eps) ** (1 + sigma)
        assert float(scaled_kernel(N, sigma, 1 - eps, eps)[0]) == pytest.approx(float(ref), rel=1e-11)


def test_psi_examples():
    assert psi(1, 0.25, 0.5) == pytest.approx(2 * (0.5**-1.5 + 1.5**-1.5), rel=1e-14)
    assert psi(1, 0.25, 0.5) == pytest.approx(6.7455164, rel=1e-7)
    assert psi(2, 0.3, 1e-9) == pytest.approx(4 * math.pi, rel=1e-7)


def test_psi_rejects_outside_unit_interval():
    for r in (0.0, 1.0, 1.5, -0.2):
        with pytest.raises(ParameterError):
            psi(3, 0.5, r)
    with pytest.raises(ParameterError):
        psi(3, 0.5, 1.0, extended=True)


@pytest.mark.parametrize("N,s", [(1, 0.3), (2, 0.5), (3, 0.5), (5, 0.8)])
def test_psi_inversion_homogeneity(N, s):
    rs = np.arange(1, 10) / 10
    lhs = psi(N, s, 1.0 / rs, extended=True) * rs ** (-(N + 2 * s))
    assert np.allclose(lhs, psi(N, s, rs), rtol=1e-9, atol=0)


def test_phi_examples():
    assert phi_fs(1, 0.25, 2, 0.5) == pytest.approx(0.5**-1.5 + 1.5**-1.5, rel=1e-14)
    assert phi_fs(3, 0.4, 2, 1e-9) == pytest.approx(4 * math.pi, rel=1e-7)
    rs = np.linspace(0.05, 0.95, 19)
    assert np.allclose(phi_fs(3, 0.35, 2, rs), psi(3, 0.35, rs) / 2, rtol=1e-14, atol=0)


def test_kernels_positive_and_scaled_bounded():
    for N in (1, 2, 3, 6):
        rs = np.linspace(0.01, 0.99, 50)
        assert np.all(psi(N, 0.6, rs) > 0) and np.all(phi_fs(N, 0.6, 1.5, rs) > 0)
        eps = 10.0 ** -np.arange(1, 7)
        vals = scaled_kernel(N, 1.2, 1 - eps, eps)
        assert np.all(np.isfinite(vals)) and vals.max() < 10 * vals.min()


def test_kernel_samples():
    out = kernel_samples("phi_fs", 2, 0.5, [0.2, 0.4], p=3)
    assert [o.kind for o in out] == ["phi_fs", "phi_fs"]
    assert out[1].value == pytest.approx(float(phi_fs(2, 0.5, 3, 0.4)))
    with pytest.raises(ParameterError):
        kernel_samples("other", 2, 0.5, [0.2])


def test_b_constant_spot_value():
    rep = b_constant(FracParams(3, 0.5, 1.0))
    assert rep.kind == "b_quadrature"
    assert rep.value == pytest.approx(2 / math.pi, rel=1e-8)
    assert rep.rel_diff <= 1e-8


def test_b_constant_theta_zero():
    rep = b_constant(FracParams(4, 0.3, 0.0))
    assert rep.value == 0.0 and rep.closed_form == 0.0


@pytest.mark.parametrize("N,s,theta", [(3, 0.5, -0.5), (2, 0.75, -1.2), (4, 0.3, 3.5), (1, 0.2, 0.9)])
def test_b_constant_beyond_bounded_range(N, s, theta):
    rep = b_constant(FracParams(N, s, theta))
    assert rep.rel_diff <= 1e-8


def test_b_constant_symmetry():
    for N, s, theta in [(3, 0.5, 0.3), (5, 0.75, 1.1), (2, 0.25, 0.2)]:
        a = b_constant(FracParams(N, s, theta))
        b = b_constant(FracParams(N, s, N - 2 * s - theta))
        assert abs(a.value - b.value) <= a.abs_err + b.abs_err + 1e-12 * abs(a.value)


def test_b_constant_rejects_inadmissible():
    with pytest.raises(ParameterError):
        b_constant(FracParams(3, 0.5, -1.5))
    with pytest.raises(ParameterError):
        b_constant(FracParams(3, 0.5, 3.0))


@pytest.mark.parametrize("N,s", [(1, 0.25), (1, 0.4), (3, 0.5), (2, 0.8)])
def test_fs_constant_dual_route(N, s):
    rep = fs_constant(N, s, 2)
    assert rep.closed_form == pytest.approx(fs_closed_p2(N, s))
    assert rep.rel_diff <= 1e-6


def test_fs_constant_general_p_against_mpmath():
    N, s, p = 1, 0.2, 3
    sig = p * s
    a = (N - sig) / p

    def integrand(r):
        return r ** (sig - 1) * abs(1 - r**a) ** p * ((1 - r) ** (-1 - sig) + (1 + r) ** (-1 - sig))

    ref = 2 * mp.quad(integrand, [0, 0.5, 1])
    assert fs_constant(N, s, p).value == pytest.approx(float(ref), rel=1e-9)


def test_fs_constant_rejects_large_ps():
    with pytest.raises(ParameterError):
        fs_constant(1, 0.6, 2)
