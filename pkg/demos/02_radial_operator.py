"""Fractional Laplacian of radial profiles through the one-dimensional reduction.

The bump ``(1 - |x|^2)_+^beta`` has a hypergeometric closed form inside the
ball, which makes it a sharp test of the reduced integral.  Outside the
support the operator is negative and decays like ``|x|^(-N-2s)``.
"""

# %%
import numpy as np
from scipy.special import gamma, hyp2f1

from frachardy import RadialFracLap, bump, psi
from frachardy.kernels import kernel


def bump_inside(N, s, beta, x):
    pref = 4**s * gamma(beta + 1) * gamma(N / 2 + s) / (gamma(beta + 1 - s) * gamma(N / 2))
    return pref * hyp2f1(N / 2 + s, s - beta, N / 2, x * x)


# %% Kernel against its hypergeometric form
N, s = 3, 0.5
r = np.array([0.1, 0.5, 0.9, 0.99])
sigma = 2 * s
area = 2 * np.pi ** (N / 2) / gamma(N / 2)
ref = area * (1 - r * r) ** (-1 - sigma) * hyp2f1(-sigma / 2, N / 2 - 1 - sigma / 2, N / 2, r * r)
print("kernel rel err:", np.abs(kernel(N, sigma, r) / ref - 1).max())
print("psi(r) = 2 K(r):", np.allclose(psi(N, s, r), 2 * kernel(N, sigma, r), rtol=1e-14))

# %% Inside the support: closed form vs quadrature
F = RadialFracLap(bump(2.0, 1.0), N, s)
for x in (0.0, 0.5, 0.9, 0.999):
    q = F.result(x)
    print(f"x={x:6.3f}  quad {q.value: .14f}  closed {bump_inside(N, s, 2.0, x): .14f}  est err {q.abs_err:.1e}")

# %% Outside: negative, with the expected power decay
for rho in (1.5, 3.0, 6.0, 12.0):
    v = F(rho)
    print(f"rho={rho:5.1f}  value {v: .6e}  rho^(N+2s) * value {v * rho ** (N + 2 * s): .8f}")
