"""Angular kernels of the polar reduction and the constants built from them.

The basic object is the spherical average

    K_sigma(r) = vol(S^{N-2}) * int_0^pi sin(a)^(N-2) (1 + r^2 - 2 r cos a)^(-(N+sigma)/2) da,

with ``K_sigma(r) = (1-r)^(-1-sigma) + (1+r)^(-1-sigma)`` when N = 1.  The
radial kernel :func:`psi` is ``2 K_{2s}`` and the Hardy kernel
:func:`phi_fs` is ``K_{ps}``.

Near ``r = 1`` the kernel blows up like ``(1-r)^(-1-sigma)``; every routine
here works with the scaled kernel ``|1-r|^(1+sigma) K_sigma(r)``, which is
bounded, and takes ``eps = |1 - r|`` as an exact input so that callers
integrating in ``eps`` never form ``1 - r`` themselves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .params import FracParams, ParameterError
from .quad import DEFAULT_REL_TOL, QuadResult, integrate_singular
from .specfun import ConstantReport, c_ns, fs_closed_p2, lambda_closed, relative_difference, sphere_area

__all__ = [
    "FracParams",
    "KernelSample",
    "scaled_kernel",
    "kernel",
    "psi",
    "phi_fs",
    "kernel_samples",
    "b_integral",
    "b_constant",
    "fs_constant",
    "one_minus_power",
]

# Gauss-Legendre rule used on every cell of the angular mesh
_GL_NODES, _GL_WEIGHTS = np.polynomial.legendre.leggauss(20)


@dataclass(frozen=True)
class KernelSample:
    r: float
    value: float
    kind: Literal["psi", "phi_fs"]


def one_minus_power(a: float, eps: np.ndarray) -> np.ndarray:
    """``1 - (1 - eps)**a`` without cancellation for small ``eps``."""
    return -np.expm1(a * np.log1p(-eps))


def _angular_cells(w: float) -> np.ndarray:
    """Cell edges 0, w, 2w, 4w, ... capped at pi."""
    edges = [0.0]
    e = w
    while e < math.pi:
        edges.append(e)
        e *= 2.0
    edges.append(math.pi)
    return np.array(edges)


def _angular_integral(N: int, sigma: float, r: np.ndarray, eps: np.ndarray, w: float) -> np.ndarray:
    """eps^(1+sigma) * int_0^pi sin^(N-2) (eps^2 + 4 r sin^2(a/2))^(-(N+sigma)/2) da for one mesh."""
    edges = _angular_cells(w)
    lo, hi = edges[:-1], edges[1:]
    half = 0.5 * (hi - lo)
    a = (0.5 * (hi + lo))[:, None] + half[:, None] * _GL_NODES[None, :]
    wts = (half[:, None] * _GL_WEIGHTS[None, :]).ravel()
    a = a.ravel()
    sin_half_sq = np.sin(0.5 * a) ** 2
    dist = eps[:, None] ** 2 + 4.0 * r[:, None] * sin_half_sq[None, :]
    log_val = (1.0 + sigma) * np.log(eps)[:, None] - 0.5 * (N + sigma) * np.log(dist)
    if N > 2:
        # in log form: eps^(1-N) alone overflows for tiny eps before the sine factor tames it
        log_val = log_val + (N - 2) * np.log(np.sin(a))[None, :]
    return np.exp(log_val) @ wts


def scaled_kernel(N: int, sigma: float, r, eps=None) -> np.ndarray:
    """``|1-r|^(1+sigma) * K_sigma(r)`` for ``r >= 0``, ``r != 1``.

    Parameters
    ----------
    N : int
        Dimension.
    sigma : float
        Kernel order, positive.
    r : array_like
        Radii (``r > 1`` is allowed).
    eps : array_like, optional
        Exact value of ``|1 - r|``; computed from ``r`` when omitted.
    """
    r = np.atleast_1d(np.asarray(r, dtype=float))
    eps = np.abs(1.0 - r) if eps is None else np.broadcast_to(np.asarray(eps, dtype=float), r.shape).copy()
    if np.any(eps <= 0.0) or np.any(r < 0.0):
        raise ParameterError("kernel needs r >= 0 and r != 1")
    if N == 1:
        return 1.0 + (eps / (1.0 + r)) ** (1.0 + sigma)
    area = sphere_area(N - 1)
    with np.errstate(divide="ignore"):
        widths = np.where(r > 0.0, eps / np.sqrt(np.where(r > 0.0, r, 1.0)), math.pi)
    widths = np.minimum(widths, math.pi)
    # group radii whose meshes have the same number of cells
    ncell = np.ceil(np.log2(math.pi / widths)).astype(int)
    out = np.empty_like(r)
    for m in np.unique(ncell):
        idx = np.nonzero(ncell == m)[0]
        # a common mesh for the group is fine: scale by the smallest width
        w = float(np.min(widths[idx]))
        out[idx] = _angular_integral(N, sigma, r[idx], eps[idx], w)
    return area * out


def kernel(N: int, sigma: float, r, eps=None) -> np.ndarray:
    """Spherical average ``K_sigma(r)`` (unscaled)."""
    r = np.atleast_1d(np.asarray(r, dtype=float))
    eps = np.abs(1.0 - r) if eps is None else np.asarray(eps, dtype=float)
    return scaled_kernel(N, sigma, r, eps) * eps ** (-1.0 - sigma)


def _check_unit_interval(r, extended: bool):
    arr = np.asarray(r, dtype=float)
    if extended:
        if np.any(arr <= 0.0) or np.any(arr == 1.0):
            raise ParameterError("r must be positive and different from 1")
    elif np.any(arr <= 0.0) or np.any(arr >= 1.0):
        raise ParameterError("r must lie in (0, 1)")


def _scalar_or_array(value: np.ndarray, like):
    return float(value[0]) if np.ndim(like) == 0 else value


def psi(N: int, s: float, r, *, extended: bool = False):
    """Radial kernel ``2 K_{2s}(r)`` of the fractional Laplacian.

    With ``extended=True`` radii above 1 are accepted as well, which is
    how the inversion symmetry ``psi(1/r) = r^(N+2s) psi(r)`` is checked.
    """
    _check_unit_interval(r, extended)
    if not 0.0 < s < 1.0:
        raise ParameterError(f"s must lie in (0, 1), got {s!r}")
    return _scalar_or_array(2.0 * kernel(N, 2.0 * s, r), r)


def phi_fs(N: int, s: float, p: float, r, *, extended: bool = False):
    """Kernel ``K_{ps}(r)`` of the sharp fractional Hardy constant."""
    _check_unit_interval(r, extended)
    if not (p >= 1.0 and s > 0.0):
        raise ParameterError(f"need p >= 1 and s > 0; got p={p}, s={s}")
    return _scalar_or_array(kernel(N, p * s, r), r)


def kernel_samples(kind: str, N: int, s: float, rs, p: float = 2.0) -> list[KernelSample]:
    if kind == "psi":
        vals = np.atleast_1d(psi(N, s, np.asarray(rs, dtype=float)))
    elif kind == "phi_fs":
        vals = np.atleast_1d(phi_fs(N, s, p, np.asarray(rs, dtype=float)))
    else:
        raise ParameterError(f"unknown kernel kind {kind!r}")
    return [KernelSample(float(r), float(v), kind) for r, v in zip(np.atleast_1d(rs), vals)]


def _split_unit_integral(left, right, left_exp: float, right_exp: float, rel_tol: float) -> QuadResult:
    """int_0^1 g(r) dr as int_0^1/2 left(r) dr + int_0^1/2 right(eps) deps with eps = 1 - r."""
    tol = 0.5 * rel_tol
    lo = integrate_singular(left, 0.0, 0.5, left_exp, 0.0, tol)
    hi = integrate_singular(right, 0.0, 0.5, right_exp, 0.0, tol)
    return lo + hi


def b_integral(N: int, s: float, theta: float, rel_tol: float = DEFAULT_REL_TOL) -> QuadResult:
    """Quadrature for the Hardy-weight constant.

    Evaluates ``c_{N,s} int_0^1 r^(2s-1) (1-r^theta)(1-r^(N-2s-theta)) K_{2s}(r) dr``,
    which equals ``lambda_closed(N, s, theta)``.
    """
    sigma = 2.0 * s
    a1, a2 = theta, N - sigma - theta
    c = c_ns(N, s)

    def left(r):
        # (1 - r^a) changes sign with a; r^(2s-1) is kept separate
        f1 = -np.expm1(a1 * np.log(r))
        f2 = -np.expm1(a2 * np.log(r))
        return r ** (sigma - 1.0) * f1 * f2 * kernel(N, sigma, r)

    def right(eps):
        r = 1.0 - eps
        f1 = one_minus_power(a1, eps)
        f2 = one_minus_power(a2, eps)
        # f1 f2 ~ eps^2 and the scaled kernel absorbs eps^(-1-sigma)
        return (
            np.exp((sigma - 1.0) * np.log1p(-eps))
            * (f1 / eps)
            * (f2 / eps)
            * eps ** (1.0 - sigma)
            * scaled_kernel(N, sigma, r, eps)
        )

    left_exp = sigma - 1.0 + min(a1, 0.0) + min(a2, 0.0)
    res = _split_unit_integral(left, right, left_exp, 1.0 - sigma, rel_tol)
    return res.scaled(c)


def b_constant(params: FracParams, rel_tol: float = DEFAULT_REL_TOL) -> ConstantReport:
    """Hardy-weight constant by quadrature, compared with its gamma-ratio form.

    Accepts ``theta > -2s`` and ``theta < N``; the bounded-domain
    inequalities additionally need ``theta >= 0`` and ``N > theta + 2s``.
    """
    N, s, theta = params.N, params.s, params.theta
    params.require_power()
    if not theta < N:
        raise ParameterError(f"need theta < N for an integrable weight; got N={N}, theta={theta}")
    closed = lambda_closed(N, s, theta)
    if theta == 0.0:
        return ConstantReport("b_quadrature", params, 0.0, closed, 0.0)
    res = b_integral(N, s, theta, rel_tol)
    return ConstantReport(
        "b_quadrature",
        params,
        res.value,
        closed,
        relative_difference(res.value, closed),
        res.abs_err,
        res.evals,
        res.converged,
    )


def fs_constant(N: int, s: float, p: float, rel_tol: float = DEFAULT_REL_TOL) -> ConstantReport:
    """Sharp fractional Hardy constant ``2 int_0^1 r^(ps-1) |1-r^((N-ps)/p)|^p K_{ps}(r) dr``."""
    if not p > 1.0:
        raise ParameterError(f"need p > 1, got {p}")
    if not 0.0 < s < 1.0:
        raise ParameterError(f"s must lie in (0, 1), got {s!r}")
    if not N > p * s:
        raise ParameterError(f"need N > p s; got N={N}, p={p}, s={s}")
    sigma = p * s
    a = (N - sigma) / p

    def left(r):
        return r ** (sigma - 1.0) * np.abs(np.expm1(a * np.log(r))) ** p * kernel(N, sigma, r)

    def right(eps):
        r = 1.0 - eps
        f = np.abs(one_minus_power(a, eps) / eps) ** p
        return np.exp((sigma - 1.0) * np.log1p(-eps)) * f * eps ** (p - 1.0 - sigma) * scaled_kernel(N, sigma, r, eps)

    res = _split_unit_integral(left, right, sigma - 1.0, p - 1.0 - sigma, rel_tol).scaled(2.0)
    params = FracParams(N, s, 0.0, p)
    closed = fs_closed_p2(N, s) if p == 2.0 else None
    rel = relative_difference(res.value, closed) if closed is not None else None
    return ConstantReport("frank_seiringer", params, res.value, closed, rel, res.abs_err, res.evals, res.converged)
