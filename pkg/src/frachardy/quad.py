"""Deterministic adaptive quadrature with error estimates.

Three entry points share one result type:

* :func:`integrate` -- globally adaptive Gauss-Kronrod (10/21 points) for
  integrands that are smooth between the supplied breakpoints.
* :func:`integrate_singular` -- double-exponential (tanh-sinh) rule for
  integrable algebraic endpoint singularities ``(x-a)^alpha (b-x)^beta``.
* :func:`integrate_tail` -- semi-infinite integrals with algebraic decay,
  truncated at a point where an analytic tail bound is below tolerance.

Integrands are called with numpy arrays and must be vectorised.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

__all__ = [
    "QuadResult",
    "integrate",
    "integrate_singular",
    "integrate_tail",
    "DEFAULT_REL_TOL",
    "DEFAULT_BUDGET",
]

DEFAULT_REL_TOL = 1e-10
DEFAULT_BUDGET = 1_000_000

_EPS = np.finfo(float).eps
_TINY = 1e-300


@dataclass
class QuadResult:
    value: float
    abs_err: float
    evals: int
    converged: bool

    def __add__(self, other: "QuadResult") -> "QuadResult":
        return QuadResult(
            self.value + other.value,
            self.abs_err + other.abs_err,
            self.evals + other.evals,
            self.converged and other.converged,
        )

    def scaled(self, factor: float) -> "QuadResult":
        return QuadResult(self.value * factor, self.abs_err * abs(factor), self.evals, self.converged)

    @staticmethod
    def zero() -> "QuadResult":
        return QuadResult(0.0, 0.0, 0, True)


def _tolerance(value: float, rel_tol: float, abs_tol: Optional[float]) -> float:
    floor = rel_tol if abs_tol is None else abs_tol
    return max(floor, rel_tol * abs(value))


# ---------------------------------------------------------------------------
# Gauss-Kronrod 10/21
# ---------------------------------------------------------------------------

_XGK = np.array([
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
])
_WGK = np.array([
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208980252881, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
])
_WG = np.array([
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
])
_NODES = np.concatenate([-_XGK[:-1], [0.0], _XGK[:-1][::-1]])
_KWEIGHTS = np.concatenate([_WGK[:-1], [_WGK[-1]], _WGK[:-1][::-1]])
_GWEIGHTS = np.zeros(21)
_GWEIGHTS[1:10:2] = _WG
_GWEIGHTS[11:20:2] = _WG[::-1]


def _gk_batch(f, lo: np.ndarray, hi: np.ndarray):
    """Apply GK21 on every interval [lo_i, hi_i] with one vectorised call."""
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    x = mid[:, None] + half[:, None] * _NODES[None, :]
    fx = np.asarray(f(x.ravel()), dtype=float).reshape(x.shape)
    k = half * (fx @ _KWEIGHTS)
    g = half * (fx @ _GWEIGHTS)
    resabs = np.abs(half) * (np.abs(fx) @ _KWEIGHTS)
    err = np.abs(k - g)
    # QUADPACK-style sharpening of the raw Kronrod-Gauss difference
    mean = 0.5 * k
    resasc = np.abs(half) * (np.abs(fx - (mean / np.where(half == 0, 1, half))[:, None]) @ _KWEIGHTS)
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(resasc > 0, np.minimum(1.0, (200.0 * err / np.where(resasc > 0, resasc, 1.0)) ** 1.5), 1.0)
    err = np.where(resasc > 0, resasc * scale, err)
    err = np.maximum(err, 50.0 * _EPS * resabs)
    return k, err, resabs


def integrate(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    abs_tol: Optional[float] = None,
    points: Sequence[float] = (),
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """Adaptive Gauss-Kronrod quadrature of ``f`` over ``[a, b]``.

    Converges when the summed error estimate is at most
    ``max(abs_tol, rel_tol * |value|)``; ``abs_tol`` defaults to ``rel_tol``.
    Intervals are bisected worst-first; ``points`` are interior breakpoints.
    """
    a, b = float(a), float(b)
    if not a < b:
        if a == b:
            return QuadResult.zero()
        raise ValueError(f"need a < b, got a={a}, b={b}")
    edges = np.unique(np.concatenate([[a, b], [p for p in points if a < p < b]]))
    lo, hi = edges[:-1], edges[1:]
    vals, errs, _ = _gk_batch(f, lo, hi)
    evals = 21 * len(lo)
    heap = [(-e, float(l), float(h), float(v)) for e, l, h, v in zip(errs, lo, hi, vals)]
    heapq.heapify(heap)
    total = float(np.sum(vals))
    err_total = float(np.sum(errs))
    converged = err_total <= _tolerance(total, rel_tol, abs_tol)
    while not converged and evals + 42 <= budget:
        tol = _tolerance(total, rel_tol, abs_tol)
        excess = err_total - tol
        # split the worst intervals until they account for the excess error
        chosen = []
        acc = 0.0
        while heap and (acc < excess or not chosen) and evals + 42 * (len(chosen) + 1) <= budget:
            item = heapq.heappop(heap)
            chosen.append(item)
            acc += -item[0]
        if not chosen:
            break
        los, his = [], []
        stuck = []
        for ne, l, h, v in chosen:
            m = 0.5 * (l + h)
            if not (l < m < h):
                stuck.append((ne, l, h, v))
                continue
            los += [l, m]
            his += [m, h]
        for item in stuck:
            heapq.heappush(heap, item)
        if not los:
            break
        v2, e2, _ = _gk_batch(f, np.array(los), np.array(his))
        evals += 21 * len(los)
        for ne, l, h, v in chosen:
            total -= v
            err_total += ne
        for i in range(len(los)):
            total += float(v2[i])
            err_total += float(e2[i])
            heapq.heappush(heap, (-float(e2[i]), los[i], his[i], float(v2[i])))
        # guard against drift in the running sums
        total = math.fsum(item[3] for item in heap)
        err_total = math.fsum(-item[0] for item in heap)
        converged = err_total <= _tolerance(total, rel_tol, abs_tol)
        if stuck and len(stuck) == len(chosen):
            break
    return QuadResult(total, err_total, evals, bool(converged))


# ---------------------------------------------------------------------------
# tanh-sinh
# ---------------------------------------------------------------------------

_HALF_PI = 0.5 * math.pi
_DE_MIN_LEVEL = 3
_DE_MAX_LEVEL = 12


def _de_cutoff(alpha: float, rel_tol: float, length: float, endpoint: float, exact: bool) -> float:
    """Smallest endpoint distance sampled for a side with exponent ``alpha``.

    The skipped piece contributes about d^(1+alpha)/(1+alpha) (times the local
    amplitude); this is kept a few decades below the tolerance.
    """
    target = 1e-3 * rel_tol * (1.0 + alpha)
    d = length * target ** (1.0 / (1.0 + alpha))
    d = max(d, length * 1e-300, _TINY)
    if endpoint != 0.0 and not exact:
        # abscissae closer than this round onto the endpoint itself
        d = max(d, 4.0 * math.ulp(endpoint))
    return min(d, 0.25 * length)


def _t_max(length: float, d: float) -> float:
    # side distance at parameter t is length / (1 + exp(pi sinh t))
    return math.asinh(math.log(length / d - 1.0) / math.pi)


def _de_nodes(ts: np.ndarray):
    """Distances (as fractions of the interval) and weights at parameters ts."""
    u = _HALF_PI * np.sinh(ts)
    # fraction from the left end: 1/(1+exp(-2u)); from the right: 1/(1+exp(2u))
    left = 1.0 / (1.0 + np.exp(-2.0 * u))
    right = 1.0 / (1.0 + np.exp(2.0 * u))
    w = _HALF_PI * np.cosh(ts) / (2.0 * np.cosh(u) ** 2)
    return left, right, w


def integrate_singular(
    f: Callable,
    a: float,
    b: float,
    left_exponent: float = 0.0,
    right_exponent: float = 0.0,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    abs_tol: Optional[float] = None,
    points: Sequence[float] = (),
    budget: int = DEFAULT_BUDGET,
    distances: bool = False,
) -> QuadResult:
    """Tanh-sinh quadrature for integrands with algebraic endpoint singularities.

    ``f(x)`` may behave like ``(x - a)**left_exponent`` near ``a`` and
    ``(b - x)**right_exponent`` near ``b``; both exponents must exceed -1.
    They fix how close to each endpoint the rule samples, and the neglected
    end pieces are bounded and added to ``abs_err``.

    With ``distances=True`` the integrand is called as ``f(x, x - a, b - x)``
    where both distances are exact, which keeps singular factors accurate
    at endpoints away from zero.

    Interior ``points`` split the interval; each piece is integrated
    separately, with the declared exponents applied at the outer ends only.
    """
    a, b = float(a), float(b)
    for name, e in (("left_exponent", left_exponent), ("right_exponent", right_exponent)):
        if not e > -1.0:
            raise ValueError(f"{name}={e} is not integrable (must exceed -1)")
    if not a < b:
        if a == b:
            return QuadResult.zero()
        raise ValueError(f"need a < b, got a={a}, b={b}")
    cuts = sorted({float(p) for p in points if a < p < b})
    if cuts:
        edges = [a] + cuts + [b]
        result = QuadResult.zero()
        n = len(edges) - 1
        for i in range(n):
            lo, hi = edges[i], edges[i + 1]
            la = left_exponent if i == 0 else 0.0
            ra = right_exponent if i == n - 1 else 0.0
            if distances:
                # shift distances so they stay measured from the outer endpoints
                def g(x, dl, dr, _lo=lo, _hi=hi):
                    return f(x, (_lo - a) + dl, (b - _hi) + dr)
            else:
                g = f
            # each piece gets a share of the absolute floor and half the relative
            # tolerance, so the pieces' tolerances add up to the combined one
            sub_abs = (rel_tol if abs_tol is None else abs_tol) / (2 * n)
            part = _tanh_sinh(g, lo, hi, la, ra, rel_tol, sub_abs, max(budget - result.evals, 0), distances, 0.5)
            result = result + part
        # a piece may miss its share while the total still meets the combined tolerance
        result.converged = result.abs_err <= _tolerance(result.value, rel_tol, abs_tol) * (1 + 1e-12)
        return result
    return _tanh_sinh(f, a, b, left_exponent, right_exponent, rel_tol, abs_tol, budget, distances)


def _tanh_sinh(f, a, b, la, ra, rel_tol, abs_tol, budget, distances, share=1.0) -> QuadResult:
    length = b - a
    d_left = _de_cutoff(la, rel_tol, length, a, distances)
    d_right = _de_cutoff(ra, rel_tol, length, b, distances)
    t_lo = -_t_max(length, d_left)
    t_hi = _t_max(length, d_right)

    def sample(ts):
        left, right, w = _de_nodes(ts)
        dl = length * left
        dr = length * right
        x = np.where(ts < 0, a + dl, b - dr)
        if distances:
            fx = np.asarray(f(x, dl, dr), dtype=float)
        else:
            fx = np.asarray(f(x), dtype=float)
        return fx * w * length, fx

    h = 1.0
    ts = np.arange(math.ceil(t_lo / h), math.floor(t_hi / h) + 1) * h
    wf, fx = sample(ts)
    evals = len(ts)
    raw = math.fsum(wf)
    absraw = float(np.sum(np.abs(wf)))
    estimate = h * raw
    err = math.inf
    converged = False
    level = 0
    all_t = [ts]
    all_f = [fx]
    while level < _DE_MAX_LEVEL:
        level += 1
        h *= 0.5
        k0 = math.ceil((t_lo / h - 1) / 2)
        k1 = math.floor((t_hi / h - 1) / 2)
        new_t = (2 * np.arange(k0, k1 + 1) + 1) * h
        if evals + len(new_t) > budget:
            break
        wf, fx = sample(new_t)
        evals += len(new_t)
        all_t.append(new_t)
        all_f.append(fx)
        raw += math.fsum(wf)
        absraw += float(np.sum(np.abs(wf)))
        new_estimate = h * raw
        err = abs(new_estimate - estimate)
        estimate = new_estimate
        if level >= _DE_MIN_LEVEL and err <= _tolerance(estimate, share * rel_tol, abs_tol):
            converged = True
            break
    if not np.isfinite(estimate):
        raise FloatingPointError("non-finite integrand value in tanh-sinh quadrature")
    # bound the neglected end pieces from the outermost samples
    ts_all = np.concatenate(all_t)
    fs_all = np.concatenate(all_f)
    tail = 0.0
    i_lo = int(np.argmin(ts_all))
    i_hi = int(np.argmax(ts_all))
    tail += abs(fs_all[i_lo]) * d_left / (1.0 + la)
    tail += abs(fs_all[i_hi]) * d_right / (1.0 + ra)
    roundoff = 50.0 * _EPS * h * absraw
    err = err + tail + roundoff
    if converged and err > _tolerance(estimate, share * rel_tol, abs_tol):
        converged = False
    return QuadResult(float(estimate), float(err), int(evals), converged)


def integrate_tail(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    decay_power: float,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    abs_tol: Optional[float] = None,
    budget: int = DEFAULT_BUDGET,
) -> QuadResult:
    """Integrate ``f`` over ``[a, inf)`` assuming ``|f(x)| <= C x**-decay_power``.

    The substitution ``x = a / q`` maps the tail onto ``(0, 1]`` where the
    integrand behaves like ``q**(decay_power - 2)``.  The truncation point
    ``X`` is where tanh-sinh stops sampling; ``C`` is estimated from the
    samples at the largest ``x`` and the bound ``C X^(1-p)/(p-1)`` is added to
    ``abs_err``.
    """
    if not decay_power > 1.0:
        raise ValueError(f"decay_power={decay_power} does not give a convergent tail (must exceed 1)")
    a = float(a)
    if not a > 0.0:
        raise ValueError("integrate_tail needs a > 0")
    samples: list[tuple[np.ndarray, np.ndarray]] = []

    def g(q):
        q = np.asarray(q, dtype=float)
        x = a / q
        fx = np.asarray(f(x), dtype=float)
        samples.append((x, fx))
        return fx * a / q**2

    res = integrate_singular(g, 0.0, 1.0, decay_power - 2.0, 0.0, rel_tol, abs_tol=abs_tol, budget=budget)
    xs = np.concatenate([s[0] for s in samples])
    fs = np.concatenate([s[1] for s in samples])
    order = np.argsort(xs)[::-1][:8]
    x_max = float(xs[order[0]])
    c_est = float(np.max(np.abs(fs[order]) * xs[order] ** decay_power))
    tail = c_est * x_max ** (1.0 - decay_power) / (decay_power - 1.0)
    err = res.abs_err + tail
    converged = res.converged and err <= _tolerance(res.value, rel_tol, abs_tol)
    return QuadResult(res.value, err, res.evals, converged)
