"""Empirical bracketing of the best Hardy-Rellich constant.

The Rayleigh quotient of a profile is bounded below by ``(b/p)^p``; a
derivative-free search over a profile family gives an upper bracket and the
gap between the two.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Sequence

import numpy as np
from scipy.optimize import minimize as _scipy_minimize

from .fraclap import RadialFracLap
from .kernels import b_constant
from .params import FracParams, ParameterError
from .quad import DEFAULT_REL_TOL, integrate_tail
from .specfun import sphere_area
from .testfns import DomainBall, RadialProfile, bump, combo, weighted_lp_ball
from .verify import _needs_zero_split, radial_outer

__all__ = [
    "RayleighResult",
    "SearchSpec",
    "SearchResult",
    "rayleigh_quotient",
    "rayleigh_quotient_q",
    "minimize",
    "SEARCH_REL_TOL",
    "FINAL_REL_TOL",
    "DEFAULT_SEARCH_BUDGET",
]

SEARCH_REL_TOL = 1e-7
FINAL_REL_TOL = 1e-10
DEFAULT_SEARCH_BUDGET = 500
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass
class RayleighResult:
    value: float
    abs_err: float
    numerator: float
    denominator: float
    evals: int
    converged: bool


def rayleigh_quotient_q(
    params: FracParams,
    profile: RadialProfile,
    domain: DomainBall = DomainBall(1.0),
    rel_tol: float = DEFAULT_REL_TOL,
    mode: Literal["omega", "full"] = "omega",
) -> RayleighResult:
    """Quotient ``int |(-Delta)^s u|^p |x|^(2sp-theta-2s) / int |u|^p |x|^(-theta-2s)`` with its error.

    ``mode="omega"`` integrates the numerator over the ball, ``mode="full"``
    over all of space (the operator decays like ``|x|^(-N-2s)``).
    """
    params.require_bounded()
    if not params.p > 1.0:
        raise ParameterError("the quotient needs p > 1")
    if mode not in ("omega", "full"):
        raise ParameterError(f"unknown mode {mode!r}")
    if profile.is_zero:
        raise ParameterError("the quotient is undefined for the zero profile")
    domain.require_contains(profile)
    N, s, p = params.N, params.s, params.p
    w = params.rellich_weight
    den = weighted_lp_ball(profile, p, params.hardy_weight, domain, N, rel_tol)
    F = RadialFracLap(profile, N, s, 0.1 * rel_tol)

    def transform(rho, f):
        return np.abs(f) ** p

    def sensitivity(rho, f):
        return p * np.abs(f) ** (p - 1.0)

    R = domain.R_domain
    split = _needs_zero_split(p)
    num = radial_outer(F, transform, sensitivity, w, 0.0, R, rel_tol, profile.kinks, split_at_zeros=split)
    if mode == "full":
        X = max(10.0 * profile.support, R)
        if X > R:
            num = num + radial_outer(F, transform, sensitivity, w, R, X, rel_tol, split_at_zeros=split)
        decay = p * (N + 2.0 * s) - N + 1.0 + w
        tail = integrate_tail(lambda r: r ** (N - 1.0 - w) * np.abs(F(r)) ** p, X, decay, rel_tol)
        num = num + tail.scaled(sphere_area(N))
    value = num.value / den.value
    err = num.abs_err / den.value + abs(value) * den.abs_err / den.value
    return RayleighResult(
        value, err, num.value, den.value, num.evals + den.evals + F.evals, num.converged and den.converged and F.converged
    )


def rayleigh_quotient(
    params: FracParams,
    profile: RadialProfile,
    domain: DomainBall = DomainBall(1.0),
    rel_tol: float = DEFAULT_REL_TOL,
    mode: Literal["omega", "full"] = "omega",
) -> float:
    return rayleigh_quotient_q(params, profile, domain, rel_tol, mode).value


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SearchSpec:
    """Profile family, parameter box and search budget.

    ``bump_beta`` searches the exponent of ``bump(beta, R)``.  ``combo``
    searches coefficients ``c_2..c_k`` of ``bump(betas[0]) + sum c_i bump(betas[i])``;
    the leading coefficient is fixed to 1 because the quotient is scale-invariant.
    """

    family: Literal["bump_beta", "combo"] = "bump_beta"
    bounds: tuple = ((2.0, 8.0),)
    budget: int = DEFAULT_SEARCH_BUDGET
    tolerance: float = 1e-3
    R: float = 1.0
    betas: tuple = (2.0, 3.0, 4.0, 5.0, 6.0)

    def __post_init__(self):
        if self.family not in ("bump_beta", "combo"):
            raise ParameterError(f"unknown family {self.family!r}")
        if int(self.budget) < 1:
            raise ParameterError("search budget must be at least 1")
        object.__setattr__(self, "bounds", tuple((float(lo), float(hi)) for lo, hi in self.bounds))
        for lo, hi in self.bounds:
            if not lo <= hi:
                raise ParameterError(f"empty bound interval [{lo}, {hi}]")
        if self.family == "bump_beta":
            if len(self.bounds) != 1:
                raise ParameterError("bump_beta searches exactly one parameter")
            if self.bounds[0][0] < 2.0:
                raise ParameterError("beta must stay >= 2 for C^{1,1} profiles")
        else:
            k = len(self.bounds) + 1
            if not 2 <= k <= 5:
                raise ParameterError("combo searches between 1 and 4 free coefficients (k <= 5 terms)")
            if len(self.betas) < k:
                raise ParameterError(f"combo needs {k} basis exponents, got {len(self.betas)}")
            if min(self.betas[:k]) < 2.0:
                raise ParameterError("basis exponents must be >= 2")
        if not self.tolerance > 0.0:
            raise ParameterError("tolerance must be positive")

    @property
    def dimension(self) -> int:
        return len(self.bounds)

    def profile(self, x: Sequence[float]) -> RadialProfile:
        if self.family == "bump_beta":
            return bump(float(x[0]), self.R)
        k = self.dimension + 1
        return combo([1.0] + [float(v) for v in x], list(self.betas[:k]), self.R)

    def parameter_names(self) -> list[str]:
        if self.family == "bump_beta":
            return ["beta"]
        return [f"c{i + 2}" for i in range(self.dimension)]


@dataclass
class SearchResult:
    best_Q: float
    best_parameters: list
    trace: list
    evals: int
    lower_bound: float
    gap: float
    best_Q_abs_err: float
    parameter_names: list = field(default_factory=list)
    params: Optional[FracParams] = None

    def as_dict(self) -> dict:
        return {
            "name": "sharpness",
            "params": self.params.as_dict() if self.params else None,
            "best_Q": self.best_Q,
            "best_Q_abs_err": self.best_Q_abs_err,
            "best_parameters": dict(zip(self.parameter_names, self.best_parameters)),
            "lower_bound": self.lower_bound,
            "gap": self.gap,
            "evals": self.evals,
            "trace_monotone": all(a["best_Q"] >= b["best_Q"] for a, b in zip(self.trace, self.trace[1:])),
        }

    def trace_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["eval_index", *self.parameter_names, "Q", "best_Q"])
        for row in self.trace:
            writer.writerow(
                [row["eval_index"], *(format(v, ".17g") for v in row["x"]), format(row["Q"], ".17g"), format(row["best_Q"], ".17g")]
            )
        return buf.getvalue()


class _BudgetExhausted(Exception):
    pass


class _Objective:
    """Memoised, budgeted quotient evaluation that records the search trace."""

    def __init__(self, params, spec: SearchSpec, domain: DomainBall, rel_tol: float):
        self.params, self.spec, self.domain, self.rel_tol = params, spec, domain, rel_tol
        self.cache: dict[tuple, float] = {}
        self.trace: list[dict] = []
        self.best = math.inf
        self.best_x: Optional[tuple] = None

    def __call__(self, x) -> float:
        key = tuple(float(v) for v in np.atleast_1d(x))
        # outside the box (only possible through rounding) counts as infeasible
        key = tuple(min(max(v, lo), hi) for v, (lo, hi) in zip(key, self.spec.bounds))
        if key in self.cache:
            return self.cache[key]
        if len(self.cache) >= self.spec.budget:
            raise _BudgetExhausted
        profile = self.spec.profile(key)
        if profile.is_zero or not self.domain.contains(profile):
            q = math.inf
        else:
            try:
                q = rayleigh_quotient(self.params, profile, self.domain, self.rel_tol)
            except ParameterError:
                q = math.inf
        self.cache[key] = q
        if q < self.best:
            self.best, self.best_x = q, key
        self.trace.append({"eval_index": len(self.trace), "x": list(key), "Q": q, "best_Q": self.best})
        return q


def _golden_section(obj: _Objective, lo: float, hi: float, tol: float) -> None:
    # the endpoints are evaluated too, so a minimum on the boundary is found exactly
    obj((lo,))
    if hi == lo:
        return
    obj((hi,))
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = obj((c,)), obj((d,))
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = obj((c,))
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = obj((d,))


def _nelder_mead(obj: _Objective, spec: SearchSpec) -> None:
    lo = np.array([b[0] for b in spec.bounds])
    hi = np.array([b[1] for b in spec.bounds])
    x0 = 0.5 * (lo + hi)
    for _ in range(2):  # one restart from the best point
        remaining = spec.budget - len(obj.cache)
        if remaining <= 0:
            return
        _scipy_minimize(
            obj,
            x0,
            method="Nelder-Mead",
            bounds=list(zip(lo, hi)),
            options={"xatol": spec.tolerance, "fatol": 1e-12, "maxfev": remaining, "initial_simplex": _simplex(x0, lo, hi)},
        )
        x0 = np.array(obj.best_x) if obj.best_x is not None else x0


def _simplex(x0, lo, hi):
    n = len(x0)
    pts = [x0.copy()]
    for i in range(n):
        y = x0.copy()
        step = 0.25 * (hi[i] - lo[i]) if hi[i] > lo[i] else 0.0
        y[i] = y[i] + step if y[i] + step <= hi[i] else y[i] - step
        pts.append(y)
    return np.array(pts)


def minimize(
    params: FracParams,
    spec: SearchSpec = SearchSpec(),
    domain: DomainBall = DomainBall(1.0),
    *,
    search_tol: float = SEARCH_REL_TOL,
    final_tol: float = FINAL_REL_TOL,
) -> SearchResult:
    """Search the family for the smallest quotient and report the gap to ``(b/p)^p``.

    The search runs with the relaxed quadrature tolerance ``search_tol``;
    the best point is re-evaluated at ``final_tol``.  The trace lists every
    distinct candidate with the best-so-far value.
    """
    params.require_bounded()
    if not params.p > 1.0:
        raise ParameterError("the search needs p > 1")
    if spec.R > domain.R_domain:
        raise ParameterError(f"family support {spec.R} exceeds the domain radius {domain.R_domain}")
    obj = _Objective(params, spec, domain, search_tol)
    try:
        if spec.family == "bump_beta":
            lo, hi = spec.bounds[0]
            _golden_section(obj, lo, hi, spec.tolerance)
        else:
            _nelder_mead(obj, spec)
    except _BudgetExhausted:
        pass
    if obj.best_x is None or not math.isfinite(obj.best):
        raise ParameterError("no feasible candidate in the search box")
    final = rayleigh_quotient_q(params, spec.profile(obj.best_x), domain, final_tol)
    b = b_constant(params, final_tol).value
    bound = (b / params.p) ** params.p
    return SearchResult(
        best_Q=final.value,
        best_parameters=list(obj.best_x),
        trace=obj.trace,
        evals=len(obj.cache),
        lower_bound=bound,
        gap=final.value / bound if bound > 0.0 else math.inf,
        best_Q_abs_err=final.abs_err,
        parameter_names=spec.parameter_names(),
        params=params,
    )
