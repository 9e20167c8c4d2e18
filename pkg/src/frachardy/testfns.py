"""Radial test functions, the smoothed composite and weighted ball integrals.

Every profile exposes the same small interface used by the operator code:

``value(rho)``
    pointwise values (vectorised).
``diff(x, dy)``
    ``u(x) - u(x + dy)`` computed without subtracting two nearly equal
    numbers, which the principal-value integrands need.
``d1(rho)``, ``d2(rho)``
    first and second radial derivatives.
``support``, ``kinks``
    support radius (``inf`` when unbounded) and radii where the profile is
    less smooth, used as quadrature breakpoints.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .params import ParameterError
from .quad import DEFAULT_REL_TOL, QuadResult, integrate_singular
from .specfun import sphere_area

__all__ = [
    "RadialProfile",
    "SmoothedComposite",
    "VtProfile",
    "DomainBall",
    "bump",
    "combo",
    "compose_U",
    "weighted_lp_ball",
    "parse_profile",
    "format_profile",
]


def _power_diff(A: np.ndarray, B: np.ndarray, delta: np.ndarray, beta: float) -> np.ndarray:
    """``A_+^beta - B_+^beta`` where ``B = A - delta`` and ``delta`` is exact."""
    out = np.zeros(np.broadcast(A, B).shape)
    Ap = np.maximum(A, 0.0)
    Bp = np.maximum(B, 0.0)
    both = (A > 0.0) & (B > 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(both, delta / np.where(A > 0.0, A, 1.0), 0.0)
        small = both & (np.abs(ratio) < 0.5)
        comp = -(Ap**beta) * np.expm1(beta * np.log1p(-ratio))
    out = np.where(small, comp, Ap**beta - Bp**beta)
    return out


@dataclass(frozen=True)
class RadialProfile:
    """Finite sum ``sum_i c_i (1 - (rho/R_i)^2)_+^beta_i``.

    Every term is C^{1,1} because ``beta_i >= 2``.
    """

    family: str
    betas: tuple
    coefficients: tuple
    radii: tuple

    def __post_init__(self):
        if not (len(self.betas) == len(self.coefficients) == len(self.radii)) or not self.betas:
            raise ParameterError("betas, coefficients and radii must be non-empty and of equal length")
        for b in self.betas:
            if not b >= 2.0:
                raise ParameterError(f"bump exponent beta={b} < 2 is not C^(1,1)")
        for R in self.radii:
            if not (R > 0.0 and math.isfinite(R)):
                raise ParameterError(f"support radius must be positive, got {R}")
        for c in self.coefficients:
            if not math.isfinite(c):
                raise ParameterError("coefficients must be finite")

    @property
    def support(self) -> float:
        return max(self.radii)

    @property
    def kinks(self) -> tuple:
        return tuple(sorted(set(self.radii)))

    @property
    def features(self) -> tuple:
        return ()

    @property
    def is_zero(self) -> bool:
        return all(c == 0.0 for c in self.coefficients)

    @property
    def second_derivative_bound(self) -> float:
        # |u''| <= sum |c| (2 beta + 4 beta (beta - 1)) / R^2 on the support
        return sum(abs(c) * (2 * b + 4 * b * (b - 1)) / R**2 for c, b, R in self._terms())

    def _terms(self):
        return zip(self.coefficients, self.betas, self.radii)

    def value(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape)
        for c, b, R in self._terms():
            q = np.maximum(1.0 - (rho / R) ** 2, 0.0)
            out = out + c * q**b
        return out

    __call__ = value

    def diff(self, x, dy):
        """``u(x) - u(x + dy)`` for radii ``x`` and exact offsets ``dy``."""
        x = np.asarray(x, dtype=float)
        dy = np.asarray(dy, dtype=float)
        out = np.zeros(np.broadcast(x, dy).shape)
        with np.errstate(over="ignore"):
            for c, b, R in self._terms():
                A = 1.0 - (x / R) ** 2
                delta = dy * (2.0 * x + dy) / R**2
                out = out + c * _power_diff(A, A - delta, delta, b)
        return out

    def d1(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape)
        for c, b, R in self._terms():
            q = np.maximum(1.0 - (rho / R) ** 2, 0.0)
            out = out + c * b * q ** (b - 1.0) * (-2.0 * rho / R**2)
        return out

    def d2(self, rho):
        rho = np.asarray(rho, dtype=float)
        out = np.zeros(rho.shape)
        for c, b, R in self._terms():
            q = np.maximum(1.0 - (rho / R) ** 2, 0.0)
            inside = q > 0.0
            with np.errstate(divide="ignore", invalid="ignore"):
                t2 = np.where(inside, b * (b - 1.0) * q ** (b - 2.0) * 4.0 * rho**2 / R**4, 0.0)
            t1 = -b * q ** (b - 1.0) * 2.0 / R**2
            out = out + c * np.where(inside, t1 + t2, 0.0)
        return out

    def scaled(self, amplitude: float) -> "RadialProfile":
        return RadialProfile(self.family, self.betas, tuple(amplitude * c for c in self.coefficients), self.radii)

    def dilated(self, lam: float) -> "RadialProfile":
        """The profile ``rho -> u(rho / lam)``."""
        return RadialProfile(self.family, self.betas, self.coefficients, tuple(lam * R for R in self.radii))

    def __add__(self, other: "RadialProfile") -> "RadialProfile":
        return RadialProfile(
            "linear_combination",
            self.betas + other.betas,
            self.coefficients + other.coefficients,
            self.radii + other.radii,
        )

    def describe(self) -> dict:
        return {
            "family": self.family,
            "betas": list(self.betas),
            "coefficients": list(self.coefficients),
            "radii": list(self.radii),
        }


def bump(beta: float, R: float = 1.0) -> RadialProfile:
    """``(1 - (rho/R)^2)_+^beta``; ``beta < 2`` raises :class:`ParameterError`."""
    return RadialProfile("bump", (float(beta),), (1.0,), (float(R),))


def combo(coefficients: Sequence[float], betas: Sequence[float], R: float = 1.0) -> RadialProfile:
    if len(coefficients) != len(betas):
        raise ParameterError("coeffs and betas must have the same length")
    return RadialProfile(
        "linear_combination",
        tuple(float(b) for b in betas),
        tuple(float(c) for c in coefficients),
        tuple(float(R) for _ in betas),
    )


@dataclass(frozen=True)
class SmoothedComposite:
    """``U = (u^2 + t^2)^(p/2) - t^p`` built on a radial profile."""

    base: RadialProfile
    t: float
    p: float

    def __post_init__(self):
        if not self.t > 0.0:
            raise ParameterError(f"t must be positive, got {self.t}")
        if not self.p >= 1.0:
            raise ParameterError(f"p must be >= 1, got {self.p}")

    @property
    def support(self) -> float:
        return self.base.support

    @property
    def kinks(self) -> tuple:
        return self.base.kinks

    @property
    def features(self) -> tuple:
        return self.base.features

    @property
    def is_zero(self) -> bool:
        return self.base.is_zero

    def phi(self, v):
        """Outer function ``(v^2 + t^2)^(p/2) - t^p``, evaluated stably."""
        v = np.asarray(v, dtype=float)
        if self.p == 2.0:
            return v * v
        return self.t**self.p * np.expm1(0.5 * self.p * np.log1p((v / self.t) ** 2))

    def phi_prime(self, v):
        v = np.asarray(v, dtype=float)
        return self.p * v * (v * v + self.t**2) ** (0.5 * self.p - 1.0)

    def phi_second(self, v):
        v = np.asarray(v, dtype=float)
        q = v * v + self.t**2
        return self.p * q ** (0.5 * self.p - 1.0) + self.p * (self.p - 2.0) * v * v * q ** (0.5 * self.p - 2.0)

    def value(self, rho):
        return self.phi(self.base.value(rho))

    __call__ = value

    def diff(self, x, dy):
        a = self.base.value(x)
        du = self.base.diff(x, dy)
        b = a - du
        if self.p == 2.0:
            return du * (a + b)
        # phi(a) - phi(b) = (b^2+t^2)^(p/2) expm1((p/2) log1p((a^2-b^2)/(b^2+t^2)))
        q = b * b + self.t**2
        return q ** (0.5 * self.p) * np.expm1(0.5 * self.p * np.log1p(du * (a + b) / q))

    def d1(self, rho):
        return self.phi_prime(self.base.value(rho)) * self.base.d1(rho)

    def d2(self, rho):
        u = self.base.value(rho)
        du = self.base.d1(rho)
        return self.phi_second(u) * du * du + self.phi_prime(u) * self.base.d2(rho)


def compose_U(base: RadialProfile, t: float, p: float) -> SmoothedComposite:
    return SmoothedComposite(base, float(t), float(p))


@dataclass(frozen=True)
class VtProfile:
    """The radial function ``(t^2 + rho^2)^(-theta/2)``."""

    theta: float
    t: float

    def __post_init__(self):
        if not self.t > 0.0:
            raise ParameterError(f"t must be positive, got {self.t}")

    @property
    def support(self) -> float:
        return math.inf

    @property
    def kinks(self) -> tuple:
        return ()

    @property
    def features(self) -> tuple:
        return (self.t,)

    @property
    def is_zero(self) -> bool:
        return self.theta == 0.0

    def value(self, rho):
        rho = np.asarray(rho, dtype=float)
        return (self.t**2 + rho**2) ** (-0.5 * self.theta)

    __call__ = value

    def log_value(self, rho):
        rho = np.asarray(rho, dtype=float)
        return -0.5 * self.theta * np.log(self.t**2 + rho**2)

    def diff(self, x, dy):
        x = np.asarray(x, dtype=float)
        dy = np.asarray(dy, dtype=float)
        base = self.t**2 + x**2
        delta = dy * (2.0 * x + dy)
        return -(base ** (-0.5 * self.theta)) * np.expm1(-0.5 * self.theta * np.log1p(delta / base))

    def d1(self, rho):
        rho = np.asarray(rho, dtype=float)
        return -self.theta * rho * (self.t**2 + rho**2) ** (-0.5 * self.theta - 1.0)

    def d2(self, rho):
        rho = np.asarray(rho, dtype=float)
        q = self.t**2 + rho**2
        return -self.theta * q ** (-0.5 * self.theta - 1.0) + self.theta * (self.theta + 2.0) * rho**2 * q ** (
            -0.5 * self.theta - 2.0
        )


@dataclass(frozen=True)
class DomainBall:
    """Ball of radius ``R_domain`` centred at the origin."""

    R_domain: float = 1.0

    def __post_init__(self):
        if not (self.R_domain > 0.0 and math.isfinite(self.R_domain)):
            raise ParameterError(f"domain radius must be positive and finite, got {self.R_domain}")

    def contains(self, profile) -> bool:
        return profile.support <= self.R_domain

    def require_contains(self, profile) -> "DomainBall":
        if not self.contains(profile):
            raise ParameterError(
                f"profile support {profile.support} exceeds the domain radius {self.R_domain}"
            )
        return self


def weighted_lp_ball(
    g: Callable,
    p: float,
    w: float,
    domain: DomainBall,
    N: int,
    rel_tol: float = DEFAULT_REL_TOL,
    *,
    origin_order: float = 0.0,
    points: Sequence[float] = (),
) -> QuadResult:
    """``int_{|x| < R} |g(|x|)|^p |x|^(-w) dx`` by radial reduction.

    Parameters
    ----------
    g : callable
        Radial function, vectorised.  A profile's ``kinks`` are used as
        breakpoints automatically.
    origin_order : float
        ``g(rho) = O(rho^origin_order)`` at the origin; only used for the
        integrability check and the declared endpoint exponent.
    """
    if not p >= 1.0:
        raise ParameterError(f"p must be >= 1, got {p}")
    exponent = N - 1.0 - w + p * origin_order
    g0 = float(np.abs(np.asarray(g(np.array([0.0])), dtype=float)[0])) if exponent <= -1.0 else 1.0
    if exponent <= -1.0 and g0 != 0.0:
        raise ParameterError(
            f"weight |x|^-{w} is not integrable at the origin in dimension {N}: radial exponent {exponent} <= -1"
        )
    if exponent <= -1.0:
        # g vanishes at 0 at an unknown rate; only the zero function is accepted here
        raise ParameterError(f"radial exponent {exponent} <= -1; pass origin_order for functions vanishing at 0")
    R = domain.R_domain
    cuts = [k for k in tuple(getattr(g, "kinks", ())) + tuple(points) if 0.0 < k < R]

    def integrand(rho):
        return rho ** (N - 1.0 - w) * np.abs(np.asarray(g(rho), dtype=float)) ** p

    res = integrate_singular(integrand, 0.0, R, exponent, 0.0, rel_tol, points=cuts)
    return res.scaled(sphere_area(N))


# ---------------------------------------------------------------------------
# profile grammar: family=bump,beta=2.5,R=0.8 / family=combo,coeffs=[1,-0.3],betas=[2,3],R=1
# ---------------------------------------------------------------------------

_ITEM = re.compile(r"\s*([A-Za-z_]+)\s*=\s*(\[[^\]]*\]|[^,]*)\s*(?:,|$)")


def _parse_list(text: str) -> list[float]:
    inner = text.strip()
    if not (inner.startswith("[") and inner.endswith("]")):
        raise ParameterError(f"expected a bracketed list, got {text!r}")
    body = inner[1:-1].strip()
    if not body:
        return []
    try:
        return [float(x) for x in body.split(",")]
    except ValueError as exc:
        raise ParameterError(f"bad number in list {text!r}") from exc


def parse_profile(spec: str) -> RadialProfile:
    """Parse ``family=bump,beta=2.5,R=0.8`` or ``family=combo,coeffs=[..],betas=[..],R=1``."""
    fields: dict[str, str] = {}
    pos = 0
    spec = spec.strip()
    while pos < len(spec):
        m = _ITEM.match(spec, pos)
        if not m or m.end() == pos:
            raise ParameterError(f"cannot parse profile specification {spec!r}")
        fields[m.group(1)] = m.group(2).strip()
        pos = m.end()
    family = fields.pop("family", "bump")
    try:
        R = float(fields.pop("R", "1"))
        amp = float(fields.pop("amplitude", "1"))
    except ValueError as exc:
        raise ParameterError(f"bad number in profile specification {spec!r}") from exc
    if family == "bump":
        try:
            beta = float(fields.pop("beta", "2"))
        except ValueError as exc:
            raise ParameterError(f"bad beta in {spec!r}") from exc
        prof = bump(beta, R)
    elif family in ("combo", "linear_combination"):
        if "coeffs" not in fields or "betas" not in fields:
            raise ParameterError("combo profiles need coeffs=[...] and betas=[...]")
        prof = combo(_parse_list(fields.pop("coeffs")), _parse_list(fields.pop("betas")), R)
    else:
        raise ParameterError(f"unknown profile family {family!r}")
    if fields:
        raise ParameterError(f"unknown profile fields: {', '.join(sorted(fields))}")
    return prof.scaled(amp) if amp != 1.0 else prof


def format_profile(profile: RadialProfile) -> str:
    """Inverse of :func:`parse_profile` for single-radius profiles."""
    R = profile.radii[0]
    if len(profile.betas) == 1 and profile.coefficients[0] == 1.0:
        return f"family=bump,beta={profile.betas[0]:g},R={R:g}"
    coeffs = ",".join(f"{c:g}" for c in profile.coefficients)
    betas = ",".join(f"{b:g}" for b in profile.betas)
    return f"family=combo,coeffs=[{coeffs}],betas=[{betas}],R={R:g}"
