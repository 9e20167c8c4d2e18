"""Gamma function and the closed-form constants built from it.

The gamma function uses a Lanczos approximation (g = 7, nine terms) with the
reflection formula for arguments below 1/2.  Every constant is evaluated as a
signed sum of log-gammas so that large arguments do not overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

from .params import FracParams, ParameterError

__all__ = [
    "ConstantReport",
    "log_gamma",
    "gamma",
    "gamma_ratio",
    "sphere_area",
    "c_ns",
    "lambda_closed",
    "herbst_constant",
    "fs_closed_p2",
    "classical_rellich_constant",
    "b_limit_s1",
    "relative_difference",
    "LimitS1Row",
    "s_one_table",
]

_LANCZOS_G = 7.0
_LANCZOS_COEF = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_HALF_LOG_2PI = 0.5 * math.log(2.0 * math.pi)
_FLOOR = 1e-300


@dataclass
class ConstantReport:
    """A computed constant, optionally compared against a closed form."""

    kind: str
    params: FracParams
    value: float
    closed_form: Optional[float] = None
    rel_diff: Optional[float] = None
    abs_err: float = 0.0
    evals: int = 0
    converged: bool = True

    def as_dict(self) -> dict:
        return {
            "kind": self.kind,
            "params": self.params.as_dict(),
            "value": self.value,
            "closed_form": self.closed_form,
            "rel_diff": self.rel_diff,
            "abs_err": self.abs_err,
            "evals": self.evals,
            "converged": self.converged,
        }


def relative_difference(value: float, reference: float) -> float:
    return abs(value - reference) / max(abs(reference), _FLOOR)


def _sinpi(x: float) -> float:
    # reduce to [-1/2, 1/2] before multiplying by pi
    n = round(x)
    r = x - n
    v = math.sin(math.pi * r)
    return -v if n % 2 else v


def _is_pole(x: float) -> bool:
    return x <= 0.0 and x == math.floor(x)


def log_gamma(x: float) -> tuple[float, int]:
    """Return ``(log|Gamma(x)|, sign(Gamma(x)))``.

    Raises
    ------
    ParameterError
        If ``x`` is zero or a negative integer.
    """
    x = float(x)
    if _is_pole(x):
        raise ParameterError(f"Gamma has a pole at {x}")
    if x < 0.5:
        # Gamma(x) Gamma(1-x) = pi / sin(pi x)
        sp = _sinpi(x)
        lg, _ = log_gamma(1.0 - x)
        return math.log(math.pi) - math.log(abs(sp)) - lg, (1 if sp > 0 else -1)
    z = x - 1.0
    a = _LANCZOS_COEF[0]
    for i in range(1, len(_LANCZOS_COEF)):
        a += _LANCZOS_COEF[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _HALF_LOG_2PI + (z + 0.5) * math.log(t) - t + math.log(a), 1


def gamma(x: float) -> float:
    lg, sign = log_gamma(x)
    return sign * math.exp(lg)


def gamma_ratio(numer, denom) -> float:
    """prod Gamma(numer) / prod Gamma(denom); a pole in ``denom`` gives 0."""
    if any(_is_pole(d) for d in denom):
        if any(_is_pole(n) for n in numer):
            raise ParameterError("indeterminate gamma ratio (poles in numerator and denominator)")
        return 0.0
    total, sign = 0.0, 1
    for a in numer:
        lg, sg = log_gamma(a)
        total += lg
        sign *= sg
    for a in denom:
        lg, sg = log_gamma(a)
        total -= lg
        sign *= sg
    return sign * math.exp(total)


def sphere_area(N: int) -> float:
    """Surface measure of the unit sphere in R^N (two points when N = 1)."""
    if int(N) != N or N < 1:
        raise ParameterError(f"N must be a positive integer, got {N!r}")
    # math.gamma is correctly rounded at half-integers, which keeps N = 1, 2, 3 exact
    return 2.0 * math.pi ** (N / 2.0) / math.gamma(N / 2.0)


def c_ns(N: int, s: float) -> float:
    """Normalising constant of the fractional Laplacian of order s in R^N."""
    if not (0.0 < s < 1.0):
        raise ParameterError(f"s must lie in (0, 1), got {s!r}")
    return s * 4.0**s * gamma_ratio([(N + 2.0 * s) / 2.0], [1.0 - s]) / math.pi ** (N / 2.0)


def lambda_closed(N: int, s: float, theta: float) -> float:
    """Coefficient of |x|^{-theta-2s} in (-Delta)^s |x|^{-theta}.

    Exactly zero at ``theta = 0`` and ``theta = N - 2s``.
    """
    if not (N > theta > -2.0 * s):
        raise ParameterError(f"need N > theta > -2s; got N={N}, s={s}, theta={theta}")
    if theta == 0.0 or theta == N - 2.0 * s:
        return 0.0
    return 4.0**s * gamma_ratio(
        [(N - theta) / 2.0, (2.0 * s + theta) / 2.0],
        [(N - theta - 2.0 * s) / 2.0, theta / 2.0],
    )


def herbst_constant(N: int, s: float, p: float) -> float:
    if not (p > 1.0 and s > 0.0):
        raise ParameterError(f"need p > 1 and s > 0; got p={p}, s={s}")
    if not N > p * s:
        raise ParameterError(f"need N > p s; got N={N}, p={p}, s={s}")
    return 2.0 ** (-s) * gamma_ratio(
        [N * (p - 1.0) / (2.0 * p), (N - p * s) / (2.0 * p)],
        [N / (2.0 * p), (N * (p - 1.0) + p * s) / (2.0 * p)],
    )


def fs_closed_p2(N: int, s: float) -> float:
    """Sharp fractional Hardy constant for p = 2 (Gagliardo-seminorm form)."""
    if not (0.0 < s < 1.0):
        raise ParameterError(f"s must lie in (0, 1), got {s!r}")
    if not N > 2.0 * s:
        raise ParameterError(f"need N > 2s; got N={N}, s={s}")
    abs_gamma_neg_s = abs(gamma(-s))
    return (
        2.0
        * math.pi ** (N / 2.0)
        * gamma_ratio([(N + 2.0 * s) / 4.0] * 2, [(N - 2.0 * s) / 4.0] * 2 + [(N + 2.0 * s) / 2.0])
        * abs_gamma_neg_s
    )


def classical_rellich_constant(N: int, p: float, theta: float) -> float:
    if not p > 1.0:
        raise ParameterError(f"need p > 1, got {p}")
    if not N >= theta + 2.0:
        raise ParameterError(f"need N >= theta + 2; got N={N}, theta={theta}")
    return (N - 2.0 - theta) * ((p - 1.0) * (N - 2.0) + theta) / p**2


def b_limit_s1(N: int, theta: float) -> float:
    """Limit of lambda_closed(N, s, theta) as s -> 1."""
    if theta < 0.0:
        raise ParameterError(f"need theta >= 0, got {theta}")
    if not N > theta + 2.0:
        raise ParameterError(f"need N > theta + 2; got N={N}, theta={theta}")
    if theta == 0.0:
        return 0.0
    return 2.0 * theta * gamma_ratio([(N - theta) / 2.0], [(N - theta - 2.0) / 2.0])


@dataclass(frozen=True)
class LimitS1Row:
    s: float
    value: float
    limit: float
    abs_diff: float
    ratio: Optional[float]


def s_one_table(N: int, theta: float, s_values: Sequence[float]) -> list[LimitS1Row]:
    """``lambda_closed(N, s, theta)`` against its ``s -> 1`` limit.

    ``ratio`` is the previous row's distance divided by this row's, so a
    linear rate shows up as 2 when ``1 - s`` halves between rows.
    """
    limit = b_limit_s1(N, theta)
    rows: list[LimitS1Row] = []
    prev = None
    for s in s_values:
        val = lambda_closed(N, s, theta)
        diff = abs(val - limit)
        ratio = prev / diff if (prev is not None and diff > 0.0) else None
        rows.append(LimitS1Row(float(s), val, limit, diff, ratio))
        prev = diff
    return rows
