"""Parameter tuple shared by every module and the validation errors it raises."""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Inadmissible parameters (the CLI maps this to exit code 2)."""


@dataclass(frozen=True)
class FracParams:
    """Dimension ``N``, order ``s``, weight exponent ``theta`` and power ``p``."""

    N: int
    s: float
    theta: float = 0.0
    p: float = 2.0

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ParameterError(f"N must be a positive integer, got {self.N!r}")
        object.__setattr__(self, "N", int(self.N))
        if not (0.0 < self.s < 1.0):
            raise ParameterError(f"s must lie in (0, 1), got {self.s!r}")
        if not math.isfinite(self.theta):
            raise ParameterError("theta must be finite")
        if not (self.p >= 1.0) or not math.isfinite(self.p):
            raise ParameterError(f"p must be >= 1, got {self.p!r}")

    @property
    def bounded_admissible(self) -> bool:
        return self.theta >= 0.0 and self.N > self.theta + 2.0 * self.s

    @property
    def power_admissible(self) -> bool:
        """Whether ``(-Delta)^s`` of ``|x|^-theta`` is defined (growth slower than ``|x|^(2s)``)."""
        return self.theta > -2.0 * self.s

    def require_bounded(self) -> "FracParams":
        if not self.bounded_admissible:
            raise ParameterError(
                f"need theta >= 0 and N > theta + 2s; got N={self.N}, s={self.s}, theta={self.theta}"
            )
        return self

    def require_power(self) -> "FracParams":
        if not self.power_admissible:
            raise ParameterError(f"need theta > -2s; got s={self.s}, theta={self.theta}")
        return self

    @property
    def hardy_weight(self) -> float:
        """Exponent of |x| dividing |u|^p on the left-hand side."""
        return self.theta + 2.0 * self.s

    @property
    def rellich_weight(self) -> float:
        """Exponent of |x| dividing |(-Delta)^s u|^p on the right-hand side."""
        return self.theta + 2.0 * self.s - 2.0 * self.s * self.p

    def as_dict(self) -> dict:
        return {"N": self.N, "s": self.s, "theta": self.theta, "p": self.p}
