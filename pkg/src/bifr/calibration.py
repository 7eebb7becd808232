"""Gaussian-mechanism noise multiplier at unit sensitivity.

Finds the smallest sigma with
Phi(1/(2*sigma) - eps*sigma) - e^eps * Phi(-1/(2*sigma) - eps*sigma) <= delta
by bisection; the left-hand side is the exact privacy curve of the unit-
sensitivity Gaussian mechanism and is decreasing in sigma.
"""

from __future__ import annotations

import dataclasses
import math

_MAX_BISECT = 200
_DEFAULT_TOL = 1e-9


class CalibrationError(ArithmeticError):
    """Bisection failed to bracket or converge (should be unreachable)."""


@dataclasses.dataclass(frozen=True)
class PrivacyBudget:
    epsilon: float
    delta: float

    def __post_init__(self):
        if not (math.isfinite(self.epsilon) and self.epsilon > 0.0):
            raise ValueError(f"epsilon must be positive and finite, got {self.epsilon}")
        if not 0.0 < self.delta < 1.0:
            raise ValueError(f"delta must lie in (0, 1), got {self.delta}")


def _phi(x: float) -> float:
    return 0.5 * math.erfc(-x / math.sqrt(2.0))


def delta_for_sigma(sigma: float, epsilon: float) -> float:
    """Tight delta achieved by the unit-sensitivity Gaussian mechanism."""
    if sigma <= 0.0:
        return 1.0
    t = epsilon * sigma
    a = _phi(1.0 / (2.0 * sigma) - t)
    b = _phi(-1.0 / (2.0 * sigma) - t)
    # Guard against rounding pushing the difference negative far in the tail.
    return max(a - math.exp(epsilon) * b, 0.0)


def gaussian_sigma(budget: PrivacyBudget, tol: float = _DEFAULT_TOL) -> float:
    """Smallest sigma (within absolute tolerance) meeting the budget."""
    eps, delta = budget.epsilon, budget.delta
    lo = 0.0
    hi = 1.0
    steps = 0
    while delta_for_sigma(hi, eps) > delta:
        lo = hi
        hi *= 2.0
        steps += 1
        if steps > _MAX_BISECT:
            raise CalibrationError("failed to bracket sigma")
    for _ in range(_MAX_BISECT):
        if hi - lo <= tol:
            return hi
        mid = 0.5 * (lo + hi)
        if delta_for_sigma(mid, eps) <= delta:
            hi = mid
        else:
            lo = mid
    raise CalibrationError("bisection did not converge")
