"""Coefficient generators for the supported noise-correlation factorizations.

Every factorization is described by the first-column coefficients of its
strategy matrix C (and, for banded-inverse methods, of the explicitly banded
inverse C^{-1}).  The central family is the banded inverse fractional root:
C^{-1} carries the first p binomial-series coefficients of (1-x)^gamma on its
subdiagonals, which recovers the banded inverse square root at gamma = 1/2 and
the one-step geometric correlator at p = 2.
"""

from __future__ import annotations

import dataclasses
import enum

import numpy as np

from .toeplitz import ToeplitzOperator, ltt_inverse


class DomainError(ValueError):
    """A parameter lies outside its admissible range."""


class Method(enum.Enum):
    GAMMA_BIFR = "gamma-bifr"
    BISR = "bisr"
    DP_LAMBDA_CGD = "dp-lambda-cgd"
    GAMMA_BFR = "gamma-bfr"
    INV_DECAY = "inv-decay"
    IDENTITY = "identity"


#: Methods whose inverse is explicitly banded, enabling streaming noise
#: correlation with a buffer of bandwidth-1 generator states.
BANDED_INVERSE_METHODS = frozenset(
    {Method.GAMMA_BIFR, Method.BISR, Method.DP_LAMBDA_CGD, Method.IDENTITY}
)


@dataclasses.dataclass(frozen=True)
class FactorizationSpec:
    """Tagged description of a factorization method and its parameters."""

    method: Method
    n: int
    gamma: float | None = None
    lam: float | None = None
    c: float | None = None
    bandwidth: int | None = None

    def __post_init__(self):
        if self.n < 1:
            raise DomainError(f"horizon must be >= 1, got n={self.n}")
        m = self.method
        if m in (Method.GAMMA_BIFR, Method.GAMMA_BFR):
            if self.gamma is None or not 0.0 < self.gamma < 1.0:
                raise DomainError(f"{m.value} requires gamma in (0, 1), got {self.gamma}")
            self._check_bandwidth(required=True)
        elif m is Method.BISR:
            if self.gamma is not None and self.gamma != 0.5:
                raise DomainError("bisr fixes gamma = 1/2")
            self._check_bandwidth(required=True)
        elif m is Method.DP_LAMBDA_CGD:
            if self.lam is None or not 0.0 <= self.lam < 1.0:
                raise DomainError(f"dp-lambda-cgd requires lambda in [0, 1), got {self.lam}")
        elif m is Method.INV_DECAY:
            if self.c is None:
                raise DomainError("inv-decay requires the offset parameter c")
            self._check_bandwidth(required=True)
            p = self.bandwidth
            if p >= 2 and 1.0 / (p - 1) + self.c < 0.0:
                raise DomainError(
                    f"inv-decay coefficient 1/{p - 1} + c is negative for c={self.c}"
                )
        elif m is Method.IDENTITY:
            pass
        else:  # pragma: no cover
            raise DomainError(f"unknown method {m}")

    def _check_bandwidth(self, required: bool):
        p = self.bandwidth
        if p is None:
            if required:
                raise DomainError(f"{self.method.value} requires a bandwidth")
            return
        if not 1 <= p <= self.n:
            raise DomainError(f"bandwidth must satisfy 1 <= p <= n, got p={p}, n={self.n}")


def binomial_coeffs_neg(gamma: float, m: int, _allow_boundary: bool = False) -> np.ndarray:
    """Series coefficients of (1-x)^{-gamma}: positive and decreasing.

    c_0 = 1 and c_j = c_{j-1} * (gamma + j - 1) / j.
    """
    _check_gamma(gamma, _allow_boundary)
    if m < 1:
        raise DomainError(f"need at least one coefficient, got m={m}")
    out = np.empty(m)
    out[0] = 1.0
    for j in range(1, m):
        # Grouping the integer part first keeps out[1] == gamma exactly.
        out[j] = out[j - 1] * ((gamma + (j - 1)) / j)
    return out


def binomial_coeffs_pos(gamma: float, m: int, _allow_boundary: bool = False) -> np.ndarray:
    """Series coefficients of (1-x)^{+gamma}: 1 followed by negative terms.

    c_0 = 1 and c_j = c_{j-1} * (j - 1 - gamma) / j.
    """
    _check_gamma(gamma, _allow_boundary)
    if m < 1:
        raise DomainError(f"need at least one coefficient, got m={m}")
    out = np.empty(m)
    out[0] = 1.0
    for j in range(1, m):
        out[j] = out[j - 1] * ((j - 1 - gamma) / j)
    return out


def _check_gamma(gamma: float, allow_boundary: bool):
    lo_ok = gamma > 0.0 or (allow_boundary and gamma >= 0.0)
    hi_ok = gamma < 1.0 or (allow_boundary and gamma <= 1.0)
    if not (lo_ok and hi_ok):
        raise DomainError(f"gamma must lie in (0, 1), got {gamma}")


def _effective_gamma(spec: FactorizationSpec) -> float:
    return 0.5 if spec.method is Method.BISR else spec.gamma


def gamma_bifr_inverse(spec: FactorizationSpec) -> ToeplitzOperator:
    """Banded inverse: the first p subdiagonals carry (1-x)^gamma coefficients."""
    if spec.method not in (Method.GAMMA_BIFR, Method.BISR):
        raise DomainError(f"{spec.method.value} has no fractional-root banded inverse")
    p = min(spec.bandwidth, spec.n)
    coeffs = np.zeros(spec.n)
    coeffs[:p] = binomial_coeffs_pos(_effective_gamma(spec), p)
    return ToeplitzOperator(coeffs)


def inverse_bandwidth(spec: FactorizationSpec) -> int:
    """Number of nonzero subdiagonals of C^{-1} for banded-inverse methods."""
    m = spec.method
    if m in (Method.GAMMA_BIFR, Method.BISR):
        return min(spec.bandwidth, spec.n)
    if m is Method.DP_LAMBDA_CGD:
        return min(2, spec.n) if spec.lam != 0.0 else 1
    if m is Method.IDENTITY:
        return 1
    raise DomainError(f"{m.value} does not have a banded inverse")


def inverse_coeffs(spec: FactorizationSpec) -> ToeplitzOperator:
    """First-column coefficients of C^{-1}.

    Explicit and O(p) for banded-inverse methods; falls back to the general
    LTT inversion for banded (non-banded-inverse) strategies.
    """
    m = spec.method
    if m in (Method.GAMMA_BIFR, Method.BISR):
        return gamma_bifr_inverse(spec)
    if m is Method.DP_LAMBDA_CGD:
        coeffs = np.zeros(spec.n)
        coeffs[0] = 1.0
        if spec.n > 1:
            coeffs[1] = -spec.lam
        return ToeplitzOperator(coeffs)
    if m is Method.IDENTITY:
        coeffs = np.zeros(spec.n)
        coeffs[0] = 1.0
        return ToeplitzOperator(coeffs)
    return ltt_inverse(strategy_coeffs(spec))


def strategy_coeffs(spec: FactorizationSpec) -> ToeplitzOperator:
    """First-column coefficients of the strategy matrix C."""
    m, n = spec.method, spec.n
    if m in (Method.GAMMA_BIFR, Method.BISR):
        return ToeplitzOperator(
            _banded_inverse_strategy(_effective_gamma(spec), min(spec.bandwidth, n), n)
        )
    if m is Method.DP_LAMBDA_CGD:
        # Same iterated products as the p=2 fractional-root recursion, so the
        # two parameterizations agree bit-for-bit.
        return ToeplitzOperator(np.cumprod(np.r_[1.0, np.full(n - 1, spec.lam)]))
    if m is Method.GAMMA_BFR:
        p = min(spec.bandwidth, n)
        coeffs = np.zeros(n)
        coeffs[:p] = binomial_coeffs_neg(spec.gamma, p)
        return ToeplitzOperator(coeffs)
    if m is Method.INV_DECAY:
        p = min(spec.bandwidth, n)
        coeffs = np.zeros(n)
        coeffs[0] = 1.0
        j = np.arange(1, p)
        coeffs[1:p] = 1.0 / j + spec.c
        return ToeplitzOperator(coeffs)
    if m is Method.IDENTITY:
        coeffs = np.zeros(n)
        coeffs[0] = 1.0
        return ToeplitzOperator(coeffs)
    raise DomainError(f"unknown method {m}")  # pragma: no cover


def _banded_inverse_strategy(gamma: float, p: int, n: int) -> np.ndarray:
    """Strategy coefficients for the banded fractional-root inverse.

    The first min(p, n) entries coincide with the (1-x)^{-gamma} series; past
    the bandwidth they follow the banded convolution recursion, for an overall
    cost of O(n*p).
    """
    head = min(p, n)
    out = np.empty(n)
    out[:head] = binomial_coeffs_neg(gamma, head)
    if head < n:
        weights = -binomial_coeffs_pos(gamma, p)[1:]
        for j in range(head, n):
            out[j] = np.dot(weights, out[j - p + 1 : j][::-1])
    return out
