"""Multi-participation sensitivity under minimum-separation participation.

A data point may take part in at most k iterations, with at least b
iterations between consecutive participations.  For lower-triangular Toeplitz
strategies with nonnegative nonincreasing coefficients the worst case is a
closed form over shifted copies of the first column; a brute-force enumerator
over all admissible participation patterns serves as an independent oracle on
small instances.
"""

from __future__ import annotations

import dataclasses

import numpy as np

from .toeplitz import ToeplitzOperator, column_norms

# Exhaustive pattern enumeration is exponential in n.
BRUTEFORCE_CAP = 24

# Absolute slack when checking the nonincreasing hypothesis, to tolerate
# floating-point ties.
_MONOTONE_TOL = 1e-12


class PreconditionError(ValueError):
    """A theorem hypothesis is violated by the inputs."""


@dataclasses.dataclass(frozen=True)
class ParticipationSchema:
    """(n, b, k): iterations, minimum separation, maximum participations."""

    n: int
    b: int
    k: int

    def __post_init__(self):
        if self.n < 1 or self.b < 1 or self.k < 1:
            raise ValueError(f"n, b, k must be positive, got {self}")
        if self.b > self.n:
            raise ValueError(f"min separation b={self.b} exceeds n={self.n}")
        if (self.k - 1) * self.b > self.n - 1:
            raise ValueError(
                f"(k-1)*b = {(self.k - 1) * self.b} exceeds n-1 = {self.n - 1}"
            )


def _require_nonneg_nonincreasing(C: ToeplitzOperator):
    c = C.coeffs
    if np.any(c < -_MONOTONE_TOL):
        raise PreconditionError(
            "sensitivity closed form requires nonnegative coefficients"
        )
    if np.any(np.diff(c) > _MONOTONE_TOL):
        raise PreconditionError(
            "sensitivity closed form requires nonincreasing coefficients"
        )


def sens_exact(C: ToeplitzOperator, schema: ParticipationSchema) -> float:
    """Exact sensitivity for nonnegative nonincreasing Toeplitz strategies.

    The worst-case pattern is {0, b, 2b, ...}; the value is the l2 norm of the
    sum of the corresponding k columns of C.
    """
    _check_schema(C, schema)
    _require_nonneg_nonincreasing(C)
    n, b, k = schema.n, schema.b, schema.k
    acc = np.zeros(n)
    for j in range(k):
        off = j * b
        if off >= n:
            break
        acc[off:] += C.coeffs[: n - off]
    return float(np.linalg.norm(acc))


def sens_upper_bound(C: ToeplitzOperator, schema: ParticipationSchema) -> float:
    """Operator-norm bound: sens^2 <= k*l2^2 + (k/b)*l1^2."""
    _check_schema(C, schema)
    _require_nonneg_nonincreasing(C)
    l1, l2 = column_norms(C)
    return float(np.sqrt(schema.k * l2 * l2 + (schema.k / schema.b) * l1 * l1))


def sens_bruteforce(C: ToeplitzOperator, schema: ParticipationSchema) -> float:
    """Oracle: exhaustively maximize over all admissible participation sets.

    Enumerates every S of size <= k with pairwise gaps >= b; never assumes the
    regular pattern {0, b, 2b, ...}.  Exact for nonnegative C.  Capped at
    n <= 24.
    """
    _check_schema(C, schema)
    n, b, k = schema.n, schema.b, schema.k
    if n > BRUTEFORCE_CAP:
        raise ValueError(f"brute force refuses n={n} > {BRUTEFORCE_CAP}")
    if np.any(C.coeffs < 0):
        raise PreconditionError("brute-force oracle requires nonnegative coefficients")

    masks = np.arange(1 << n, dtype=np.uint64)
    valid = np.ones(masks.size, dtype=bool)
    # Popcount <= k.
    pop = np.zeros(masks.size, dtype=np.uint8)
    tmp = masks.copy()
    one = np.uint64(1)
    for _ in range(n):
        pop += (tmp & one).astype(np.uint8)
        tmp >>= one
    valid &= pop <= k
    # Any two set bits closer than b apart rule the mask out.
    for gap in range(1, b):
        valid &= (masks & (masks >> np.uint64(gap))) == 0
    patterns = masks[valid]

    bits = (patterns[:, None] >> np.arange(n, dtype=np.uint64)[None, :]) & one
    cols = np.zeros((n, n))
    rows = np.arange(n)
    for r in range(n):
        cols[rows[r:], rows[: n - r]] = C.coeffs[r]
    sums = bits.astype(np.float64) @ cols.T
    return float(np.max(np.linalg.norm(sums, axis=1)))


def _check_schema(C: ToeplitzOperator, schema: ParticipationSchema):
    if C.n != schema.n:
        raise ValueError(f"operator size {C.n} != schema n {schema.n}")
