"""Lower-triangular Toeplitz (LTT) operators stored by first-column coefficients.

An n x n lower-triangular Toeplitz matrix is fully determined by its first
column (a_0, ..., a_{n-1}): entry (i, j) equals a_{i-j} for i >= j and 0
otherwise.  All operations here work directly on the coefficient sequence,
which is much cheaper than materializing the n^2 matrix; dense materialization
is only provided for small oracle checks.
"""

from __future__ import annotations

import dataclasses

import numpy as np

# Dense materialization is only meant for oracle-style cross checks.
DENSE_CAP = 4096


class DimensionError(ValueError):
    """Operand sizes are incompatible."""


class SingularOperatorError(ValueError):
    """The operator has a zero diagonal and cannot be inverted."""


@dataclasses.dataclass(frozen=True)
class ToeplitzOperator:
    """Immutable LTT operator; ``coeffs[r]`` is the value on subdiagonal r."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=np.float64)
        if coeffs.ndim != 1 or coeffs.size < 1:
            raise DimensionError("coefficients must be a non-empty 1-D sequence")
        if not np.all(np.isfinite(coeffs)):
            raise ValueError("coefficients must be finite")
        coeffs = coeffs.copy()
        coeffs.flags.writeable = False
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def n(self) -> int:
        return self.coeffs.size

    def __eq__(self, other) -> bool:
        return isinstance(other, ToeplitzOperator) and np.array_equal(
            self.coeffs, other.coeffs
        )

    def __hash__(self):
        return hash(self.coeffs.tobytes())


def identity_coeffs(n: int) -> ToeplitzOperator:
    """The n x n identity as an LTT operator."""
    c = np.zeros(n)
    c[0] = 1.0
    return ToeplitzOperator(c)


def prefix_sum_coeffs(n: int) -> ToeplitzOperator:
    """The all-ones LTT operator mapping a stream to its running sums."""
    return ToeplitzOperator(np.ones(n))


def ltt_multiply(a: ToeplitzOperator, b: ToeplitzOperator) -> ToeplitzOperator:
    """Product of two LTT operators (truncated coefficient convolution)."""
    if a.n != b.n:
        raise DimensionError(f"dimension mismatch: {a.n} != {b.n}")
    return ToeplitzOperator(np.convolve(a.coeffs, b.coeffs)[: a.n])


def _band_length(coeffs: np.ndarray) -> int:
    nz = np.flatnonzero(coeffs)
    return int(nz[-1]) + 1 if nz.size else 1


def ltt_inverse(a: ToeplitzOperator) -> ToeplitzOperator:
    """Inverse of an LTT operator via the first-column recursion.

    Exploits bandedness of the input: if only the first q coefficients are
    nonzero the cost is O(n*q) instead of O(n^2).
    """
    c = a.coeffs
    if c[0] == 0.0:
        raise SingularOperatorError("diagonal coefficient is zero")
    n = a.n
    q = _band_length(c)
    inv_a0 = 1.0 / c[0]
    band = c[1:q]
    r = np.zeros(n)
    r[0] = inv_a0
    for j in range(1, n):
        m = min(j, q - 1)
        if m:
            r[j] = -inv_a0 * np.dot(band[:m], r[j - m : j][::-1])
    return ToeplitzOperator(r)


def column_norms(a: ToeplitzOperator) -> tuple[float, float]:
    """First-column (l1, l2) norms.

    For nonnegative coefficients these equal the operator norms ||.||_{1->1}
    and ||.||_{1->2}.  Signed inputs are handled by taking absolute values,
    which yields an upper bound rather than the exact operator norm.
    """
    c = np.abs(a.coeffs)
    return float(np.sum(c)), float(np.sqrt(np.sum(c * c)))


def materialize_dense(a: ToeplitzOperator, cap: int = DENSE_CAP) -> np.ndarray:
    """Dense n x n matrix; refuses n > cap to keep oracle use desk-scale."""
    n = a.n
    if n > cap:
        raise DimensionError(f"refusing dense materialization at n={n} > cap={cap}")
    m = np.zeros((n, n))
    rows = np.arange(n)
    for r in range(n):
        m[rows[r:], rows[: n - r]] = a.coeffs[r]
    return m
