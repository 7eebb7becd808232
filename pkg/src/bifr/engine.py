"""Streaming correlated-noise engine with generator-state regeneration.

For banded-inverse factorizations the privatized step output is

    x_hat_i = x_i + s * sum_k w_k * Z_{i-k} + s * Z_i,

where the w_k are the inverse-band coefficients and the Z are i.i.d. Gaussian
vectors.  Instead of buffering the last bandwidth-1 noise vectors, the engine
keeps a ring of bandwidth-1 generator state tokens and regenerates the old
vectors on every step, so memory overhead is O(1) vectors plus the tokens.

A vector-buffer variant (``store_vectors=True``) keeps the raw noise vectors
instead; it is bit-identical to the regenerating engine and exists as a cross
check.
"""

from __future__ import annotations

import dataclasses
import math

import numpy as np
from scipy.signal import lfilter

from .calibration import PrivacyBudget, gaussian_sigma
from .catalog import (
    BANDED_INVERSE_METHODS,
    FactorizationSpec,
    inverse_bandwidth,
    inverse_coeffs,
    strategy_coeffs,
)
from .prng import GaussianStream, StateToken
from .sensitivity import ParticipationSchema, sens_exact
from .toeplitz import _band_length

DENSE_REFERENCE_N_CAP = 1024
DENSE_REFERENCE_DIM_CAP = 64


class UnsupportedMethodError(ValueError):
    """Streaming correlation needs an explicitly banded inverse."""


@dataclasses.dataclass
class CorrelatorState:
    """Mutable, single-owner state of the streaming engine."""

    spec: FactorizationSpec
    dim: int
    noise_scale: float
    weights: np.ndarray  # inverse-band coefficients w_1 .. w_{p-1}
    ring: list[StateToken]  # generator states for the last p-1 steps
    gen: GaussianStream
    step: int = 0
    store_vectors: bool = False
    _zbuf: np.ndarray | None = None
    _vbuf: list[np.ndarray] = dataclasses.field(default_factory=list)


def engine_init(
    spec: FactorizationSpec,
    dim: int,
    noise_scale: float,
    seed: int,
    store_vectors: bool = False,
) -> CorrelatorState:
    """Set up a correlator for a banded-inverse factorization."""
    if spec.method not in BANDED_INVERSE_METHODS:
        raise UnsupportedMethodError(
            f"{spec.method.value} does not have a banded inverse; streaming "
            "noise regeneration is unsupported"
        )
    if dim < 1:
        raise ValueError(f"dim must be >= 1, got {dim}")
    p = inverse_bandwidth(spec)
    weights = inverse_coeffs(spec).coeffs[1:p]
    return _init_from_weights(spec, weights, dim, noise_scale, seed, store_vectors)


def _init_from_weights(
    spec, weights, dim, noise_scale, seed, store_vectors=False
) -> CorrelatorState:
    gen = GaussianStream.from_seed(seed)
    weights = np.asarray(weights, dtype=np.float64)
    ring = [gen.get_state()] * weights.size
    return CorrelatorState(
        spec=spec,
        dim=dim,
        noise_scale=float(noise_scale),
        weights=weights,
        ring=ring,
        gen=gen,
        store_vectors=store_vectors,
        _zbuf=np.empty(dim),
    )


def engine_step(
    state: CorrelatorState, x: np.ndarray, out: np.ndarray | None = None
) -> np.ndarray:
    """Privatize one aggregated vector; mutates the engine state.

    With ``out`` supplied, the step performs no per-call allocations beyond
    the first invocation (which warms up generator scratch).
    """
    x = np.asarray(x, dtype=np.float64)
    if x.shape != (state.dim,):
        raise ValueError(f"expected input of shape ({state.dim},), got {x.shape}")
    if out is None:
        out = x.copy()
    else:
        np.copyto(out, x)

    i = state.step
    p1 = state.weights.size
    zbuf = state._zbuf
    if p1:
        start = max(0, i - p1)
        if state.store_vectors:
            for m in range(start, i):
                np.multiply(
                    state._vbuf[m - start],
                    state.noise_scale * state.weights[i - m - 1],
                    out=zbuf,
                )
                out += zbuf
        else:
            state.gen.set_state(state.ring[0])
            for m in range(start, i):
                state.gen.fill(zbuf)
                np.multiply(zbuf, state.noise_scale * state.weights[i - m - 1], out=zbuf)
                out += zbuf
        token = state.gen.get_state()
        state.ring.pop(0)
        state.ring.append(token)
    state.gen.fill(zbuf)
    if state.store_vectors and p1:
        state._vbuf.append(zbuf.copy())
        if len(state._vbuf) > p1:
            state._vbuf.pop(0)
    np.multiply(zbuf, state.noise_scale, out=zbuf)
    out += zbuf
    state.step = i + 1
    return out


def engine_dense_reference(
    spec: FactorizationSpec, dim: int, noise_scale: float, seed: int, n: int
) -> np.ndarray:
    """Oracle: materialize the inverse band, replay the same noise, multiply.

    Returns the n x dim outputs the engine produces on zero inputs.  Uses the
    same generator discipline and the same oldest-first accumulation order as
    the streaming engine, so the result is bit-identical.
    """
    if n > DENSE_REFERENCE_N_CAP or dim > DENSE_REFERENCE_DIM_CAP:
        raise ValueError(
            f"dense reference capped at n <= {DENSE_REFERENCE_N_CAP}, "
            f"dim <= {DENSE_REFERENCE_DIM_CAP}"
        )
    if n > spec.n:
        raise ValueError(f"n={n} exceeds spec horizon {spec.n}")
    p = inverse_bandwidth(spec)
    scaled_band = noise_scale * inverse_coeffs(spec).coeffs[:p]
    gen = GaussianStream.from_seed(seed)
    Z = gen.normal((n, dim))
    out = np.zeros((n, dim))
    for i in range(n):
        for j in range(max(0, i - p + 1), i + 1):
            out[i] += scaled_band[i - j] * Z[j]
    return out


@dataclasses.dataclass(frozen=True)
class MonteCarloEstimate:
    estimate: float
    stderr: float
    trials: int
    noise_scale: float


def run_prefix_release(
    spec: FactorizationSpec,
    schema: ParticipationSchema,
    dim: int,
    budget: PrivacyBudget | None,
    trials: int,
    seed: int,
    noise_scale: float | None = None,
) -> MonteCarloEstimate:
    """Monte Carlo estimate of the running-sum noise RMSE on zero inputs.

    Converges to rmse(spec, schema) * sigma as trials grow; the per-dimension
    normalization makes the estimate comparable with the analytic objective.
    Trials use independent derived substreams of ``seed`` and a deterministic
    aggregation order.
    """
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if noise_scale is None:
        if budget is None:
            raise ValueError("either a privacy budget or an explicit noise_scale is required")
        noise_scale = gaussian_sigma(budget) * sens_exact(strategy_coeffs(spec), schema)
    n = spec.n
    inv = inverse_coeffs(spec).coeffs
    band = inv[: _band_length(inv)]
    vals = np.empty(trials)
    for t in range(trials):
        gen = GaussianStream.from_seed(seed, stream=t + 1)
        Z = gen.normal((n, dim))
        correlated = lfilter(band, [1.0], Z, axis=0)
        sums = np.cumsum(correlated, axis=0)
        vals[t] = noise_scale * noise_scale * np.sum(sums * sums) / (n * dim)
    mean = float(np.mean(vals))
    estimate = math.sqrt(mean)
    if trials > 1 and estimate > 0.0:
        se_mean = float(np.std(vals, ddof=1)) / math.sqrt(trials)
        stderr = se_mean / (2.0 * estimate)
    else:
        stderr = 0.0
    return MonteCarloEstimate(
        estimate=estimate, stderr=stderr, trials=trials, noise_scale=noise_scale
    )


def clip_and_aggregate(per_example_grads, clip_norm: float) -> np.ndarray:
    """Clip each per-example gradient to ``clip_norm`` in l2 and sum them."""
    if clip_norm <= 0.0:
        raise ValueError(f"clip norm must be positive, got {clip_norm}")
    acc = None
    for g in per_example_grads:
        g = np.asarray(g, dtype=np.float64)
        norm = float(np.linalg.norm(g))
        scale = min(1.0, clip_norm / norm) if norm > 0.0 else 1.0
        acc = g * scale if acc is None else acc + g * scale
    if acc is None:
        raise ValueError("no gradients supplied")
    return acc


def private_step(
    state: CorrelatorState, per_example_grads, clip_norm: float
) -> np.ndarray:
    """Thin adapter: clip/aggregate a batch, then run one engine step."""
    return engine_step(state, clip_and_aggregate(per_example_grads, clip_norm))
