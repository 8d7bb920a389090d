"""One-period propagator G(T) of the vectorized master equation and its spectrum.

For piecewise-constant schedules G(T) is an exact product of segment
exponentials.  Smooth (cosine) schedules use the midpoint-exponential rule:
every factor exp(dt * L(t_mid)) is itself a valid completely positive
trace-preserving step, so trace and positivity survive any step count, and
the scheme converges at second order with an even-power error expansion
that step-doubling extrapolation accelerates to fourth order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .expm import expm_batch, ordered_product
from .liouvillian import ModelGenerators
from .model import LindbladModel

_CHUNK = 1 << 16


class ConvergenceError(RuntimeError):
    """Step doubling hit the step cap before reaching the tolerance."""

    def __init__(self, last_delta: float, steps: int):
        self.last_delta = last_delta
        self.steps = steps
        super().__init__(
            f"propagator not converged at {steps} steps (last delta {last_delta:.3e})"
        )


class NoSteadyStateError(RuntimeError):
    """No trace-carrying eigenvalue near 1 was found."""


def _midpoint_product(gen: ModelGenerators, n: int) -> np.ndarray:
    """Time-ordered product of n midpoint exponentials over one period."""
    period = gen.model.period
    dt = period / n
    dim = gen.h_part.shape[0]
    out = np.eye(dim, dtype=complex)
    for start in range(0, n, _CHUNK):
        stop = min(start + _CHUNK, n)
        times = (np.arange(start, stop) + 0.5) * dt
        out = ordered_product(expm_batch(dt * gen.stack(times))) @ out
    return out


def _segment_product(gen: ModelGenerators) -> np.ndarray:
    """Exact product of per-segment exponentials for piecewise-constant models."""
    period = gen.model.period
    edges = list(gen.model.breakpoints()) + [1.0]
    if edges[0] != 0.0:
        edges.insert(0, 0.0)
    mids = np.array([(a + b) / 2.0 for a, b in zip(edges[:-1], edges[1:])]) * period
    lengths = np.diff(np.array(edges)) * period
    stack = expm_batch(lengths[:, None, None] * gen.stack(mids))
    return ordered_product(stack)


def one_period_propagator(
    model: LindbladModel,
    steps: int | str = "auto",
    tol: float = 1e-10,
    max_steps: int = 1 << 20,
) -> np.ndarray:
    """The one-period time-evolution matrix G(T) of the vectorized dynamics.

    steps="auto" picks the exact segment product for piecewise-constant
    schedules, and otherwise doubles the midpoint-rule step count (with
    step-doubling extrapolation) until successive results agree to tol in
    max norm.  An integer asks for the plain n-step midpoint product.
    """
    gen = ModelGenerators.from_model(model)
    if isinstance(steps, int):
        if steps < 1:
            raise ValueError("steps must be positive")
        return _midpoint_product(gen, steps)
    if steps != "auto":
        raise ValueError("steps must be an integer or 'auto'")
    if model.is_piecewise_constant:
        return _segment_product(gen)
    n = 64
    g_n = _midpoint_product(gen, n)
    refined_prev = None
    last_delta = math.inf
    while 2 * n <= max_steps:
        g_2n = _midpoint_product(gen, 2 * n)
        refined = (4.0 * g_2n - g_n) / 3.0
        if refined_prev is not None:
            last_delta = float(np.abs(refined - refined_prev).max())
            if last_delta < tol:
                return refined
        refined_prev = refined
        g_n = g_2n
        n *= 2
    raise ConvergenceError(last_delta, n)


def richardson_propagator(model: LindbladModel, steps: int) -> np.ndarray:
    """Step-doubling extrapolation of the midpoint rule at a fixed base count."""
    gen = ModelGenerators.from_model(model)
    if gen.model.is_piecewise_constant:
        return _segment_product(gen)
    return (4.0 * _midpoint_product(gen, 2 * steps) - _midpoint_product(gen, steps)) / 3.0


@dataclass(frozen=True)
class PropagatorSpectrum:
    """Eigendecomposition of G(T) with the steady state singled out.

    eigenmatrices holds unit Hilbert-Schmidt-norm vectorized eigenmatrices as
    columns, phase-fixed so the largest-magnitude component is real positive;
    eigenvalues are sorted by descending real part, ties by ascending
    imaginary part.
    """

    g_matrix: np.ndarray
    eigenvalues: np.ndarray
    eigenmatrices: np.ndarray
    steady_index: int

    @property
    def dim(self) -> int:
        return int(round(math.sqrt(self.g_matrix.shape[0])))

    @cached_property
    def transient_indices(self) -> tuple[int, ...]:
        return tuple(k for k in range(len(self.eigenvalues)) if k != self.steady_index)

    @property
    def transient_eigenvalues(self) -> np.ndarray:
        return self.eigenvalues[list(self.transient_indices)]

    @property
    def steady_eigenvalue(self) -> complex:
        return complex(self.eigenvalues[self.steady_index])

    @property
    def steady_eigenmatrix(self) -> np.ndarray:
        return self.eigenmatrices[:, self.steady_index]


def _fix_phases(vecs: np.ndarray) -> np.ndarray:
    # pivot on the first component within 1e-8 of the largest magnitude, so
    # exactly tied magnitudes (conjugate partners) pick the same component
    mags = np.abs(vecs)
    lead = np.argmax(mags >= (1.0 - 1e-8) * mags.max(axis=0, keepdims=True), axis=0)
    cols = np.arange(vecs.shape[1])
    pivot = vecs[lead, cols]
    phase = np.where(np.abs(pivot) > 0, pivot / np.maximum(np.abs(pivot), 1e-300), 1.0)
    return vecs / phase[None, :]


def _spectrum_from_eig(
    g: np.ndarray,
    lam: np.ndarray,
    vecs: np.ndarray,
    degeneracy_tol: float,
    trace_tol: float,
) -> PropagatorSpectrum:
    n2 = g.shape[0]
    n = int(round(math.sqrt(n2)))
    diag_idx = np.arange(n) * (n + 1)
    vecs = vecs / np.linalg.norm(vecs, axis=0)

    # Inside a numerically degenerate eigenvalue cluster any basis is an
    # equally valid eigenbasis; rotate so at most one member carries trace.
    # Without this, an exactly unitary G returns trace-mixed vectors for its
    # doubly degenerate unit eigenvalue and the transient set is polluted.
    traces = vecs[diag_idx].sum(axis=0)
    for i in range(n2):
        for j in range(i + 1, n2):
            if abs(lam[i] - lam[j]) < degeneracy_tol:
                if abs(traces[i]) > trace_tol and abs(traces[j]) > trace_tol:
                    keep, fix = (i, j) if abs(traces[i]) >= abs(traces[j]) else (j, i)
                    vecs[:, fix] -= (traces[fix] / traces[keep]) * vecs[:, keep]
                    vecs[:, fix] /= np.linalg.norm(vecs[:, fix])
                    traces = vecs[diag_idx].sum(axis=0)

    vecs = _fix_phases(vecs)
    traces = vecs[diag_idx].sum(axis=0)

    candidates = [k for k in range(n2) if abs(traces[k]) > trace_tol]
    if not candidates:
        raise NoSteadyStateError("no steady state found: no trace-carrying eigenmatrix")
    steady = min(candidates, key=lambda k: abs(lam[k] - 1.0))
    if abs(lam[steady] - 1.0) > 1e-6:
        raise NoSteadyStateError(
            f"no steady state found: nearest trace-carrying eigenvalue is {lam[steady]}"
        )

    order = np.lexsort((lam.imag, -lam.real))
    lam = lam[order]
    vecs = vecs[:, order]
    steady = int(np.nonzero(order == steady)[0][0])
    return PropagatorSpectrum(
        g_matrix=g, eigenvalues=lam, eigenmatrices=vecs, steady_index=steady
    )


def spectrum(
    g: np.ndarray,
    degeneracy_tol: float = 1e-10,
    trace_tol: float = 1e-8,
) -> PropagatorSpectrum:
    """Full non-symmetric eigendecomposition of a propagator matrix."""
    g = np.asarray(g, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise ValueError("spectrum expects a square matrix")
    lam, vecs = np.linalg.eig(g)
    return _spectrum_from_eig(g, lam, vecs, degeneracy_tol, trace_tol)


def spectrum_batch(gs: np.ndarray) -> list[PropagatorSpectrum]:
    """spectrum() over a stack of propagators, one batched eigensolve."""
    gs = np.asarray(gs, dtype=complex)
    lams, vecss = np.linalg.eig(gs)
    return [
        _spectrum_from_eig(gs[k], lams[k], vecss[k].copy(), 1e-10, 1e-8)
        for k in range(gs.shape[0])
    ]


def propagate_states(g: np.ndarray, rhos: np.ndarray) -> np.ndarray:
    """Apply a propagator to a stack of density matrices (..., N, N)."""
    from .liouvillian import devectorize, vectorize

    return devectorize(vectorize(rhos) @ np.asarray(g).T)
