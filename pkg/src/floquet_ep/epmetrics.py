"""Coalescence metric and damping classification for a propagator spectrum.

The degeneracies of interest are those of the *transient* (trace-zero)
eigenmatrices; the maximum pairwise overlap of the normalized transients
reaches 1 exactly when two of them coalesce, i.e. at an exceptional point.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .propagator import PropagatorSpectrum

OVERDAMPED = "overdamped"
UNDERDAMPED = "underdamped"

EP_THRESHOLD = 0.999
REALITY_TOL = 1e-9
DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class EpObservables:
    """Per-parameter-point summary used by the phase-diagram sweeps."""

    ip: float
    damping: str
    n_real_transients: int
    eigenvalues: np.ndarray
    degenerate: bool


def inner_product_metric(spec: PropagatorSpectrum) -> float:
    """Largest |<rho_m|rho_n>| over unordered pairs of transient eigenmatrices."""
    idx = list(spec.transient_indices)
    if len(idx) < 2:
        raise ValueError("need at least two transient eigenmatrices")
    v = spec.eigenmatrices[:, idx]
    overlaps = np.abs(v.conj().T @ v)
    np.fill_diagonal(overlaps, 0.0)
    return float(overlaps.max())


def n_real_transients(spec: PropagatorSpectrum, reality_tol: float = REALITY_TOL) -> int:
    lam = spec.transient_eigenvalues
    return int(np.sum(np.abs(lam.imag) < reality_tol * np.maximum(1.0, np.abs(lam))))


def classify_damping(spec: PropagatorSpectrum, reality_tol: float = REALITY_TOL) -> str:
    """overdamped iff every transient eigenvalue is real (within reality_tol)."""
    n_t = len(spec.transient_indices)
    return OVERDAMPED if n_real_transients(spec, reality_tol) == n_t else UNDERDAMPED


def is_ep(spec: PropagatorSpectrum, threshold: float = EP_THRESHOLD) -> bool:
    return inner_product_metric(spec) >= threshold


def evaluate_spectrum(
    spec: PropagatorSpectrum,
    gamma_scale: float = 0.0,
    reality_tol: float = REALITY_TOL,
) -> EpObservables:
    """Bundle IP, damping, and reliability flags for one spectrum.

    At vanishing dissipation the propagator is normal and exact eigenvalue
    collisions (the unitary resonances) make the eigenvector basis arbitrary
    within the degenerate subspace, so the IP value carries no information
    there; such points are flagged degenerate rather than suppressed.
    """
    lam_t = spec.transient_eigenvalues
    gaps = np.abs(lam_t[:, None] - lam_t[None, :])[np.triu_indices(len(lam_t), k=1)]
    degenerate = bool(gamma_scale < 1e-10 and gaps.size and gaps.min() < DEGENERACY_TOL)
    return EpObservables(
        ip=inner_product_metric(spec),
        damping=classify_damping(spec, reality_tol),
        n_real_transients=n_real_transients(spec, reality_tol),
        eigenvalues=spec.eigenvalues,
        degenerate=degenerate,
    )
