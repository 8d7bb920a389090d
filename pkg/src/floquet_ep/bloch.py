"""Bloch-vector reduction of the driven, damped qubit.

With rho = (1 + s . sigma)/2 the master equation becomes the real affine ODE
ds/dt = A(t) s + b(t), with

    A(t) = -[[gm/2 + 2 gz, 0,      0   ],
             [0,           gm/2 + 2 gz, -2 J],
             [0,           2 J,         gm  ]](t),     b(t) = [0, 0, gm(t)]

for decay strength gm(t) and dephasing strength gz(t).  A is block diagonal
(s_x decouples), so the one-period map B(T) carries one scalar eigenvalue
lambda_1 = exp(int A_11 dt) and a 2x2 block whose degeneracies are the
exceptional points.  This 3x3 route never touches the vectorized generator
and serves as an independent cross-check of the 4x4 pipeline.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from itertools import permutations

import numpy as np

from .expm import expm_batch, ordered_product
from .model import LindbladModel, PeriodicSchedule, pauli, validate_model
from .propagator import ConvergenceError, one_period_propagator, richardson_propagator


class BlochReductionError(ValueError):
    """The model is outside the scope of the 3-vector reduction."""


_ZERO = PeriodicSchedule.constant(0.0)


@dataclass(frozen=True)
class BlochSystem:
    """Coefficient schedules of ds/dt = A(t) s + b(t) for one qubit model."""

    model: LindbladModel
    j_schedule: PeriodicSchedule
    gamma_minus: PeriodicSchedule
    gamma_z: PeriodicSchedule

    @property
    def period(self) -> float:
        return self.model.period

    @property
    def omega(self) -> float:
        return self.model.omega

    def a_of_t(self, t: float) -> np.ndarray:
        return self._a_stack(np.array([t]))[0]

    def b_of_t(self, t: float) -> np.ndarray:
        return np.array([0.0, 0.0, self.gamma_minus.value(t)])

    def _a_stack(self, times: np.ndarray) -> np.ndarray:
        j = self.j_schedule.values(times)
        gm = self.gamma_minus.values(times)
        gz = self.gamma_z.values(times)
        a = np.zeros(times.shape + (3, 3))
        a[..., 0, 0] = -(gm / 2 + 2 * gz)
        a[..., 1, 1] = -(gm / 2 + 2 * gz)
        a[..., 1, 2] = 2 * j
        a[..., 2, 1] = -2 * j
        a[..., 2, 2] = -gm
        return a

    def _augmented_stack(self, times: np.ndarray) -> np.ndarray:
        """[[A(t), b(t)], [0, 0]] so one exponential advances the affine flow."""
        aug = np.zeros(times.shape + (4, 4))
        aug[..., :3, :3] = self._a_stack(times)
        aug[..., 2, 3] = self.gamma_minus.values(times)
        return aug


def bloch_system(model: LindbladModel) -> BlochSystem:
    """Reduce a qubit model with H = -J(t) sigma_x and decay/dephasing channels."""
    validate_model(model)
    if model.dim != 2 or not np.allclose(model.hamiltonian_op, -pauli("x"), atol=1e-12):
        raise BlochReductionError("no Bloch reduction: Hamiltonian is not -J(t) sigma_x")
    gm = gz = None
    for op, sched in model.dissipators:
        if np.allclose(op, pauli("minus"), atol=1e-12) and gm is None:
            gm = sched
        elif np.allclose(op, pauli("z"), atol=1e-12) and gz is None:
            gz = sched
        else:
            raise BlochReductionError("no Bloch reduction: unsupported dissipator")
    return BlochSystem(
        model=model,
        j_schedule=model.hamiltonian_schedule,
        gamma_minus=gm or _ZERO,
        gamma_z=gz or _ZERO,
    )


@dataclass(frozen=True)
class BlochPropagator:
    """One-period affine map s(T) = B s(0) + c, plus the decoupled eigenvalue."""

    b_matrix: np.ndarray
    affine_part: np.ndarray
    lambda1: float

    def block(self) -> np.ndarray:
        return self.b_matrix[1:, 1:]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvals(self.b_matrix)

    def steady_state(self) -> np.ndarray:
        return np.linalg.solve(np.eye(3) - self.b_matrix, self.affine_part)


def _aug_segment_product(sys: BlochSystem) -> np.ndarray:
    period = sys.period
    edges = list(sys.model.breakpoints()) + [1.0]
    if edges[0] != 0.0:
        edges.insert(0, 0.0)
    mids = np.array([(a + b) / 2.0 for a, b in zip(edges[:-1], edges[1:])]) * period
    lengths = np.diff(np.array(edges)) * period
    return ordered_product(expm_batch(lengths[:, None, None] * sys._augmented_stack(mids)))


def _aug_midpoint_product(sys: BlochSystem, n: int) -> np.ndarray:
    period = sys.period
    dt = period / n
    out = np.eye(4)
    chunk = 1 << 16
    for start in range(0, n, chunk):
        stop = min(start + chunk, n)
        times = (np.arange(start, stop) + 0.5) * dt
        out = ordered_product(expm_batch(dt * sys._augmented_stack(times))) @ out
    return out


def _lambda1(sys: BlochSystem) -> float:
    mean_a11 = -(sys.gamma_minus.average() / 2 + 2 * sys.gamma_z.average())
    return math.exp(sys.period * mean_a11)


def bloch_propagator(
    sys: BlochSystem,
    steps: int | str = "auto",
    tol: float = 1e-10,
    max_steps: int = 1 << 20,
) -> BlochPropagator:
    """One-period Bloch map by the same segment-exact / midpoint-doubling scheme
    as the vectorized propagator."""
    if isinstance(steps, int):
        aug = _aug_midpoint_product(sys, steps)
    elif steps != "auto":
        raise ValueError("steps must be an integer or 'auto'")
    elif sys.model.is_piecewise_constant:
        aug = _aug_segment_product(sys)
    else:
        n = 64
        g_n = _aug_midpoint_product(sys, n)
        aug = prev = None
        last_delta = math.inf
        while 2 * n <= max_steps:
            g_2n = _aug_midpoint_product(sys, 2 * n)
            refined = (4.0 * g_2n - g_n) / 3.0
            if prev is not None:
                last_delta = float(np.abs(refined - prev).max())
                if last_delta < tol:
                    aug = refined
                    break
            prev = refined
            g_n = g_2n
            n *= 2
        if aug is None:
            raise ConvergenceError(last_delta, n)
    return BlochPropagator(
        b_matrix=aug[:3, :3], affine_part=aug[:3, 3], lambda1=_lambda1(sys)
    )


def bloch_richardson(sys: BlochSystem, steps: int) -> BlochPropagator:
    """Fixed-base-count step-doubling extrapolation of the Bloch map."""
    if sys.model.is_piecewise_constant:
        aug = _aug_segment_product(sys)
    else:
        aug = (4.0 * _aug_midpoint_product(sys, 2 * steps) - _aug_midpoint_product(sys, steps)) / 3.0
    return BlochPropagator(
        b_matrix=aug[:3, :3], affine_part=aug[:3, 3], lambda1=_lambda1(sys)
    )


@dataclass(frozen=True)
class CrosscheckReport:
    """Result of comparing eig(G) against {1} + eig(B) for one model."""

    max_deviation: float
    liouvillian_eigenvalues: np.ndarray
    bloch_eigenvalues: np.ndarray
    tolerance: float

    @property
    def ok(self) -> bool:
        return self.max_deviation < self.tolerance


def _match_max_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Min over pairings of the max pairwise distance (optimal for 4 items)."""
    best = math.inf
    for perm in permutations(range(len(a))):
        worst = max(abs(a[list(perm)][k] - b[k]) for k in range(len(b)))
        best = min(best, worst)
    return float(best)


def spectral_crosscheck(
    model: LindbladModel,
    steps: int | str = "auto",
    tolerance: float = 1e-8,
) -> CrosscheckReport:
    """Check that the 4x4 and 3x3 one-period maps carry the same spectrum.

    The vectorized propagator acts block-triangularly on (trace, s), so its
    spectrum must be exactly {1} union eig(B(T)).  Integer steps uses the
    fixed-count extrapolated product on both routes.
    """
    sys = bloch_system(model)
    if isinstance(steps, int):
        g = richardson_propagator(model, steps)
        b = bloch_richardson(sys, steps)
    else:
        g = one_period_propagator(model, steps="auto")
        b = bloch_propagator(sys, steps="auto")
    eig_g = np.sort_complex(np.linalg.eigvals(g))
    eig_b = np.sort_complex(np.concatenate([[1.0 + 0.0j], b.eigenvalues()]))
    return CrosscheckReport(
        max_deviation=_match_max_distance(eig_g, eig_b),
        liouvillian_eigenvalues=eig_g,
        bloch_eigenvalues=eig_b,
        tolerance=tolerance,
    )


def trajectory(
    sys: BlochSystem,
    s0: np.ndarray,
    t_end: float,
    sample_dt: float,
    stroboscopic: bool = False,
) -> tuple[np.ndarray, np.ndarray]:
    """Integrate ds/dt = A(t) s + b(t) and return (times, states).

    Stroboscopic sampling snaps to exact integer multiples of the period and
    reuses the one-period affine map, so phase drift cannot accumulate over
    long runs; otherwise samples sit at multiples of sample_dt and each
    interval is integrated on a fine midpoint grid split at the waveform
    discontinuities.
    """
    if sample_dt <= 0:
        raise ValueError("sample_dt must be positive")
    s0 = np.asarray(s0, dtype=float)
    if s0.shape != (3,):
        raise ValueError("s0 must be a 3-vector")
    if np.linalg.norm(s0) > 1.0 + 1e-9:
        raise ValueError("s0 lies outside the Bloch ball")

    period = sys.period
    if stroboscopic:
        n_samples = int(math.floor(t_end / period + 1e-9)) + 1
        times = period * np.arange(n_samples)
        prop = bloch_propagator(sys, steps="auto")
        states = np.empty((n_samples, 3))
        s = s0.copy()
        for k in range(n_samples):
            states[k] = s
            s = prop.b_matrix @ s + prop.affine_part
        return times, states

    n_samples = int(math.floor(t_end / sample_dt + 1e-9)) + 1
    times = sample_dt * np.arange(n_samples)
    breaks = sys.model.breakpoints()
    h = min(sample_dt, period) / 16.0
    states = np.empty((n_samples, 3))
    states[0] = s0
    y = np.append(s0, 1.0)
    for k in range(1, n_samples):
        t0, t1 = times[k - 1], times[k]
        edges = set(np.linspace(t0, t1, int(math.ceil((t1 - t0) / h)) + 1))
        for frac in breaks:
            m0 = math.ceil((t0 / period) - frac - 1e-12)
            while (t := (m0 + frac) * period) < t1 - 1e-12 * period:
                if t > t0 + 1e-12 * period:
                    edges.add(t)
                m0 += 1
        grid = np.array(sorted(edges))
        mids = 0.5 * (grid[:-1] + grid[1:])
        lengths = np.diff(grid)
        step = ordered_product(
            expm_batch(lengths[:, None, None] * sys._augmented_stack(mids))
        )
        y = step @ y
        states[k] = y[:3]
    return times, states


def write_trajectory_csv(path, times: np.ndarray, states: np.ndarray) -> None:
    """CSV columns t, s_x, s_y, s_z with shortest round-trip float formatting."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t", "s_x", "s_y", "s_z"])
        for t, (sx, sy, sz) in zip(times, states):
            writer.writerow([repr(float(t)), repr(float(sx)), repr(float(sy)), repr(float(sz))])
