"""Vectorization and the N^2 x N^2 Liouvillian matrix of the master equation.

Column stacking is used throughout: entry (m, n) of rho sits at component
m + N*n of the vectorized state, so that A rho B maps to (B^T kron A).
With that convention the generator reads

    L(t) = -i [1 kron H(t) - H(t)^T kron 1]
           - sum_k gamma_k(t)/2 [1 kron Fk'Fk + (Fk'Fk)^T kron 1 - 2 Fk* kron Fk]

which preserves the trace (vec(1)^dag L = 0) and is anti-Hermitian when all
gamma_k vanish.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import LindbladModel, validate_model


def vectorize(rho: np.ndarray) -> np.ndarray:
    """Stack the columns of a square matrix into a vector."""
    rho = np.asarray(rho)
    n = rho.shape[-1]
    if rho.shape[-2] != n:
        raise ValueError("vectorize expects a square matrix")
    return np.swapaxes(rho, -1, -2).reshape(rho.shape[:-2] + (n * n,))


def devectorize(vec: np.ndarray) -> np.ndarray:
    """Inverse of vectorize."""
    vec = np.asarray(vec)
    n = int(round(vec.shape[-1] ** 0.5))
    if n * n != vec.shape[-1]:
        raise ValueError("vector length is not a perfect square")
    return np.swapaxes(vec.reshape(vec.shape[:-1] + (n, n)), -1, -2)


def coherent_superop(h: np.ndarray) -> np.ndarray:
    """Superoperator of -i[H, .] for vectorized states."""
    h = np.asarray(h, dtype=complex)
    eye = np.eye(h.shape[0], dtype=complex)
    return -1j * (np.kron(eye, h) - np.kron(h.T, eye))


def dissipator_superop(f: np.ndarray) -> np.ndarray:
    """Superoperator of the unit-strength jump channel of operator F.

    Acting on rho this is F rho F' - (F'F rho + rho F'F)/2.
    """
    f = np.asarray(f, dtype=complex)
    eye = np.eye(f.shape[0], dtype=complex)
    fdf = f.conj().T @ f
    return -0.5 * (np.kron(eye, fdf) + np.kron(fdf.T, eye) - 2.0 * np.kron(f.conj(), f))


@dataclass(frozen=True)
class ModelGenerators:
    """Cached constant parts of L(t): L(t) = J(t) * h_part + sum_k gamma_k(t) * diss_parts[k]."""

    model: LindbladModel
    h_part: np.ndarray
    diss_parts: tuple[np.ndarray, ...]

    @classmethod
    def from_model(cls, model: LindbladModel) -> "ModelGenerators":
        validate_model(model)
        h_part = coherent_superop(model.hamiltonian_op)
        diss_parts = tuple(dissipator_superop(op) for op, _ in model.dissipators)
        return cls(model=model, h_part=h_part, diss_parts=diss_parts)

    def at(self, t: float) -> np.ndarray:
        out = self.model.hamiltonian_schedule.value(t) * self.h_part
        for part, (_, sched) in zip(self.diss_parts, self.model.dissipators):
            out = out + sched.value(t) * part
        return out

    def stack(self, times: np.ndarray) -> np.ndarray:
        """L(t) for an array of times, shape (len(times), N^2, N^2)."""
        times = np.asarray(times, dtype=float)
        j = self.model.hamiltonian_schedule.values(times)
        out = j[:, None, None] * self.h_part[None]
        for part, (_, sched) in zip(self.diss_parts, self.model.dissipators):
            out += sched.values(times)[:, None, None] * part[None]
        return out


def assemble_liouvillian(model: LindbladModel, t: float) -> np.ndarray:
    """The N^2 x N^2 Liouvillian matrix L(t)."""
    return ModelGenerators.from_model(model).at(t)


def postselected_hamiltonian(model: LindbladModel, t: float = 0.0) -> np.ndarray:
    """Effective non-Hermitian Hamiltonian of the no-jump trajectories,

        H_nH(t) = H(t) - (i/2) sum_k gamma_k(t) Fk'Fk.

    Its degeneracies are distinct from those of the full generator: for the
    decay channel they sit at half the bare Rabi splitting (gamma = 4 J),
    while the pure-dephasing channel produces none at all.
    """
    validate_model(model)
    h = model.hamiltonian_schedule.value(t) * model.hamiltonian_op
    for op, sched in model.dissipators:
        h = h - 0.5j * sched.value(t) * (op.conj().T @ op)
    return h
