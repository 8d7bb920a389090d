"""Operators, periodic schedules, and problem definitions for a driven, damped qubit.

Units: the bare Rabi scale J is 1 throughout; dissipator strengths gamma and
modulation frequencies Omega are quoted in units of J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

CONSTANT = "constant"
OFFSET_COSINE = "offset-cosine"
SQUARE = "square"

DISSIPATORS = ("minus", "z")
FAMILIES = ("drive-cos", "drive-square", "diss-cos", "diss-square")

_PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
    # "minus" is the decay operator whose fixed point is the s_z = +1 pole,
    # i.e. the b-vector of the Bloch equation points along +z.  Swapping
    # minus/plus only relabels the basis and leaves every phase diagram alike.
    "minus": np.array([[0, 1], [0, 0]], dtype=complex),
    "plus": np.array([[0, 0], [1, 0]], dtype=complex),
    "identity": np.eye(2, dtype=complex),
}


class ModelError(ValueError):
    """A model definition violates its invariants."""

    def __init__(self, violations):
        if isinstance(violations, str):
            violations = [violations]
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


def pauli(name: str) -> np.ndarray:
    """Return a fresh copy of a named qubit operator (x, y, z, plus, minus, identity)."""
    try:
        return _PAULI[name].copy()
    except KeyError:
        raise ModelError(f"unknown operator name: {name!r}") from None


@dataclass(frozen=True)
class PeriodicSchedule:
    """A T-periodic scalar coefficient c(t).

    kind "constant":       c(t) = base
    kind "offset-cosine":  c(t) = (base/2) * [(2 - delta) + delta cos(Omega t)]
    kind "square":         c(t) = base on the first duty*T of each period, else 0
    """

    kind: str
    base: float
    delta: float = 0.0
    omega: float | None = None
    duty: float = 0.5

    def __post_init__(self):
        if self.kind not in (CONSTANT, OFFSET_COSINE, SQUARE):
            raise ModelError(f"unknown schedule kind: {self.kind!r}")
        if self.kind != CONSTANT:
            if self.omega is None or not self.omega > 0:
                raise ModelError("modulated schedule needs omega > 0")
        if self.kind == SQUARE and not 0.0 < self.duty < 1.0:
            raise ModelError("square-wave duty must lie in (0, 1)")

    @classmethod
    def constant(cls, base: float) -> "PeriodicSchedule":
        return cls(CONSTANT, float(base))

    @classmethod
    def offset_cosine(cls, base: float, delta: float, omega: float) -> "PeriodicSchedule":
        return cls(OFFSET_COSINE, float(base), delta=float(delta), omega=float(omega))

    @classmethod
    def square_wave(cls, base: float, omega: float, duty: float = 0.5) -> "PeriodicSchedule":
        return cls(SQUARE, float(base), omega=float(omega), duty=float(duty))

    @property
    def period(self) -> float | None:
        return None if self.omega is None else 2.0 * math.pi / self.omega

    @property
    def is_static(self) -> bool:
        return self.kind == CONSTANT or (self.kind == OFFSET_COSINE and self.delta == 0.0)

    @property
    def is_piecewise_constant(self) -> bool:
        return self.kind in (CONSTANT, SQUARE) or self.is_static

    def value(self, t: float) -> float:
        """Waveform value at time t (exact, no interpolation)."""
        if self.kind == CONSTANT:
            return self.base
        phase = self.omega * t
        if self.kind == OFFSET_COSINE:
            return 0.5 * self.base * ((2.0 - self.delta) + self.delta * math.cos(phase))
        frac = phase / (2.0 * math.pi)
        frac -= math.floor(frac)
        return self.base if frac < self.duty else 0.0

    def values(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        if self.kind == CONSTANT:
            return np.full(t.shape, self.base)
        phase = self.omega * t
        if self.kind == OFFSET_COSINE:
            return 0.5 * self.base * ((2.0 - self.delta) + self.delta * np.cos(phase))
        frac = phase / (2.0 * np.pi)
        frac -= np.floor(frac)
        return np.where(frac < self.duty, self.base, 0.0)

    def average(self) -> float:
        """Exact mean over one period."""
        if self.kind == CONSTANT:
            return self.base
        if self.kind == OFFSET_COSINE:
            return 0.5 * self.base * (2.0 - self.delta)
        return self.base * self.duty

    def min_value(self) -> float:
        """Exact minimum over one period."""
        if self.kind == CONSTANT:
            return self.base
        if self.kind == OFFSET_COSINE:
            lo = 0.5 * self.base * (2.0 - self.delta - abs(self.delta))
            hi = 0.5 * self.base * (2.0 - self.delta + abs(self.delta))
            return min(lo, hi)
        return min(self.base, 0.0)

    def breakpoints(self) -> tuple[float, ...]:
        """Discontinuity phases within one period, as fractions of T."""
        if self.kind == SQUARE:
            return (0.0, self.duty)
        return ()


@dataclass(frozen=True)
class LindbladModel:
    """A qubit (or generic N-level) master-equation problem.

    The Hamiltonian is hamiltonian_schedule(t) * hamiltonian_op, and each
    dissipator is a (jump operator, strength schedule) pair.  A single
    modulation frequency governs every schedule; purely static models carry
    it as reference_omega so a one-period propagator is still defined.
    """

    hamiltonian_op: np.ndarray
    hamiltonian_schedule: PeriodicSchedule
    dissipators: tuple[tuple[np.ndarray, PeriodicSchedule], ...] = ()
    reference_omega: float | None = None

    def __post_init__(self):
        object.__setattr__(self, "hamiltonian_op", np.asarray(self.hamiltonian_op, dtype=complex))
        frozen = []
        for op, sched in self.dissipators:
            frozen.append((np.asarray(op, dtype=complex), sched))
        object.__setattr__(self, "dissipators", tuple(frozen))

    @property
    def dim(self) -> int:
        return self.hamiltonian_op.shape[0]

    @property
    def schedules(self) -> tuple[PeriodicSchedule, ...]:
        return (self.hamiltonian_schedule,) + tuple(s for _, s in self.dissipators)

    @property
    def omega(self) -> float:
        """The common modulation frequency (reference_omega for static models)."""
        for sched in self.schedules:
            if sched.omega is not None:
                return sched.omega
        if self.reference_omega is not None:
            return self.reference_omega
        raise ModelError("static model has no reference omega")

    @property
    def period(self) -> float:
        return 2.0 * math.pi / self.omega

    @property
    def is_piecewise_constant(self) -> bool:
        return all(s.is_piecewise_constant for s in self.schedules)

    def max_gamma(self) -> float:
        """Largest dissipator strength reached over one period."""
        peak = 0.0
        for _, sched in self.dissipators:
            peak = max(peak, abs(sched.base))
        return peak

    def breakpoints(self) -> tuple[float, ...]:
        """Sorted union of schedule discontinuities, as fractions of T."""
        pts = set()
        for sched in self.schedules:
            pts.update(sched.breakpoints())
        return tuple(sorted(pts))


def model_violations(model: LindbladModel) -> list[str]:
    """List every invariant violation of the model (empty list when valid)."""
    out = []
    h = model.hamiltonian_op
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        out.append("Hamiltonian operator is not square")
    elif np.abs(h - h.conj().T).max() > 1e-12:
        out.append("non-Hermitian Hamiltonian")
    for k, (op, sched) in enumerate(model.dissipators):
        if op.shape != h.shape:
            out.append(f"dissipator {k} has mismatched shape")
        if sched.min_value() < 0.0:
            out.append(f"negative dissipation (dissipator {k})")
    omegas = [s.omega for s in model.schedules if s.omega is not None]
    for om in omegas[1:]:
        if not math.isclose(om, omegas[0], rel_tol=1e-12, abs_tol=0.0):
            out.append("mismatched modulation frequency")
            break
    if not omegas and model.reference_omega is None:
        out.append("static model without reference omega")
    return out


def validate_model(model: LindbladModel) -> LindbladModel:
    """Return the model unchanged, or raise ModelError listing all violations."""
    violations = model_violations(model)
    if violations:
        raise ModelError(violations)
    return model


def _dissipator_op(name: str) -> np.ndarray:
    if name not in DISSIPATORS:
        raise ModelError(f"unknown dissipator: {name!r} (expected one of {DISSIPATORS})")
    return pauli(name)


def build_family_model(
    family: str,
    dissipator: str,
    gamma: float,
    omega: float,
    delta: float = 1.0,
    duty: float = 0.5,
) -> LindbladModel:
    """Build one of the four modulation families at a (gamma, omega) point.

    drive-cos / drive-square modulate the Rabi amplitude J(t) with a constant
    dissipator strength; diss-cos / diss-square keep J = 1 and modulate the
    strength gamma(t).  The cosine dissipator modulation is the half-depth
    offset cosine (gamma/2)(1 + cos Omega t), i.e. delta = 1 with mean gamma/2.
    """
    op = _dissipator_op(dissipator)
    if family == "drive-cos":
        j_sched = PeriodicSchedule.offset_cosine(1.0, delta, omega)
        g_sched = PeriodicSchedule.constant(gamma)
    elif family == "drive-square":
        j_sched = PeriodicSchedule.square_wave(1.0, omega, duty)
        g_sched = PeriodicSchedule.constant(gamma)
    elif family == "diss-cos":
        j_sched = PeriodicSchedule.constant(1.0)
        g_sched = PeriodicSchedule.offset_cosine(gamma, 1.0, omega)
    elif family == "diss-square":
        j_sched = PeriodicSchedule.constant(1.0)
        g_sched = PeriodicSchedule.square_wave(gamma, omega, duty)
    else:
        raise ModelError(f"unknown family: {family!r} (expected one of {FAMILIES})")
    return validate_model(
        LindbladModel(
            hamiltonian_op=-pauli("x"),
            hamiltonian_schedule=j_sched,
            dissipators=((op, g_sched),),
        )
    )


def static_model(dissipator: str, gamma: float, reference_omega: float = 4.0 * math.pi) -> LindbladModel:
    """Constant drive J = 1 and constant dissipation; the reference omega only
    fixes the (otherwise arbitrary) stroboscopic period."""
    op = _dissipator_op(dissipator)
    return validate_model(
        LindbladModel(
            hamiltonian_op=-pauli("x"),
            hamiltonian_schedule=PeriodicSchedule.constant(1.0),
            dissipators=((op, PeriodicSchedule.constant(gamma)),),
            reference_omega=reference_omega,
        )
    )


def with_gamma(model: LindbladModel, gamma: float) -> LindbladModel:
    """Copy of the model with every dissipator base strength replaced."""
    new = tuple((op, replace(s, base=float(gamma))) for op, s in model.dissipators)
    return replace(model, dissipators=new)
