"""Phase-diagram sweeps: IP(gamma, omega) grids, contour extraction, CSV output.

Grid cells are independent; work is partitioned by omega column, each column
is evaluated as one batched stack of small matrices, and results are written
back by cell index so the output is deterministic for any worker count.
"""

from __future__ import annotations

import csv
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .epmetrics import evaluate_spectrum
from .expm import expm_batch, ordered_product
from .liouvillian import ModelGenerators
from .model import DISSIPATORS, FAMILIES, build_family_model
from .propagator import _spectrum_from_eig

FLAG_DEGENERATE = 1
FLAG_TINY = 2
FLAG_ERROR = 4
_FLAG_TOKENS = ((FLAG_DEGENERATE, "degenerate"), (FLAG_TINY, "tiny-transient"), (FLAG_ERROR, "error"))

# Transient eigenvalues below this magnitude sit under the double-precision
# noise floor of the propagator entries; their eigenvectors, and hence IP,
# are meaningless there.
TINY_LAMBDA = 1e-9

CSV_HEADER = (
    ["gamma", "omega", "ip", "damping", "n_real_transients"]
    + [f"lambda_re_{k}" for k in range(1, 5)]
    + [f"lambda_im_{k}" for k in range(1, 5)]
    + ["flags"]
)


@dataclass(frozen=True)
class SweepSpec:
    """A rectangular (gamma, omega) grid for one modulation family.

    Ranges are (lo, hi, count) with inclusive endpoints.  steps is the base
    midpoint count for smooth schedules (one doubling extrapolation is
    applied); square-wave families are evaluated exactly and ignore it.
    """

    family: str
    dissipator: str
    gamma: tuple[float, float, int]
    omega: tuple[float, float, int]
    delta: float = 1.0
    duty: float = 0.5
    steps: int = 512

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.dissipator not in DISSIPATORS:
            raise ValueError(f"unknown dissipator {self.dissipator!r}")
        for name, (lo, hi, count) in (("gamma", self.gamma), ("omega", self.omega)):
            if count < 2:
                raise ValueError(f"{name} count must be >= 2")
            if not lo < hi:
                raise ValueError(f"{name} range needs lo < hi")
        if self.gamma[0] < 0:
            raise ValueError("gamma must be nonnegative")
        if self.omega[0] <= 0:
            raise ValueError("omega must be positive")
        if self.steps < 1:
            raise ValueError("steps must be positive")

    def gammas(self) -> np.ndarray:
        lo, hi, count = self.gamma
        return np.linspace(lo, hi, count)

    def omegas(self) -> np.ndarray:
        lo, hi, count = self.omega
        return np.linspace(lo, hi, count)

    def to_dict(self) -> dict:
        return {
            "family": self.family,
            "dissipator": self.dissipator,
            "gamma": list(self.gamma),
            "omega": list(self.omega),
            "delta": self.delta,
            "duty": self.duty,
            "steps": self.steps,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SweepSpec":
        return cls(
            family=data["family"],
            dissipator=data["dissipator"],
            gamma=tuple(data["gamma"]),
            omega=tuple(data["omega"]),
            delta=data.get("delta", 1.0),
            duty=data.get("duty", 0.5),
            steps=data.get("steps", 512),
        )


@dataclass
class PhaseDiagram:
    """Per-cell sweep results on the (gamma, omega) grid (gamma indexes rows)."""

    spec: SweepSpec
    gammas: np.ndarray
    omegas: np.ndarray
    ip: np.ndarray
    n_real: np.ndarray
    flags: np.ndarray
    eigenvalues: np.ndarray

    def damping_label(self, i: int, j: int) -> str:
        n = self.n_real[i, j]
        if n < 0:
            return ""
        return "overdamped" if n == self.eigenvalues.shape[-1] - 1 else "underdamped"


def _family_parts(family, dissipator, delta, duty, omega):
    model = build_family_model(family, dissipator, 1.0, omega, delta, duty)
    gen = ModelGenerators.from_model(model)
    return gen.h_part, gen.diss_parts[0]


def column_propagators(
    family: str,
    dissipator: str,
    omega: float,
    gammas: np.ndarray,
    delta: float = 1.0,
    duty: float = 0.5,
    steps: int = 512,
) -> np.ndarray:
    """One-period propagators for a whole gamma column at fixed omega."""
    lh, dpart = _family_parts(family, dissipator, delta, duty, omega)
    gammas = np.asarray(gammas, dtype=float)
    period = 2.0 * math.pi / omega
    g_scaled = gammas[:, None, None] * dpart

    if family == "drive-square":
        on = expm_batch(duty * period * (lh[None] + g_scaled))
        off = expm_batch((1.0 - duty) * period * g_scaled)
        return off @ on
    if family == "diss-square":
        on = expm_batch(duty * period * (lh[None] + g_scaled))
        off = expm_batch((1.0 - duty) * period * lh)
        return off @ on

    def raw(n: int) -> np.ndarray:
        dt = period / n
        out = np.broadcast_to(np.eye(4, dtype=complex), (len(gammas), 4, 4)).copy()
        chunk = max(1, (1 << 18) // max(1, len(gammas)))
        for start in range(0, n, chunk):
            stop = min(start + chunk, n)
            t_mid = (np.arange(start, stop) + 0.5) * dt
            if family == "drive-cos":
                j = 0.5 * ((2.0 - delta) + delta * np.cos(omega * t_mid))
                stack = j[:, None, None, None] * lh + g_scaled[None]
            else:  # diss-cos
                w = 0.5 * (1.0 + np.cos(omega * t_mid))
                stack = lh[None, None] + w[:, None, None, None] * g_scaled[None]
            exps = expm_batch(dt * stack.reshape(-1, 4, 4)).reshape(stop - start, len(gammas), 4, 4)
            out = ordered_product(exps) @ out
        return out

    # Midpoint rule has an even-power error expansion: one doubling
    # extrapolation buys fourth-order accuracy at these step counts.
    return (4.0 * raw(2 * steps) - raw(steps)) / 3.0


def column_cells(
    family: str,
    dissipator: str,
    omega: float,
    gammas: np.ndarray,
    delta: float = 1.0,
    duty: float = 0.5,
    steps: int = 512,
):
    """(ip, n_real, flags, eigenvalues) arrays for one gamma column."""
    gammas = np.asarray(gammas, dtype=float)
    m = len(gammas)
    ip = np.full(m, np.nan)
    n_real = np.full(m, -1, dtype=np.int16)
    flags = np.zeros(m, dtype=np.uint8)
    lams = np.full((m, 4), np.nan, dtype=complex)
    gs = column_propagators(family, dissipator, omega, gammas, delta, duty, steps)
    eigvals, eigvecs = np.linalg.eig(gs)
    for i in range(m):
        try:
            sp = _spectrum_from_eig(gs[i], eigvals[i], eigvecs[i].copy(), 1e-10, 1e-8)
            obs = evaluate_spectrum(sp, gamma_scale=gammas[i])
        except Exception:
            flags[i] |= FLAG_ERROR
            continue
        ip[i] = obs.ip
        n_real[i] = obs.n_real_transients
        lams[i] = sp.eigenvalues
        if obs.degenerate:
            flags[i] |= FLAG_DEGENERATE
        if np.abs(sp.transient_eigenvalues).min() < TINY_LAMBDA:
            flags[i] |= FLAG_TINY
    return ip, n_real, flags, lams


_POOL_SPEC: SweepSpec | None = None


def _pool_init(spec: SweepSpec) -> None:
    global _POOL_SPEC
    _POOL_SPEC = spec


def _pool_column(j: int):
    spec = _POOL_SPEC
    return j, column_cells(
        spec.family,
        spec.dissipator,
        float(spec.omegas()[j]),
        spec.gammas(),
        spec.delta,
        spec.duty,
        spec.steps,
    )


def run_sweep(spec: SweepSpec, threads: int = 1) -> PhaseDiagram:
    """Evaluate the whole grid; per-cell failures are flagged, not fatal."""
    gammas = spec.gammas()
    omegas = spec.omegas()
    m, k = len(gammas), len(omegas)
    ip = np.full((m, k), np.nan)
    n_real = np.full((m, k), -1, dtype=np.int16)
    flags = np.zeros((m, k), dtype=np.uint8)
    lams = np.full((m, k, 4), np.nan, dtype=complex)

    def store(j, cells):
        ip[:, j], n_real[:, j], flags[:, j], lams[:, j] = cells

    if threads > 1:
        with ProcessPoolExecutor(max_workers=threads, initializer=_pool_init, initargs=(spec,)) as pool:
            for j, cells in pool.map(_pool_column, range(k)):
                store(j, cells)
    else:
        for j in range(k):
            store(
                j,
                column_cells(
                    spec.family, spec.dissipator, float(omegas[j]), gammas,
                    spec.delta, spec.duty, spec.steps,
                ),
            )
    return PhaseDiagram(
        spec=spec, gammas=gammas, omegas=omegas, ip=ip, n_real=n_real, flags=flags,
        eigenvalues=lams,
    )


def parabolic_peak(x: np.ndarray, y: np.ndarray, i: int) -> float:
    """Sub-grid peak location from a 3-point parabola around index i."""
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom >= 0.0:
        return float(x[i])
    shift = 0.5 * (y[i - 1] - y[i + 1]) / denom
    shift = min(0.5, max(-0.5, shift))
    return float(x[i] + shift * (x[i + 1] - x[i]))


def extract_contours(pd: PhaseDiagram, threshold: float = 0.999) -> np.ndarray:
    """EP contour points as an (n, 2) array of (gamma, omega).

    Per omega column, interior local maxima of IP above the threshold are
    kept (cells flagged degenerate, unresolvable, or failed are not eligible
    peaks) and refined below the grid pitch with a 3-point parabola.
    """
    points = []
    for j in range(len(pd.omegas)):
        col = pd.ip[:, j]
        good = pd.flags[:, j] == 0
        for i in range(1, len(pd.gammas) - 1):
            if not good[i] or not np.isfinite(col[i]) or col[i] < threshold:
                continue
            left = col[i - 1] if np.isfinite(col[i - 1]) else -np.inf
            right = col[i + 1] if np.isfinite(col[i + 1]) else -np.inf
            if col[i] > left and col[i] >= right:
                points.append((parabolic_peak(pd.gammas, col, i), float(pd.omegas[j])))
    return np.array(points).reshape(-1, 2)


def overdamped_width(pd: PhaseDiagram, omega_center: float) -> np.ndarray:
    """Omega-extent of the overdamped strip around omega_center, per gamma row.

    Returns an (m, 2) array of (gamma, width); width counts the contiguous
    run of overdamped cells containing the column nearest omega_center.
    """
    if not pd.omegas[0] <= omega_center <= pd.omegas[-1]:
        raise ValueError("resonance outside grid")
    j0 = int(np.argmin(np.abs(pd.omegas - omega_center)))
    d_omega = pd.omegas[1] - pd.omegas[0]
    n_tr = pd.eigenvalues.shape[-1] - 1
    out = np.zeros((len(pd.gammas), 2))
    out[:, 0] = pd.gammas
    over = pd.n_real == n_tr
    for i in range(len(pd.gammas)):
        if not over[i, j0]:
            continue
        a = j0
        while a > 0 and over[i, a - 1]:
            a -= 1
        b = j0
        while b < len(pd.omegas) - 1 and over[i, b + 1]:
            b += 1
        out[i, 1] = (b - a + 1) * d_omega
    return out


def omega_scan(
    family: str,
    dissipator: str,
    gamma: float,
    omegas: np.ndarray,
    delta: float = 1.0,
    duty: float = 0.5,
    steps: int = 512,
) -> np.ndarray:
    """IP along an omega scan at fixed gamma (square families are batched)."""
    omegas = np.asarray(omegas, dtype=float)
    if family in ("drive-square", "diss-square"):
        lh, dpart = _family_parts(family, dissipator, delta, duty, omegas[0])
        periods = 2.0 * math.pi / omegas
        dt_on = (duty * periods)[:, None, None]
        dt_off = ((1.0 - duty) * periods)[:, None, None]
        on = expm_batch(dt_on * (lh[None] + gamma * dpart[None]))
        if family == "drive-square":
            off = expm_batch(dt_off * (gamma * dpart[None]))
        else:
            off = expm_batch(dt_off * lh[None])
        gs = off @ on
        ips = np.full(len(omegas), np.nan)
        eigvals, eigvecs = np.linalg.eig(gs)
        for i in range(len(omegas)):
            try:
                sp = _spectrum_from_eig(gs[i], eigvals[i], eigvecs[i].copy(), 1e-10, 1e-8)
                obs = evaluate_spectrum(sp, gamma_scale=gamma)
            except Exception:
                continue
            if not obs.degenerate and np.abs(sp.transient_eigenvalues).min() >= TINY_LAMBDA:
                ips[i] = obs.ip
        return ips
    out = np.empty(len(omegas))
    for i, om in enumerate(omegas):
        cell = column_cells(family, dissipator, float(om), np.array([gamma]), delta, duty, steps)
        out[i] = cell[0][0] if cell[2][0] == 0 else np.nan
    return out


def find_resonance_contour_points(
    family: str,
    dissipator: str,
    gamma: float,
    omega_lo: float,
    omega_hi: float,
    coarse_points: int = 2201,
    threshold: float = 0.999,
    candidate_floor: float = 0.02,
    zoom_levels: int = 4,
    duty: float = 0.5,
) -> np.ndarray:
    """Omega positions where the EP contours cross a fixed small gamma.

    A coarse scan locates candidate IP bumps, then each candidate window is
    zoomed (41-point grids, 20x shrink per level) until the refined maximum
    either clears the EP threshold or is rejected.  Near a contour crossing
    IP rises as ~1/|omega - omega_ep| before peaking at 1, so candidates are
    admitted far below the final threshold.
    """
    coarse = np.linspace(omega_lo, omega_hi, coarse_points)
    ips = omega_scan(family, dissipator, gamma, coarse, duty=duty)
    vals = np.nan_to_num(ips, nan=-1.0)
    pitch = coarse[1] - coarse[0]
    candidates = [
        float(coarse[i])
        for i in range(1, len(coarse) - 1)
        if vals[i] >= candidate_floor and vals[i] > vals[i - 1] and vals[i] >= vals[i + 1]
    ]
    found = []
    for center in candidates:
        width = pitch
        best_omega, best_ip = center, -1.0
        for _ in range(zoom_levels):
            grid = np.linspace(best_omega - width, best_omega + width, 41)
            grid = grid[grid > 0]
            scan = np.nan_to_num(omega_scan(family, dissipator, gamma, grid, duty=duty), nan=-1.0)
            k = int(np.argmax(scan))
            best_omega, best_ip = float(grid[k]), float(scan[k])
            width /= 20.0
        if best_ip >= threshold:
            found.append(best_omega)
    found.sort()
    merged: list[float] = []
    for om in found:
        if not merged or om - merged[-1] > 10 * pitch / 20.0 ** (zoom_levels - 1):
            merged.append(om)
    return np.array(merged)


def _fmt(x: float) -> str:
    return repr(float(x))


def write_phase_csv(pd: PhaseDiagram, path) -> None:
    """Sweep CSV; rows ordered gamma-major, omega varying fastest."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_HEADER)
        for i, gamma in enumerate(pd.gammas):
            for j, omega in enumerate(pd.omegas):
                lam = pd.eigenvalues[i, j]
                tokens = [name for bit, name in _FLAG_TOKENS if pd.flags[i, j] & bit]
                writer.writerow(
                    [_fmt(gamma), _fmt(omega), _fmt(pd.ip[i, j]), pd.damping_label(i, j),
                     str(int(pd.n_real[i, j]))]
                    + [_fmt(v) for v in lam.real]
                    + [_fmt(v) for v in lam.imag]
                    + [";".join(tokens)]
                )


def read_phase_csv(path) -> dict[str, list]:
    """Columns of a sweep CSV as python lists (numeric where possible)."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        rows = list(reader)
    out: dict[str, list] = {name: [] for name in reader.fieldnames}
    for row in rows:
        for name, value in row.items():
            if name in ("damping", "flags"):
                out[name].append(value)
            else:
                out[name].append(float(value))
    return out


def write_sidecar(path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_sidecar(path) -> dict:
    with open(path) as fh:
        return json.load(fh)
