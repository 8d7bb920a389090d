"""Closed-form results for the square-wave-driven decay model and the
resonance ladders / slope laws of all modulation families.

For a square-wave drive (duty 1/2) with a constant decay channel, the
one-period 2x2 Bloch block is a product of two closed-form exponentials and
its eigenvalue degeneracy condition can be reduced, with the substitution
gamma = 8 J sin(alpha), beta = 2 pi J cos(alpha) / Omega, q = pi gamma / (4 Omega),
to

    cos(beta) + tanh(q) sin(alpha) (2 pi J / Omega) sinc(beta) = +- sech(q).

Multiplying through by cosh(q) cos(alpha) recovers the textbook
sinh/cosh form of the same contour condition; the version above stays
bounded for Omega -> 0 and is smooth at alpha = pi/2, which makes it the
right shape for bracketing root finders.  In the limit alpha -> 0 it is
satisfied exactly at Omega_n = 2J/n, and as Omega -> 0 the largest root
approaches the static degeneracy at gamma = 8J.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

J = 1.0

DRIVE = "drive"
DISS = "diss"


def square_drive_contour_residual(alpha: float, omega: float, sign: int) -> float:
    """Bounded residual of the degeneracy condition at gamma = 8 J sin(alpha).

    sign selects the +-sech(q) branch; a root of either branch is a point on
    an exceptional contour of the square-wave-driven decay model.
    """
    gamma = 8.0 * J * math.sin(alpha)
    q = math.pi * gamma / (4.0 * omega)
    beta = 2.0 * math.pi * J * math.cos(alpha) / omega
    sinc = math.sin(beta) / beta if beta != 0.0 else 1.0
    em = math.exp(-q)
    sech = 2.0 * em / (1.0 + em * em)
    return (
        math.cos(beta)
        + math.tanh(q) * math.sin(alpha) * (2.0 * math.pi * J / omega) * sinc
        - sign * sech
    )


def _bisect(f, lo: float, hi: float, f_lo: float, residual_tol: float = 1e-12) -> float:
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if abs(f_mid) < residual_tol and hi - lo < 1e-12:
            return mid
        if (f_lo < 0) == (f_mid < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            return mid
    return 0.5 * (lo + hi)


def ep_contour_square_drive(
    omega: float, alpha_points: int = 10_000
) -> np.ndarray:
    """All decay strengths gamma on the exceptional contours at this omega.

    Roots are located by sign-change bracketing of both residual branches on
    a dense alpha grid over (0, pi/2], bisected to |residual| < 1e-12, and
    returned as gamma = 8 J sin(alpha), ascending and deduplicated.  The grid
    density bounds the smallest resolvable root at roughly
    8 J * (pi/2) / alpha_points.
    """
    if omega <= 0:
        raise ValueError("omega must be positive")
    alphas = np.linspace(math.pi / 2 / alpha_points, math.pi / 2, alpha_points)
    roots: list[float] = []
    for sign in (+1, -1):
        vals = [square_drive_contour_residual(a, omega, sign) for a in alphas]
        for k in range(len(alphas) - 1):
            if vals[k] == 0.0:
                roots.append(float(alphas[k]))
            elif (vals[k] < 0) != (vals[k + 1] < 0):
                root = _bisect(
                    lambda a, s=sign: square_drive_contour_residual(a, omega, s),
                    float(alphas[k]),
                    float(alphas[k + 1]),
                    vals[k],
                )
                roots.append(root)
    gammas = sorted(8.0 * J * math.sin(a) for a in roots)
    out: list[float] = []
    for g in gammas:
        if not out or g - out[-1] > 1e-9:
            out.append(g)
    return np.array(out)


@dataclass(frozen=True)
class ResonanceLadder:
    """Modulation frequencies at which exceptional contours reach gamma -> 0."""

    family: str
    dissipator: str
    entries: tuple[tuple[int, float], ...]
    note: str = ""

    def omegas(self) -> np.ndarray:
        return np.array([om for _, om in self.entries])


def resonance_ladder(family: str, dissipator: str, max_index: int) -> ResonanceLadder:
    """Drive modulation resonates at 2J/n (n >= 1); dissipation modulation at
    the odd subharmonics 4J/(2m+1) (m >= 0) of twice the Rabi frequency."""
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    if dissipator not in ("minus", "z"):
        raise ValueError(f"unknown dissipator {dissipator!r}")
    if family == DRIVE:
        entries = tuple((n, 2.0 * J / n) for n in range(1, max_index + 1))
    elif family == DISS:
        entries = tuple((m, 4.0 * J / (2 * m + 1)) for m in range(0, max_index + 1))
    else:
        raise ValueError(f"unknown family {family!r}")
    return ResonanceLadder(family=family, dissipator=dissipator, entries=entries)


def dissipation_even_resonances(max_index: int) -> ResonanceLadder:
    """Even subharmonics 4J/2m of the dissipation modulation: the eigenmatrix
    overlap is enhanced there but never reaches full coalescence."""
    if max_index < 1:
        raise ValueError("max_index must be >= 1")
    entries = tuple((m, 4.0 * J / (2 * m)) for m in range(1, max_index + 1))
    return ResonanceLadder(
        family=DISS, dissipator="minus", entries=entries, note="enhanced-IP, not EP"
    )


def ep_slopes(family: str, dissipator: str, index: int) -> tuple[float, float]:
    """Small-gamma slopes d(gamma)/d(omega) of the two contour branches that
    emerge from the ladder point of the given index."""
    if family == DRIVE:
        if index < 1:
            raise ValueError("drive ladder index starts at 1")
        if dissipator == "minus":
            s = 4.0 * index
        elif dissipator == "z":
            s = 1.0 * index
        else:
            raise ValueError(f"unknown dissipator {dissipator!r}")
    elif family == DISS:
        if index < 0:
            raise ValueError("dissipation ladder index starts at 0")
        if dissipator == "minus":
            s = 2.0 * math.pi * (2 * index + 1) ** 2
        elif dissipator == "z":
            s = math.pi * (2 * index + 1) ** 2 / 2.0
        else:
            raise ValueError(f"unknown dissipator {dissipator!r}")
    else:
        raise ValueError(f"unknown family {family!r}")
    return (s, -s)


def static_and_highfreq_eps(
    family: str, dissipator: str, delta: float = 1.0, duty: float = 0.5
) -> tuple[float, float]:
    """Exceptional strengths in the static and fast-modulation limits.

    The static generator degenerates at gamma = 8J (decay) or 2J
    (dephasing).  Fast modulation averages the modulated coefficient, so a
    modulated drive shifts the line to the static value scaled by the mean
    drive, while a modulated dissipator (mean gamma/2) puts the line at
    twice the static strength in nominal peak gamma.
    """
    static = {"minus": 8.0 * J, "z": 2.0 * J}[dissipator]
    if family in ("drive-cos", DRIVE):
        jbar = 0.5 * (2.0 - delta)
    elif family == "drive-square":
        jbar = duty
    elif family in ("diss-cos", "diss-square", DISS):
        return (static, 2.0 * static)
    else:
        raise ValueError(f"unknown family {family!r}")
    return (static, static * jbar)
