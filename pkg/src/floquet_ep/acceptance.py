"""Executable acceptance checks for the whole pipeline.

Each check computes a physical anchor point of the phase diagrams (static
degeneracies, high-frequency lines, resonance ladders, slope laws, spectral
cross-checks, map invariants) and compares it against its closed-form or
independently derived value at a fixed tolerance.  The CLI `validate`
command prints one line per check; the pytest suite asserts each one.
"""

from __future__ import annotations

import inspect
import math
import time
from dataclasses import dataclass

import numpy as np

from . import analytic
from .bloch import spectral_crosscheck
from .epmetrics import inner_product_metric
from .expm import expm_batch
from .liouvillian import ModelGenerators, postselected_hamiltonian
from .model import build_family_model, static_model
from .propagator import (
    _spectrum_from_eig,
    one_period_propagator,
    propagate_states,
    spectrum,
)
from .sweep import (
    SweepSpec,
    column_cells,
    extract_contours,
    find_resonance_contour_points,
    parabolic_peak,
    run_sweep,
)

DEFAULT_SEED = 20260810


@dataclass
class CheckResult:
    name: str
    passed: bool
    expected: str
    observed: str
    tolerance: str
    runtime: float = 0.0
    detail: str = ""

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"


def _static_ips(dissipator: str, gammas: np.ndarray, period: float = 0.5) -> np.ndarray:
    """IP of exp(period * L) for a batch of static models."""
    gen = ModelGenerators.from_model(static_model(dissipator, 1.0))
    lh, dpart = gen.h_part, gen.diss_parts[0]
    gs = expm_batch(period * (lh[None] + gammas[:, None, None] * dpart))
    eigvals, eigvecs = np.linalg.eig(gs)
    out = np.empty(len(gammas))
    for i in range(len(gammas)):
        sp = _spectrum_from_eig(gs[i], eigvals[i], eigvecs[i].copy(), 1e-10, 1e-8)
        out[i] = inner_product_metric(sp)
    return out


def _refined_peak(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    k = int(np.nanargmax(ys))
    if 0 < k < len(xs) - 1:
        return parabolic_peak(xs, ys, k), float(ys[k])
    return float(xs[k]), float(ys[k])


def _check_static_ep(dissipator: str, lo: float, hi: float, target: float, loc_tol: float) -> CheckResult:
    gammas = np.linspace(lo, hi, int(round((hi - lo) / 0.005)) + 1)
    loc, peak = _refined_peak(gammas, _static_ips(dissipator, gammas))
    passed = peak >= 0.999 and abs(loc - target) <= loc_tol
    return CheckResult(
        name=f"static-ep-{dissipator}",
        passed=passed,
        expected=f"IP peak >= 0.999 at gamma = {target:.2f}",
        observed=f"IP {peak:.6f} at gamma = {loc:.4f}",
        tolerance=f"+-{loc_tol}",
    )


def check_static_ep_minus() -> CheckResult:
    return _check_static_ep("minus", 7.5, 8.5, 8.0, 0.02)


def check_static_ep_z() -> CheckResult:
    return _check_static_ep("z", 1.5, 2.5, 2.0, 0.01)


def check_postselected_ep() -> CheckResult:
    gammas = np.linspace(3.5, 4.5, 201)
    splittings = np.empty(len(gammas))
    for i, g in enumerate(gammas):
        ev = np.linalg.eigvals(postselected_hamiltonian(static_model("minus", g)))
        splittings[i] = abs(ev[0] - ev[1])
    k = int(np.argmin(splittings))
    loc, minval = float(gammas[k]), float(splittings[k])
    passed = abs(loc - 4.0) <= 0.01
    return CheckResult(
        name="postselected-ep",
        passed=passed,
        expected="eigenvalue splitting minimal at gamma = 4.00",
        observed=f"splitting {minval:.2e} at gamma = {loc:.4f}",
        tolerance="+-0.01",
    )


def check_highfreq_lines() -> list[CheckResult]:
    cases = [
        ("minus", 1.0, 4.0, 0.10, np.linspace(3.5, 4.5, 201)),
        ("z", 1.0, 1.0, 0.05, np.linspace(0.7, 1.3, 241)),
        ("z", 0.5, 1.5, 0.05, np.linspace(1.2, 1.8, 241)),
    ]
    out = []
    for dissipator, delta, target, tol, gammas in cases:
        ip, _, flags, _ = column_cells(
            "drive-cos", dissipator, 50.0, gammas, delta=delta, steps=128
        )
        ip = np.where(flags == 0, ip, np.nan)
        loc, peak = _refined_peak(gammas, ip)
        passed = peak >= 0.999 and abs(loc - target) <= tol
        out.append(
            CheckResult(
                name=f"highfreq-{dissipator}-delta{delta:g}",
                passed=passed,
                expected=f"IP peak >= 0.999 at gamma = {target}",
                observed=f"IP {peak:.6f} at gamma = {loc:.4f}",
                tolerance=f"+-{tol}",
            )
        )
    return out


def check_drive_resonances() -> CheckResult:
    lo, hi = 0.3, 2.5
    found = find_resonance_contour_points(
        "drive-square", "minus", 1e-3, lo, hi, coarse_points=2201, zoom_levels=4
    )
    ladder = [2.0 / n for n in range(1, 8) if 2.0 / n >= lo - 0.01]
    required = [2.0 / n for n in range(1, 6)]
    missing = [om for om in required if not np.any(np.abs(found - om) <= 0.01)]
    spurious = [om for om in found if min(abs(om - l) for l in ladder) > 0.01]
    worst = max((min(abs(om - l) for l in ladder) for om in found), default=math.nan)
    passed = not missing and not spurious
    return CheckResult(
        name="drive-resonances",
        passed=passed,
        expected="contour points at 2/n (n=1..5) and on the 2/n ladder only",
        observed=f"{len(found)} points, worst ladder distance {worst:.2e}"
        + (f", missing {missing}" if missing else "")
        + (f", spurious {spurious}" if spurious else ""),
        tolerance="+-0.01",
        detail="ladder includes every 2/n inside the window (n=6 enters at 0.333)",
    )


def _fit_window_slopes(
    family: str,
    dissipator: str,
    center: float,
    slope: float,
    gamma_top: float,
    delta: float = 1.0,
    columns: int = 24,
    rows: int = 90,
    steps: int = 128,
) -> tuple[float, float]:
    """Contour slopes (left, right) of the branches emerging from one ladder point.

    Least squares of gamma = s * (omega - center), anchored at the resonance
    the branches emerge from; each side is fitted separately.
    """
    half = 1.1 * gamma_top / slope
    spec = SweepSpec(
        family=family,
        dissipator=dissipator,
        gamma=(2e-3, 1.06 * gamma_top, rows),
        omega=(center - half, center + half, columns),
        delta=delta,
        steps=steps,
    )
    pts = extract_contours(run_sweep(spec), threshold=0.97)
    pts = pts[pts[:, 0] <= gamma_top]
    out = []
    for side in (pts[pts[:, 1] < center], pts[pts[:, 1] > center]):
        if len(side) < 3:
            out.append(math.nan)
            continue
        x = side[:, 1] - center
        out.append(float(np.dot(side[:, 0], x) / np.dot(x, x)))
    return out[0], out[1]


def check_drive_slopes() -> list[CheckResult]:
    # The +-4n law is an asymptotic of the square waveform; the sinusoidal
    # contours emerge with measurably steeper slopes (4.53, 11.3, 19.4 for
    # n = 1, 2, 3), so the square drive is the family this law constrains.
    out = []
    for n in (1, 2, 3):
        target = 4.0 * n
        fit_l, fit_r = _fit_window_slopes(
            "drive-square", "minus", 2.0 / n, target, gamma_top=0.2
        )
        err = max(abs(-fit_l - target), abs(fit_r - target)) / target
        passed = math.isfinite(err) and err <= 0.05
        out.append(
            CheckResult(
                name=f"drive-slope-n{n}",
                passed=passed,
                expected=f"branch slopes -+{target}",
                observed=f"fitted {fit_l:+.3f} / {fit_r:+.3f} (err {100 * err:.2f}%)",
                tolerance="5%",
            )
        )
    return out


def _gamma_peaks(family: str, dissipator: str, om: float, gammas: np.ndarray) -> list[float]:
    """EP crossings along a gamma column: coarse local maxima of IP zoomed on
    shrinking sub-grids until the peak clears the coalescence threshold."""
    ip, _, flags, _ = column_cells(family, dissipator, om, gammas)
    vals = np.where(flags == 0, np.nan_to_num(ip, nan=-1.0), -1.0)
    pitch = gammas[1] - gammas[0]
    peaks = []
    for i in range(1, len(gammas) - 1):
        if vals[i] < 0.5 or vals[i] <= vals[i - 1] or vals[i] < vals[i + 1]:
            continue
        best, width = float(gammas[i]), pitch
        for _ in range(3):
            grid = np.linspace(max(5e-4, best - width), best + width, 21)
            zoom_ip, _, zoom_flags, _ = column_cells(family, dissipator, om, grid)
            zoom = np.where(zoom_flags == 0, np.nan_to_num(zoom_ip, nan=-1.0), -1.0)
            k = int(np.argmax(zoom))
            best, peak_ip = float(grid[k]), float(zoom[k])
            width /= 10.0
        if peak_ip >= 0.999 and (not peaks or best - peaks[-1] > pitch):
            peaks.append(best)
    return peaks


def check_contour_oracle() -> CheckResult:
    omegas = np.linspace(0.505, 2.495, 50)
    pitch = 0.004
    worst = 0.0
    unmatched_roots = 0
    spurious_peaks = 0
    checked_roots = 0
    for om in omegas:
        # Transient eigenvalues scale like exp(-3 gamma T / 4); past this cap
        # they sink below the double-precision floor of G and carry no usable
        # eigenvector information, so the comparison stops being meaningful.
        gamma_cap = min(8.6, 3.68 * om)
        gammas = np.linspace(5e-4, gamma_cap, int(gamma_cap / pitch) + 1)
        peaks = _gamma_peaks("drive-square", "minus", float(om), gammas)
        roots_all = analytic.ep_contour_square_drive(float(om))
        # Coverage is only demanded of roots comfortably inside the scanned
        # window; peaks are vetted against the full root list.
        roots = roots_all[(roots_all >= 0.02) & (roots_all <= gamma_cap - 2 * pitch)]
        clusters: list[list[float]] = []
        for r in roots:
            if clusters and r - clusters[-1][-1] < 3 * pitch:
                clusters[-1].append(float(r))
            else:
                clusters.append([float(r)])
        for cluster in clusters:
            checked_roots += 1
            dists = [abs(p - r) for p in peaks for r in cluster]
            if not dists or min(dists) > 0.01:
                unmatched_roots += 1
            else:
                worst = max(worst, min(dists))
        for p in peaks:
            if roots_all.size == 0 or np.abs(roots_all - p).min() > 0.01:
                spurious_peaks += 1
    passed = unmatched_roots == 0 and spurious_peaks == 0
    return CheckResult(
        name="contour-oracle",
        passed=passed,
        expected="sweep peaks match contour-equation roots (50 omegas)",
        observed=(
            f"{checked_roots} roots checked, worst match {worst:.4f}, "
            f"{unmatched_roots} unmatched, {spurious_peaks} spurious"
        ),
        tolerance="<=0.01",
    )


def check_diss_ladder() -> CheckResult:
    missing = []
    worst = 0.0
    for m in (0, 1, 2):
        center = 4.0 / (2 * m + 1)
        found = find_resonance_contour_points(
            "diss-square", "minus", 1e-3, center - 0.05, center + 0.05,
            coarse_points=2201, zoom_levels=5,
        )
        if found.size == 0 or np.abs(found - center).min() > 0.01:
            missing.append(m)
        else:
            worst = max(worst, float(np.abs(found - center).min()))
    return CheckResult(
        name="diss-ladder",
        passed=not missing,
        expected="contour points converge to 4/(2m+1), m = 0, 1, 2",
        observed=f"worst distance {worst:.2e}" + (f", missing m={missing}" if missing else ""),
        tolerance="+-0.01",
    )


def check_diss_slopes() -> list[CheckResult]:
    # Slope laws are gamma -> 0 asymptotics; the dephasing branches bend away
    # from them noticeably faster than the decay ones (the m = 2 secants are
    # already ~20% off at gamma = 0.1), so the fit window shrinks with them.
    out = []
    for dissipator, base, gamma_top in (
        ("minus", 2.0 * math.pi, 0.1),
        ("z", math.pi / 2.0, 0.04),
    ):
        for m in (0, 1, 2):
            target = base * (2 * m + 1) ** 2
            fit_l, fit_r = _fit_window_slopes(
                "diss-square", dissipator, 4.0 / (2 * m + 1), target, gamma_top=gamma_top
            )
            err = max(abs(-fit_l - target), abs(fit_r - target)) / target
            passed = math.isfinite(err) and err <= 0.10
            out.append(
                CheckResult(
                    name=f"diss-slope-{dissipator}-m{m}",
                    passed=passed,
                    expected=f"branch slopes -+{target:.4f}",
                    observed=f"fitted {fit_l:+.3f} / {fit_r:+.3f} (err {100 * err:.2f}%)",
                    tolerance="10%",
                )
            )
    return out


def check_bloch_crosscheck() -> CheckResult:
    gammas = np.linspace(0.07, 2.9, 10) + 0.013
    omegas = np.linspace(0.41, 5.9, 10) + 0.017
    worst = 0.0
    for family in ("drive-cos", "drive-square", "diss-cos", "diss-square"):
        for dissipator in ("minus", "z"):
            for g in gammas:
                for om in omegas:
                    model = build_family_model(family, dissipator, float(g), float(om))
                    report = spectral_crosscheck(model, steps=512)
                    worst = max(worst, report.max_deviation)
    return CheckResult(
        name="bloch-crosscheck",
        passed=worst < 1e-8,
        expected="eig(G) = {1} u eig(B) on 10x10 grids, all families",
        observed=f"max deviation {worst:.2e}",
        tolerance="<1e-8",
    )


def check_cptp_suite(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst_trace = worst_herm = worst_neg = worst_mod = worst_conj = 0.0
    for family in ("drive-cos", "drive-square", "diss-cos", "diss-square"):
        for _ in range(100):
            gamma = float(rng.uniform(0.0, 6.0))
            omega = float(rng.uniform(0.3, 8.0))
            dissipator = rng.choice(["minus", "z"])
            model = build_family_model(family, dissipator, gamma, omega)
            if model.is_piecewise_constant:
                g = one_period_propagator(model, steps="auto")
            else:
                g = one_period_propagator(model, steps=256)
            vecs = rng.normal(size=(25, 2)) + 1j * rng.normal(size=(25, 2))
            vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
            rhos = vecs[:, :, None] * vecs.conj()[:, None, :]
            evolved = propagate_states(g, rhos)
            worst_trace = max(worst_trace, float(np.abs(np.trace(evolved, axis1=1, axis2=2) - 1.0).max()))
            worst_herm = max(worst_herm, float(np.abs(evolved - evolved.conj().swapaxes(1, 2)).max()))
            sym = 0.5 * (evolved + evolved.conj().swapaxes(1, 2))
            worst_neg = min(worst_neg, float(np.linalg.eigvalsh(sym).min()))
            lam = np.linalg.eigvals(g)
            worst_mod = max(worst_mod, float(np.abs(lam).max()) - 1.0)
            conj_gap = np.abs(lam[:, None] - lam.conj()[None, :]).min(axis=1)
            worst_conj = max(worst_conj, float(conj_gap.max()))
    passed = (
        worst_trace < 1e-10
        and worst_herm < 1e-10
        and worst_neg >= -1e-9
        and worst_mod <= 1e-9
        and worst_conj < 1e-8
    )
    return CheckResult(
        name="cptp-suite",
        passed=passed,
        expected="trace/hermiticity/positivity/|lambda|/conjugation preserved",
        observed=(
            f"trace {worst_trace:.1e}, herm {worst_herm:.1e}, min-eig {worst_neg:.1e}, "
            f"|lambda|-1 {worst_mod:.1e}, conj {worst_conj:.1e}"
        ),
        tolerance="1e-10 / 1e-10 / -1e-9 / 1e-9 / 1e-8",
        detail="400 random points across the four modulation families",
    )


def check_integrator_equivalence(seed: int = DEFAULT_SEED) -> CheckResult:
    rng = np.random.default_rng(seed + 1)
    worst = 0.0
    for _ in range(20):
        family = rng.choice(["drive-square", "diss-square"])
        dissipator = rng.choice(["minus", "z"])
        gamma = float(rng.uniform(0.05, 3.0))
        omega = float(rng.uniform(0.5, 6.0))
        model = build_family_model(family, dissipator, gamma, omega)
        exact = one_period_propagator(model, steps="auto")
        stepped = one_period_propagator(model, steps=1 << 16)
        worst = max(worst, float(np.abs(exact - stepped).max()))
    return CheckResult(
        name="integrator-equivalence",
        passed=worst < 1e-10,
        expected="segment-exact G equals the 2^16-step midpoint product",
        observed=f"max difference {worst:.2e}",
        tolerance="<1e-10",
        detail="20 random square-wave parameter points",
    )


def _n_real_at(family: str, omega: float, gamma: float = 0.4, steps: int | str = "auto") -> int:
    model = build_family_model(family, "minus", gamma, omega)
    if isinstance(steps, int):
        from .propagator import richardson_propagator

        g = richardson_propagator(model, steps)
    else:
        g = one_period_propagator(model, steps="auto")
    sp = spectrum(g)
    lam = sp.transient_eigenvalues
    return int(np.sum(np.abs(lam.imag) < 1e-9 * np.maximum(1.0, np.abs(lam))))


def check_eigenvalue_structure() -> CheckResult:
    observed = {om: _n_real_at("drive-square", om) for om in (1.95, 2.0, 2.17)}
    expected = {1.95: 1, 2.0: 3, 2.17: 1}
    passed = observed == expected
    return CheckResult(
        name="fig-eigenvalue-structure",
        passed=passed,
        expected="real transients {1.95: 1, 2.0: 3, 2.17: 1} (square drive, gamma=0.4)",
        observed=f"real transients {observed}",
        tolerance="exact count",
        detail=(
            "the computed overdamped window at gamma=0.4 is [1.894, 2.085], so "
            "omega=1.95 comes out overdamped; see README on this reference point"
        ),
    )


def check_eigenvalue_structure_sinusoidal() -> CheckResult:
    observed = {om: _n_real_at("drive-cos", om, steps=512) for om in (1.9, 2.0, 2.17)}
    expected = {1.9: 1, 2.0: 3, 2.17: 1}
    passed = observed == expected
    return CheckResult(
        name="fig-eigenvalue-structure-sinusoidal",
        passed=passed,
        expected="real transients {1.9: 1, 2.0: 3, 2.17: 1} (cosine drive, gamma=0.4)",
        observed=f"real transients {observed}",
        tolerance="exact count",
    )


CHECKS = {
    "static-ep-minus": check_static_ep_minus,
    "static-ep-z": check_static_ep_z,
    "postselected-ep": check_postselected_ep,
    "highfreq-lines": check_highfreq_lines,
    "drive-resonances": check_drive_resonances,
    "drive-slopes": check_drive_slopes,
    "contour-oracle": check_contour_oracle,
    "diss-ladder": check_diss_ladder,
    "diss-slopes": check_diss_slopes,
    "bloch-crosscheck": check_bloch_crosscheck,
    "cptp-suite": check_cptp_suite,
    "integrator-equivalence": check_integrator_equivalence,
    "eigenvalue-structure": check_eigenvalue_structure,
    "eigenvalue-structure-sinusoidal": check_eigenvalue_structure_sinusoidal,
}


def run_checks(names: list[str] | None = None, seed: int = DEFAULT_SEED) -> list[CheckResult]:
    """Run the named checks (all by default), timing each one."""
    selected = list(CHECKS) if not names else list(names)
    unknown = [n for n in selected if n not in CHECKS]
    if unknown:
        raise KeyError(f"unknown check(s): {', '.join(unknown)}")
    results: list[CheckResult] = []
    for name in selected:
        fn = CHECKS[name]
        kwargs = {"seed": seed} if "seed" in inspect.signature(fn).parameters else {}
        start = time.perf_counter()
        res = fn(**kwargs)
        elapsed = time.perf_counter() - start
        batch = res if isinstance(res, list) else [res]
        for r in batch:
            r.runtime = elapsed / len(batch)
        results.extend(batch)
    return results


def format_table(results: list[CheckResult]) -> str:
    lines = []
    name_w = max(len(r.name) for r in results)
    for r in results:
        lines.append(
            f"{r.status:4s} {r.name:<{name_w}s}  expected: {r.expected}  "
            f"observed: {r.observed}  tol: {r.tolerance}  [{r.runtime:.1f}s]"
        )
    n_fail = sum(not r.passed for r in results)
    lines.append(f"{len(results) - n_fail}/{len(results)} checks passed")
    return "\n".join(lines)
