import math

import numpy as np
import pytest
from scipy.linalg import expm as scipy_expm

from floquet_ep.analytic import (
    dissipation_even_resonances,
    ep_contour_square_drive,
    ep_slopes,
    resonance_ladder,
    square_drive_contour_residual,
    static_and_highfreq_eps,
)


def printed_form_residual(alpha, omega, sign):
    # the sinh/cosh form of the contour condition, as an independent oracle
    gamma = 8.0 * math.sin(alpha)
    q = math.pi * gamma / (4.0 * omega)
    beta = 2.0 * math.pi * math.cos(alpha) / omega
    return (
        math.sinh(q) * math.cos(alpha) * math.cos(beta)
        + math.cosh(q) * math.sin(alpha) * math.sin(beta)
        - sign * math.sin(beta)
    )


def block_ratio(gamma, omega):
    # oracle: tr/(2 sqrt(det)) of the exact two-segment 2x2 Bloch block;
    # |ratio| = 1 exactly on a contour
    T = 2 * math.pi / omega
    a_on = np.array([[-gamma / 2, 2.0], [-2.0, -gamma]])
    a_off = np.array([[-gamma / 2, 0.0], [0.0, -gamma]])
    b2 = scipy_expm(0.5 * T * a_off) @ scipy_expm(0.5 * T * a_on)
    return np.trace(b2) / (2.0 * math.sqrt(np.linalg.det(b2)))


def test_residuals_vanish_at_returned_roots():
    for omega in (0.55, 0.9, 1.3, 2.0, 2.4, 3.0):
        roots = ep_contour_square_drive(omega)
        assert roots.size
        for g in roots:
            alpha = math.asin(g / 8.0)
            best = min(
                abs(square_drive_contour_residual(alpha, omega, s)) for s in (+1, -1)
            )
            assert best < 1e-12


def test_roots_satisfy_printed_form():
    for omega in (0.9, 1.3, 2.2):
        for g in ep_contour_square_drive(omega):
            alpha = math.asin(g / 8.0)
            best = min(abs(printed_form_residual(alpha, omega, s)) for s in (+1, -1))
            assert best < 1e-8


def test_roots_degenerate_the_bloch_block():
    for omega in (0.9, 1.3, 2.2):
        for g in ep_contour_square_drive(omega):
            assert abs(abs(block_ratio(g, omega)) - 1.0) < 1e-9


def test_root_count_matches_block_crossings():
    # oracle: sign changes of |ratio| - 1 on a dense gamma grid
    for omega in (0.9, 1.3, 2.2):
        roots = ep_contour_square_drive(omega)
        gammas = np.linspace(1e-3, 7.995, 8000)
        vals = np.array([abs(block_ratio(g, omega)) - 1.0 for g in gammas])
        crossings = int(np.sum(np.sign(vals[1:]) != np.sign(vals[:-1])))
        assert crossings == len(roots)


def test_printed_form_residual_near_alpha_zero_resonance():
    assert min(abs(printed_form_residual(1e-8, 2.0, s)) for s in (+1, -1)) < 1e-6


def test_static_limit_recovers_gamma_eight():
    roots = ep_contour_square_drive(0.01)
    assert roots.size
    assert abs(roots[-1] - 8.0) / 8.0 < 0.01


def test_small_gamma_slope_at_primary_resonance():
    for sign in (+1, -1):
        omega = 2.0 + sign * 1e-3
        roots = ep_contour_square_drive(omega)
        small = roots[roots < 0.05]
        assert small.size == 1
        slope = small[0] / 1e-3
        assert abs(slope - 4.0) / 4.0 < 0.02


def test_resonance_ladders():
    drive = resonance_ladder("drive", "minus", 3)
    assert np.allclose(drive.omegas(), [2.0, 1.0, 2.0 / 3.0])
    diss = resonance_ladder("diss", "minus", 2)
    assert np.allclose(diss.omegas(), [4.0, 4.0 / 3.0, 0.8])
    assert len(resonance_ladder("diss", "z", 13).entries) == 14
    with pytest.raises(ValueError):
        resonance_ladder("drive", "minus", 0)
    with pytest.raises(ValueError):
        resonance_ladder("kick", "minus", 2)


def test_even_subharmonic_companions_flagged():
    even = dissipation_even_resonances(3)
    assert np.allclose(even.omegas(), [2.0, 1.0, 2.0 / 3.0])
    assert even.note == "enhanced-IP, not EP"


def test_slope_table():
    assert ep_slopes("drive", "minus", 2) == (8.0, -8.0)
    assert ep_slopes("drive", "z", 3) == (3.0, -3.0)
    assert ep_slopes("diss", "minus", 0) == (2 * math.pi, -2 * math.pi)
    assert ep_slopes("diss", "z", 0) == (math.pi / 2, -math.pi / 2)
    assert ep_slopes("diss", "minus", 1) == (18 * math.pi, -18 * math.pi)
    with pytest.raises(ValueError):
        ep_slopes("drive", "minus", 0)
    with pytest.raises(ValueError):
        ep_slopes("diss", "y", 1)


def test_static_and_highfreq_values():
    assert static_and_highfreq_eps("drive-cos", "minus", delta=1.0) == (8.0, 4.0)
    assert static_and_highfreq_eps("drive-cos", "z", delta=1.0) == (2.0, 1.0)
    assert static_and_highfreq_eps("drive-cos", "z", delta=0.5) == (2.0, 1.5)
    assert static_and_highfreq_eps("drive-square", "minus") == (8.0, 4.0)
    assert static_and_highfreq_eps("diss-cos", "minus") == (8.0, 16.0)
    assert static_and_highfreq_eps("diss-square", "z") == (2.0, 4.0)


def test_ladder_entries_have_nearby_small_gamma_roots():
    # the default 1e4-point scan resolves roots down to gamma ~ 1.3e-3 only,
    # so probing the gamma = 1e-3 neighborhood needs a denser alpha grid
    for n in (1, 2, 3):
        omega = 2.0 / n + 2.5e-4 / n
        roots = ep_contour_square_drive(omega, alpha_points=50_000)
        small = roots[roots < 5e-3]
        assert small.size >= 1
        assert abs(small[0] - 1e-3) < 8e-4


def test_bad_omega_rejected():
    with pytest.raises(ValueError):
        ep_contour_square_drive(0.0)
