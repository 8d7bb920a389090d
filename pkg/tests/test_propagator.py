import math

import numpy as np
import pytest
import scipy.linalg

from floquet_ep.expm import expm_batch, matrix_exponential, ordered_product
from floquet_ep.liouvillian import ModelGenerators, vectorize
from floquet_ep.model import build_family_model, pauli, static_model
from floquet_ep.propagator import (
    ConvergenceError,
    NoSteadyStateError,
    _midpoint_product,
    one_period_propagator,
    propagate_states,
    richardson_propagator,
    spectrum,
)


def series_expm(a, terms=60):
    # oracle: Taylor series summed to machine precision
    out = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    for k in range(1, terms):
        term = term @ a / k
        out = out + term
    return out


def test_expm_zero_is_identity():
    m = np.array([[1.0, 2.0], [3.0, 4.0]])
    assert np.array_equal(matrix_exponential(m, 0.0), np.eye(2))


def test_expm_sigma_x_closed_form():
    a = 0.3
    got = matrix_exponential(pauli("x"), a)
    expect = math.cosh(a) * np.eye(2) + math.sinh(a) * pauli("x")
    assert np.abs(got - expect).max() < 1e-14
    assert np.abs(got - series_expm(a * pauli("x"))).max() < 1e-14


def test_expm_inverse_property(rng):
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a *= 5.0 / max(1.0, np.abs(a).sum(axis=0).max())
        prod = matrix_exponential(a) @ matrix_exponential(-a)
        assert np.abs(prod - np.eye(4)).max() < 1e-12


def test_expm_batch_matches_scipy(rng):
    a = rng.normal(size=(30, 4, 4)) + 1j * rng.normal(size=(30, 4, 4))
    a *= 4.0
    ref = np.stack([scipy.linalg.expm(x) for x in a])
    got = expm_batch(a)
    scale = np.abs(ref).max(axis=(1, 2), keepdims=True)
    assert (np.abs(got - ref) / scale).max() < 1e-12


def test_expm_large_norm_relative_accuracy():
    a = np.diag([10.0, -30.0, 90.0, 0.0]).astype(complex)
    a[0, 1] = 5.0
    got = expm_batch(a)
    ref = scipy.linalg.expm(a)
    assert (np.abs(got - ref) / np.abs(ref).max()).max() < 1e-12


def test_expm_overflow_and_nonfinite():
    with pytest.raises(OverflowError):
        matrix_exponential(np.eye(2) * 1e4)
    with pytest.raises(OverflowError):
        matrix_exponential(np.array([[np.nan, 0], [0, 0]]))


def test_ordered_product_order():
    a = np.array([[1.0, 1.0], [0.0, 1.0]])
    b = np.array([[1.0, 0.0], [1.0, 1.0]])
    c = np.array([[2.0, 0.0], [0.0, 1.0]])
    stack = np.stack([a, b, c])
    assert np.array_equal(ordered_product(stack), c @ b @ a)


def test_unitary_propagator_at_zero_dissipation():
    m = build_family_model("drive-square", "minus", 0.0, 1.7)
    g = one_period_propagator(m)
    assert abs(abs(np.linalg.det(g)) - 1.0) < 1e-12
    assert np.abs(np.abs(np.linalg.eigvals(g)) - 1.0).max() < 1e-12


def test_square_family_exact_product():
    m = build_family_model("drive-square", "minus", 0.8, 2.0)
    gen = ModelGenerators.from_model(m)
    T = m.period
    expect = matrix_exponential(gen.at(0.75 * T), T / 2) @ matrix_exponential(gen.at(0.25 * T), T / 2)
    assert np.abs(one_period_propagator(m) - expect).max() < 1e-14


def test_square_exact_vs_stepped_integrator():
    # oracle: the fixed-count midpoint integrator at 2^16 steps
    m = build_family_model("drive-square", "minus", 0.8, 2.0)
    exact = one_period_propagator(m, steps="auto")
    stepped = one_period_propagator(m, steps=1 << 16)
    assert np.abs(exact - stepped).max() < 1e-10


def test_trace_left_vector_fixed(rng):
    one = vectorize(np.eye(2))
    for family in ("drive-cos", "diss-square"):
        m = build_family_model(family, "z", float(rng.uniform(0, 3)), 2.3)
        g = one_period_propagator(m) if m.is_piecewise_constant else richardson_propagator(m, 256)
        assert np.abs(one.conj() @ g - one.conj()).max() < 1e-12


def test_auto_converges_for_cosine():
    m = build_family_model("drive-cos", "minus", 0.5, 6.0)
    g_auto = one_period_propagator(m, steps="auto")
    g_ref = richardson_propagator(m, 2048)
    assert np.abs(g_auto - g_ref).max() < 1e-9


def test_auto_convergence_error_carries_delta():
    m = build_family_model("drive-cos", "minus", 0.5, 2.0)
    with pytest.raises(ConvergenceError) as err:
        one_period_propagator(m, steps="auto", tol=1e-30, max_steps=512)
    assert err.value.last_delta > 0
    assert err.value.steps == 512


def test_composition_over_half_periods():
    m = build_family_model("drive-cos", "minus", 0.7, 2.0)
    gen = ModelGenerators.from_model(m)
    n = 512
    full = _midpoint_product(gen, n)
    dt = m.period / n
    times = (np.arange(n) + 0.5) * dt
    first = ordered_product(expm_batch(dt * gen.stack(times[: n // 2])))
    second = ordered_product(expm_batch(dt * gen.stack(times[n // 2 :])))
    assert np.abs(second @ first - full).max() < 1e-10


def test_spectrum_static_transients_match_closed_form():
    # oracle: exp(T mu) for the closed-form generator eigenvalues at gamma = 2
    gamma, period = 2.0, 0.5
    m = static_model("minus", gamma, reference_omega=2 * math.pi / period)
    sp = spectrum(one_period_propagator(m))
    disc = np.sqrt(complex(gamma**2 / 4 - 16.0))
    mus = np.array([-gamma / 2, (-1.5 * gamma + disc) / 2, (-1.5 * gamma - disc) / 2])
    got = sp.transient_eigenvalues
    for mu in np.exp(period * mus):
        assert np.abs(got - mu).min() < 1e-9


def test_spectrum_invariants_random_points(rng):
    for _ in range(25):
        family = ("drive-cos", "drive-square", "diss-cos", "diss-square")[rng.integers(0, 4)]
        m = build_family_model(
            family, ("minus", "z")[rng.integers(0, 2)],
            float(rng.uniform(0, 4)), float(rng.uniform(0.4, 6)),
        )
        g = one_period_propagator(m) if m.is_piecewise_constant else richardson_propagator(m, 192)
        sp = spectrum(g)
        lam = sp.eigenvalues
        assert np.abs(lam).max() <= 1 + 1e-9
        assert abs(sp.steady_eigenvalue - 1.0) < 1e-9
        # closed under conjugation
        for z in lam:
            assert np.abs(lam - np.conj(z)).min() < 1e-8
        # steady carries the trace, transients do not
        traces = sp.eigenmatrices[[0, 3]].sum(axis=0)
        assert abs(traces[sp.steady_index]) > 1e-8
        for k in sp.transient_indices:
            assert abs(traces[k]) < 1e-6
        # descending real part, ties by ascending imaginary part
        key = [(-z.real, z.imag) for z in lam]
        assert key == sorted(key)


def test_spectrum_unitary_degenerate_pair_purified():
    m = build_family_model("drive-square", "minus", 0.0, 1.7)
    sp = spectrum(one_period_propagator(m))
    traces = sp.eigenmatrices[[0, 3]].sum(axis=0)
    carriers = [k for k in range(4) if abs(traces[k]) > 1e-6]
    assert carriers == [sp.steady_index]
    assert np.abs(np.abs(sp.eigenvalues) - 1.0).max() < 1e-12


def test_spectrum_phase_fix_largest_component_real():
    # a component of (tied-)largest magnitude is pinned real positive
    m = build_family_model("drive-square", "minus", 0.8, 2.3)
    sp = spectrum(one_period_propagator(m))
    for k in range(4):
        v = sp.eigenmatrices[:, k]
        top = np.abs(v).max()
        tied = v[np.abs(v) >= (1 - 1e-8) * top]
        assert any(abs(z.imag) < 1e-12 * top and z.real > 0 for z in tied)


def test_spectrum_eigenmatrices_unit_norm_and_residual():
    m = build_family_model("diss-square", "z", 1.3, 2.9)
    g = one_period_propagator(m)
    sp = spectrum(g)
    assert np.abs(np.linalg.norm(sp.eigenmatrices, axis=0) - 1.0).max() < 1e-12
    resid = g @ sp.eigenmatrices - sp.eigenmatrices * sp.eigenvalues[None, :]
    assert np.abs(resid).max() < 1e-10


def test_spectrum_no_steady_state_error():
    with pytest.raises(NoSteadyStateError):
        spectrum(0.5 * np.eye(4))


def test_fig1g_square_point_all_real():
    m = build_family_model("drive-square", "minus", 0.4, 2.0)
    sp = spectrum(one_period_propagator(m))
    assert abs(sp.steady_eigenvalue - 1.0) < 1e-12
    assert np.abs(sp.transient_eigenvalues.imag).max() < 1e-9


def test_cptp_on_random_states(rng):
    m = build_family_model("drive-square", "minus", 1.1, 1.4)
    g = one_period_propagator(m)
    vecs = rng.normal(size=(100, 2)) + 1j * rng.normal(size=(100, 2))
    vecs /= np.linalg.norm(vecs, axis=1, keepdims=True)
    rhos = vecs[:, :, None] * vecs.conj()[:, None, :]
    out = propagate_states(g, rhos)
    assert np.abs(np.trace(out, axis1=1, axis2=2) - 1).max() < 1e-10
    assert np.abs(out - out.conj().swapaxes(1, 2)).max() < 1e-10
    assert np.linalg.eigvalsh(0.5 * (out + out.conj().swapaxes(1, 2))).min() >= -1e-9
