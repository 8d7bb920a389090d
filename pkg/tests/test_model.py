import math

import numpy as np
import pytest

from floquet_ep.model import (
    LindbladModel,
    ModelError,
    PeriodicSchedule,
    build_family_model,
    model_violations,
    pauli,
    static_model,
    validate_model,
    with_gamma,
)


def test_pauli_matrices_exact():
    assert np.array_equal(pauli("x"), np.array([[0, 1], [1, 0]], dtype=complex))
    assert np.array_equal(pauli("y"), np.array([[0, -1j], [1j, 0]], dtype=complex))
    assert np.array_equal(pauli("z"), np.diag([1.0 + 0j, -1.0]))
    assert np.array_equal(pauli("minus"), np.array([[0, 1], [0, 0]], dtype=complex))
    assert np.array_equal(pauli("identity"), np.eye(2, dtype=complex))


def test_pauli_minus_projector():
    sm = pauli("minus")
    assert np.array_equal(sm.conj().T @ sm, np.diag([0.0 + 0j, 1.0]))


def test_pauli_unknown_name():
    with pytest.raises(ModelError):
        pauli("w")


def test_offset_cosine_values():
    s = PeriodicSchedule.offset_cosine(1.0, 1.0, 2.0)
    assert s.value(0.0) == 1.0
    assert abs(s.value(s.period / 2)) < 1e-15
    s5 = PeriodicSchedule.offset_cosine(1.0, 0.5, 2.0)
    assert s5.value(0.0) == pytest.approx(1.0)


def test_square_wave_values():
    s = PeriodicSchedule.square_wave(0.7, 2.0)
    T = s.period
    assert s.value(0.0) == 0.7
    assert s.value(0.49 * T) == 0.7
    assert s.value(0.75 * T) == 0.0
    assert s.value(1.25 * T) == 0.7


def test_averages_against_quadrature():
    # independent oracle: trapezoid quadrature over one period
    for s in (
        PeriodicSchedule.offset_cosine(1.0, 0.5, 1.7),
        PeriodicSchedule.offset_cosine(2.0, 1.0, 0.9),
        PeriodicSchedule.square_wave(1.3, 2.2),
    ):
        t = np.linspace(0.0, s.period, 200_001)
        quad = np.trapezoid(s.values(t), t) / s.period
        assert s.average() == pytest.approx(quad, abs=1e-5)
    assert PeriodicSchedule.offset_cosine(1.0, 0.5, 1.7).average() == pytest.approx(0.75, abs=1e-12)
    assert PeriodicSchedule.square_wave(1.3, 2.2).average() == 1.3 / 2


def test_min_value_against_grid(rng):
    for _ in range(50):
        kind = rng.integers(0, 3)
        base = float(rng.uniform(-1, 2))
        om = float(rng.uniform(0.2, 5.0))
        if kind == 0:
            s = PeriodicSchedule.constant(base)
            T = 1.0
        elif kind == 1:
            s = PeriodicSchedule.offset_cosine(base, float(rng.uniform(-0.5, 2.5)), om)
            T = s.period
        else:
            s = PeriodicSchedule.square_wave(base, om, duty=float(rng.uniform(0.1, 0.9)))
            T = s.period
        grid_min = s.values(np.linspace(0, T, 40_001)).min()
        assert s.min_value() <= grid_min + 1e-12
        assert s.min_value() >= grid_min - 1e-3 * max(1.0, abs(base))


def test_periodicity_random_times(rng):
    t = rng.uniform(-10.0, 10.0, size=10_000)
    sq = PeriodicSchedule.square_wave(0.9, 1.3)
    co = PeriodicSchedule.offset_cosine(0.9, 0.7, 1.3)
    cn = PeriodicSchedule.constant(0.9)
    assert np.array_equal(sq.values(t + sq.period), sq.values(t))
    assert np.array_equal(cn.values(t + 1.0), cn.values(t))
    # the cosine kind cannot be bit-exact under t -> t + T; machine precision only
    assert np.abs(co.values(t + co.period) - co.values(t)).max() < 1e-12


def test_schedule_validation():
    with pytest.raises(ModelError):
        PeriodicSchedule("triangle", 1.0)
    with pytest.raises(ModelError):
        PeriodicSchedule.offset_cosine(1.0, 1.0, 0.0)
    with pytest.raises(ModelError):
        PeriodicSchedule.square_wave(1.0, 1.0, duty=1.0)


def test_validate_model_accepts_standard_qubit():
    m = LindbladModel(
        hamiltonian_op=-pauli("x"),
        hamiltonian_schedule=PeriodicSchedule.square_wave(1.0, 2.0),
        dissipators=((pauli("minus"), PeriodicSchedule.constant(0.3)),),
    )
    assert validate_model(m) is m


def test_validate_model_flags_negative_dissipation():
    m = LindbladModel(
        hamiltonian_op=-pauli("x"),
        hamiltonian_schedule=PeriodicSchedule.constant(1.0),
        dissipators=((pauli("minus"), PeriodicSchedule.offset_cosine(1.0, 3.0, 2.0)),),
    )
    assert any("negative dissipation" in v for v in model_violations(m))
    with pytest.raises(ModelError, match="negative dissipation"):
        validate_model(m)


def test_validate_model_flags_non_hermitian_hamiltonian():
    m = LindbladModel(
        hamiltonian_op=np.array([[0, 1], [0, 0]], dtype=complex),
        hamiltonian_schedule=PeriodicSchedule.constant(1.0),
        reference_omega=1.0,
    )
    assert "non-Hermitian Hamiltonian" in model_violations(m)


def test_validate_model_flags_mismatched_omega():
    m = LindbladModel(
        hamiltonian_op=-pauli("x"),
        hamiltonian_schedule=PeriodicSchedule.square_wave(1.0, 2.0),
        dissipators=((pauli("z"), PeriodicSchedule.square_wave(0.1, 3.0)),),
    )
    assert "mismatched modulation frequency" in model_violations(m)


def test_family_models():
    m = build_family_model("drive-cos", "minus", 0.5, 2.0, delta=0.7)
    assert m.hamiltonian_schedule.delta == 0.7
    assert m.omega == 2.0
    assert m.dissipators[0][1].value(0.3) == 0.5
    m = build_family_model("diss-square", "z", 0.5, 3.0)
    assert m.hamiltonian_schedule.value(17.0) == 1.0
    assert m.dissipators[0][1].value(0.0) == 0.5
    assert m.dissipators[0][1].value(0.6 * m.period) == 0.0
    with pytest.raises(ModelError):
        build_family_model("drive-saw", "minus", 0.5, 2.0)
    with pytest.raises(ModelError):
        build_family_model("drive-cos", "plus", 0.5, 2.0)


def test_diss_cos_family_is_half_depth_offset_cosine():
    m = build_family_model("diss-cos", "minus", 0.8, 2.0)
    sched = m.dissipators[0][1]
    t = np.linspace(0, sched.period, 101)
    assert np.allclose(sched.values(t), 0.4 * (1 + np.cos(2.0 * t)), atol=1e-14)
    assert sched.min_value() >= 0.0


def test_static_model_reference_period():
    m = static_model("minus", 1.0, reference_omega=4.0 * math.pi)
    assert m.period == pytest.approx(0.5)
    bare = LindbladModel(
        hamiltonian_op=-pauli("x"),
        hamiltonian_schedule=PeriodicSchedule.constant(1.0),
    )
    with pytest.raises(ModelError):
        bare.omega


def test_with_gamma_replaces_strengths():
    m = build_family_model("diss-square", "minus", 0.5, 3.0)
    m2 = with_gamma(m, 1.25)
    assert m2.dissipators[0][1].base == 1.25
    assert m.dissipators[0][1].base == 0.5
