import numpy as np
import pytest
from hypothesis import given, strategies as st

from thermal_ft.elements import (
    FRESNEL_PAIR_PHASE,
    J_PLATE_PHASE,
    PhasePlateSetting,
    Transmittance,
    apply_object,
    arm_phases,
    beam_splitter_mix,
)
from thermal_ft.errors import ConfigError, UsageError
from thermal_ft.grid import ComplexField, Grid, intensity

G = Grid(0, 1, 4)


def field(values):
    return ComplexField(G, values)


def test_mix_ports():
    e1, e2 = beam_splitter_mix(field(np.ones(4)), field(np.ones(4)))
    np.testing.assert_array_equal(e1.samples, 0)
    np.testing.assert_allclose(e2.samples, np.sqrt(2), rtol=1e-15)


def test_mix_single_input():
    a = field([1, 2j, -3, 0.5 + 0.5j])
    e1, e2 = beam_splitter_mix(a, field(np.zeros(4)))
    np.testing.assert_allclose(e1.samples, a.samples / np.sqrt(2), rtol=1e-15)
    np.testing.assert_allclose(e2.samples, a.samples / np.sqrt(2), rtol=1e-15)


def test_mix_energy_and_inverse(rng):
    g = Grid(0, 1, 1000)
    a = ComplexField(g, rng.normal(size=1000) + 1j * rng.normal(size=1000))
    b = ComplexField(g, rng.normal(size=1000) + 1j * rng.normal(size=1000))
    e1, e2 = beam_splitter_mix(a, b)
    np.testing.assert_allclose(intensity(e1) + intensity(e2), intensity(a) + intensity(b), rtol=1e-12)
    s = np.sqrt(2)
    np.testing.assert_allclose((e2.samples * s + e1.samples * s) / 2, a.samples, rtol=0, atol=1e-14)
    np.testing.assert_allclose((e2.samples * s - e1.samples * s) / 2, b.samples, rtol=0, atol=1e-14)


@given(st.complex_numbers(max_magnitude=1e8, allow_nan=False, allow_infinity=False),
       st.complex_numbers(max_magnitude=1e8, allow_nan=False, allow_infinity=False))
def test_mix_energy_property(a, b):
    g = Grid(0, 1, 2)
    e1, e2 = beam_splitter_mix(ComplexField(g, [a, a]), ComplexField(g, [b, b]))
    lhs = intensity(e1) + intensity(e2)
    rhs = abs(a) ** 2 + abs(b) ** 2
    np.testing.assert_allclose(lhs, rhs, rtol=1e-12, atol=1e-300)


def test_mix_grid_mismatch():
    with pytest.raises(UsageError):
        beam_splitter_mix(field(np.ones(4)), ComplexField(Grid(0, 2, 4), np.ones(4)))


def test_apply_object():
    a = field([1, 2j, -3, 1 + 1j])
    assert apply_object(a, Transmittance(G, np.ones(4))) == a
    assert not np.any(apply_object(a, Transmittance(G, np.zeros(4))).samples)
    shifted = apply_object(a, Transmittance(G, 1j * np.ones(4)))
    np.testing.assert_allclose(intensity(shifted), intensity(a))
    np.testing.assert_allclose(shifted.samples, a.samples * np.exp(1j * np.pi / 2), atol=1e-15)
    with pytest.raises(UsageError):
        apply_object(a, Transmittance(Grid(0, 1, 3), np.ones(3)))


def test_arm_phases():
    assert arm_phases(PhasePlateSetting(False, False)) == (0, 0)
    assert arm_phases(PhasePlateSetting(True, False)) == (np.pi / 2, 0)
    assert J_PLATE_PHASE == np.pi / 2
    upper, lower = arm_phases(PhasePlateSetting(False, True))
    assert upper == 0
    # default P' cancels the constant phase of the Fresnel pair
    assert lower == -FRESNEL_PAIR_PHASE == pytest.approx(np.pi / 4)
    assert arm_phases(PhasePlateSetting(False, True, -0.3)) == (0, -0.3)


@pytest.mark.parametrize("phase", [-np.pi, 3.5, -4.0])
def test_plate_phase_range(phase):
    with pytest.raises(ConfigError):
        PhasePlateSetting(p_prime_phase=phase)
