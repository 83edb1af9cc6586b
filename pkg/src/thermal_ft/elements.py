"""Beam splitter, phase plates and object transmittance."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, UsageError
from .grid import ComplexField, Grid

#: Constant phase of the mutual intensity between the two detector planes
#: relative to the object's Fourier transform, for the kernels used in
#: :mod:`thermal_ft.propagation`. The reference-arm Gaussian integral over the
#: source contributes ``exp(+jπ/4)``; the three ``1/(jλz)`` prefactors
#: (one conjugated) contribute ``-j``.
FRESNEL_PAIR_PHASE = -np.pi / 4

#: Default compensation plate phase: cancels :data:`FRESNEL_PAIR_PHASE`.
P_PRIME_DEFAULT = -FRESNEL_PAIR_PHASE

#: Phase of the J plate in the reference (upper) arm.
J_PLATE_PHASE = np.pi / 2


@dataclass(frozen=True)
class PhasePlateSetting:
    j_plate_on: bool = False
    p_prime_on: bool = True
    p_prime_phase: float = P_PRIME_DEFAULT

    def __post_init__(self):
        if not (-np.pi < self.p_prime_phase <= np.pi):
            raise ConfigError(
                f"p_prime_phase must lie in (-pi, pi], got {self.p_prime_phase}", "E_PLATES"
            )


@dataclass(frozen=True, eq=False)
class Transmittance:
    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=complex)
        if values.shape != (self.grid.count,):
            raise UsageError(
                f"transmittance has {values.shape} values, grid expects ({self.grid.count},)"
            )
        if not np.all(np.isfinite(values)):
            raise UsageError("transmittance values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def __eq__(self, other):
        if not isinstance(other, Transmittance):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.values, other.values)

    __hash__ = None


def _mix(a, b):
    # minus sign (half-wave loss) lands on output port 1
    s = np.sqrt(0.5)
    return (a - b) * s, (a + b) * s


def beam_splitter_mix(a: ComplexField, b: ComplexField):
    """50/50 lossless splitter: ``E1 = (a - b)/√2``, ``E2 = (a + b)/√2``."""
    if a.grid != b.grid:
        raise UsageError("beam splitter inputs must share a grid")
    e1, e2 = _mix(a.samples, b.samples)
    return ComplexField(a.grid, e1), ComplexField(a.grid, e2)


def apply_object(field: ComplexField, f: Transmittance) -> ComplexField:
    if field.grid != f.grid:
        raise UsageError("field and transmittance must share a grid")
    return ComplexField(field.grid, field.samples * f.values)


def arm_phases(setting: PhasePlateSetting):
    """``(upper_phase, lower_phase)`` in radians for a plate setting."""
    upper = J_PLATE_PHASE if setting.j_plate_on else 0.0
    lower = setting.p_prime_phase if setting.p_prime_on else 0.0
    return upper, lower
