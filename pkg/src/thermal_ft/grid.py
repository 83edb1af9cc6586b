"""Coordinate grids, complex field containers and pointwise field operations.

All lengths are in micrometres.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, UsageError


@dataclass(frozen=True)
class Grid:
    """Uniform 1-D axis, symmetric about ``center``.

    Sample ``i`` sits at ``center + (i - (count - 1) / 2) * spacing``.
    """

    center: float
    spacing: float
    count: int

    def __post_init__(self):
        if not np.isfinite(self.center):
            raise ConfigError("grid center must be finite", "E_GRID")
        if not (self.spacing > 0 and np.isfinite(self.spacing)):
            raise ConfigError(f"grid spacing must be > 0, got {self.spacing}", "E_GRID")
        if int(self.count) != self.count or self.count < 2:
            raise ConfigError(f"grid count must be an integer >= 2, got {self.count}", "E_GRID")
        object.__setattr__(self, "count", int(self.count))

    @classmethod
    def from_extent(cls, extent, count, center=0.0):
        """Grid of ``count`` points whose cells tile ``extent`` (spacing = extent / count)."""
        return cls(center=center, spacing=extent / count, count=count)

    @property
    def positions(self):
        return grid_positions(self)

    @property
    def half_width(self):
        """Distance from the center to the outermost sample."""
        return 0.5 * (self.count - 1) * self.spacing


def grid_positions(grid: Grid) -> np.ndarray:
    offsets = np.arange(grid.count) - 0.5 * (grid.count - 1)
    return grid.center + offsets * grid.spacing


def _frozen(values):
    arr = np.array(values, dtype=complex)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class ComplexField:
    """One realization of a scalar optical field sampled on ``grid``."""

    grid: Grid
    samples: np.ndarray = field(repr=False)

    def __post_init__(self):
        samples = _frozen(self.samples)
        if samples.shape != (self.grid.count,):
            raise UsageError(
                f"field has {samples.shape} samples, grid expects ({self.grid.count},)"
            )
        if not np.all(np.isfinite(samples)):
            raise UsageError("field samples must be finite")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def zeros(cls, grid):
        return cls(grid, np.zeros(grid.count, dtype=complex))

    def __eq__(self, other):
        if not isinstance(other, ComplexField):
            return NotImplemented
        return self.grid == other.grid and np.array_equal(self.samples, other.samples)

    __hash__ = None


def _require_centered(grid):
    if grid.center != 0:
        raise ConfigError(
            f"flip needs an origin-centered grid, got center={grid.center}", "E_GRID_CENTER"
        )


def flip(field: ComplexField) -> ComplexField:
    """Mirror the field about the origin: ``out(eta) = in(-eta)``."""
    _require_centered(field.grid)
    return ComplexField(field.grid, field.samples[::-1])


def apply_phase(field: ComplexField, phi: float) -> ComplexField:
    """Multiply every sample by ``exp(1j * phi)``."""
    if phi == 0:
        return field
    return ComplexField(field.grid, field.samples * np.exp(1j * phi))


def intensity(field: ComplexField) -> np.ndarray:
    s = field.samples
    return s.real**2 + s.imag**2


@dataclass(frozen=True)
class SystemGeometry:
    """Wavelength and the three arm distances of the interferometer.

    ``d1``: source to object, ``d2``: object to detector, ``d``: source to
    detector along the reference arm. Equal optical arms need ``d == d1 + d2``.
    """

    wavelength: float = 0.532
    d1: float = 60_000.0
    d2: float = 75_000.0
    d: float = 135_000.0

    def __post_init__(self):
        for name in ("wavelength", "d1", "d2", "d"):
            value = getattr(self, name)
            if not (value > 0 and np.isfinite(value)):
                raise ConfigError(f"{name} must be positive, got {value}", "E_GEOMETRY")
        if abs(self.d - (self.d1 + self.d2)) > 1e-9 * self.d:
            raise ConfigError(
                f"arm lengths differ: d={self.d} but d1+d2={self.d1 + self.d2}",
                "E_ARM_LENGTH",
            )

    @property
    def wavenumber(self):
        return 2 * np.pi / self.wavelength
