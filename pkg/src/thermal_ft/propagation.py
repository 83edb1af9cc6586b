"""Fresnel propagation between planes as dense transfer matrices.

The kernel is evaluated at grid points and weighted by the source spacing
(midpoint rule), so a propagation is one matrix-vector product. Matrices are
built once per arm and reused for every realization.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DomainError, UsageError
from .grid import ComplexField, Grid, SystemGeometry


def fresnel_kernel(x_src, x_dst, dist, wavelength):
    """``exp(jkd) / (j λ d) * exp(jk (x_dst - x_src)^2 / (2d))``, broadcasting over arrays."""
    if not dist > 0:
        raise DomainError(f"propagation distance must be > 0, got {dist}")
    if not wavelength > 0:
        raise DomainError(f"wavelength must be > 0, got {wavelength}")
    k = 2 * np.pi / wavelength
    sep = np.subtract(x_dst, x_src)
    # reduce the large k*d term before adding the small quadratic one
    carrier = np.mod(k * dist, 2 * np.pi)
    phase = carrier + k * sep**2 / (2 * dist)
    return np.exp(1j * phase) / (1j * wavelength * dist)


@dataclass(frozen=True)
class SamplingReport:
    label: str
    max_frequency: float
    nyquist: float

    @property
    def passed(self):
        return self.max_frequency < self.nyquist

    @property
    def margin(self):
        """Nyquist limit over the kernel's highest local frequency."""
        return np.inf if self.max_frequency == 0 else self.nyquist / self.max_frequency

    def __str__(self):
        status = "ok" if self.passed else "UNDERSAMPLED"
        return (
            f"{self.label}: max kernel frequency {self.max_frequency:.4g} /um, "
            f"Nyquist {self.nyquist:.4g} /um, margin {self.margin:.3g}x [{status}]"
        )


def validate_sampling(src: Grid, dst: Grid, dist, wavelength, label="src->dst"):
    """Check the kernel chirp is resolved on both grids.

    The local frequency of the kernel is ``|x_dst - x_src| / (λ d)``; it must
    stay below ``1 / (2 Δ)`` for the coarser of the two spacings.
    """
    lo_s, hi_s = src.center - src.half_width, src.center + src.half_width
    lo_d, hi_d = dst.center - dst.half_width, dst.center + dst.half_width
    max_sep = max(abs(hi_d - lo_s), abs(hi_s - lo_d))
    max_freq = max_sep / (wavelength * dist)
    nyquist = 1.0 / (2.0 * max(src.spacing, dst.spacing))
    return SamplingReport(label, max_freq, nyquist)


@dataclass(frozen=True, eq=False)
class TransferMatrix:
    """Kernel samples ``entries[m, i]`` mapping a field on ``src`` to ``dst``."""

    src: Grid
    dst: Grid
    entries: np.ndarray = field(repr=False)
    label: str = ""

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        if entries.shape != (self.dst.count, self.src.count):
            raise UsageError(
                f"matrix shape {entries.shape} does not match grids "
                f"({self.dst.count}, {self.src.count})"
            )
        if not np.all(np.isfinite(entries)):
            raise UsageError("transfer matrix entries must be finite")
        entries.setflags(write=False)
        object.__setattr__(self, "entries", entries)

    @property
    def weighted(self):
        """Entries with the quadrature weight folded in."""
        return self.entries * self.src.spacing

    def apply(self, samples):
        """Propagate raw samples, shape ``(src.count,)`` or ``(src.count, batch)``."""
        return (self.entries @ samples) * self.src.spacing


def build_transfer_matrix(src: Grid, dst: Grid, dist, geometry: SystemGeometry, label=None):
    label = label or f"{src.count}pt -> {dst.count}pt over {dist:g} um"
    report = validate_sampling(src, dst, dist, geometry.wavelength, label)
    if not report.passed:
        raise ConfigError(f"sampling check failed for {report}", "E_SAMPLING")
    x = src.positions
    eta = dst.positions
    entries = fresnel_kernel(x[None, :], eta[:, None], dist, geometry.wavelength)
    return TransferMatrix(src, dst, entries, label)


def propagate(field: ComplexField, T: TransferMatrix) -> ComplexField:
    if field.grid != T.src:
        raise UsageError(f"field grid {field.grid} does not match matrix source {T.src}")
    return ComplexField(T.dst, T.apply(field.samples))
