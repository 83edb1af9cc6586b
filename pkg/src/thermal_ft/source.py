"""Seeded chaotic-light source realizations.

Each realization's seed is derived from ``(master_seed, index, tag)`` by a
SplitMix64 cascade, and its field is drawn from a Philox counter generator
keyed by that seed, so realization ``n`` never depends on realizations
``0..n-1``. Gaussian samples come from the polar Box-Muller transform applied
to raw 64-bit words rather than from numpy's distribution methods, which are
not covered by numpy's stream-compatibility guarantee.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import ComplexField, Grid

_MASK64 = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15


def splitmix64(z):
    """SplitMix64 finalizer (Steele, Lea & Flood 2014); a bijection on 64-bit words.

    Accepts a Python int or a numpy ``uint64`` array.
    """
    if isinstance(z, np.ndarray):
        z = z.astype(np.uint64) + np.uint64(_GOLDEN)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        return z ^ (z >> np.uint64(31))
    z = (int(z) + _GOLDEN) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def realization_seed(master_seed, realization_index, setting_tag=0):
    """64-bit seed for one realization of one measurement setting.

    ``seed = sm(sm(sm(master) ^ index) ^ tag)`` with ``sm`` = :func:`splitmix64`.
    For fixed master and tag the map index -> seed is a bijection, so distinct
    indices never collide. ``realization_index`` may be a ``uint64`` array.
    """
    if isinstance(realization_index, np.ndarray):
        base = np.uint64(splitmix64(int(master_seed) & _MASK64))
        inner = splitmix64(realization_index.astype(np.uint64) ^ base)
        return splitmix64(inner ^ np.uint64(int(setting_tag) & _MASK64))
    inner = splitmix64(splitmix64(int(master_seed) & _MASK64) ^ (int(realization_index) & _MASK64))
    return splitmix64(inner ^ (int(setting_tag) & _MASK64))


@dataclass(frozen=True)
class SourceConfig:
    grid: Grid
    mean_intensity: float = 1.0
    master_seed: int = 0

    def __post_init__(self):
        if not (self.mean_intensity > 0 and np.isfinite(self.mean_intensity)):
            raise ConfigError(
                f"mean intensity must be > 0, got {self.mean_intensity}", "E_SOURCE"
            )

    @property
    def sample_variance(self):
        """Per-sample ``<|E|^2>``: the delta correlation discretized as ``I / Δx``."""
        return self.mean_intensity / self.grid.spacing


def circular_gaussian(seed, count):
    """``count`` unit-power circular complex Gaussians from a Philox stream.

    Polar Box-Muller: ``sqrt(-ln u1) * exp(2πj u2)`` with ``u1`` in (0, 1] and
    ``u2`` in [0, 1), each built from the top 53 bits of one 64-bit word.
    ``|z|^2 = -ln u1`` is exactly Exp(1) and the phase is uniform.
    """
    bitgen = np.random.Philox(key=np.array([seed, 0], dtype=np.uint64))
    words = bitgen.random_raw(2 * count).reshape(count, 2)
    top = words >> np.uint64(11)
    u1 = (top[:, 0] + 1.0) * 2.0**-53
    u2 = top[:, 1] * 2.0**-53
    radius = np.sqrt(-np.log(u1))
    angle = 2 * np.pi * u2
    return radius * np.cos(angle) + 1j * (radius * np.sin(angle))


def sample_thermal_array(config: SourceConfig, seeds):
    """Fields for several seeds at once, shape ``(grid.count, len(seeds))``."""
    scale = np.sqrt(config.sample_variance)
    out = np.empty((config.grid.count, len(seeds)), dtype=complex)
    for col, seed in enumerate(seeds):
        out[:, col] = circular_gaussian(int(seed), config.grid.count)
    out *= scale
    return out


def sample_thermal(config: SourceConfig, seed) -> ComplexField:
    """One instantaneous chaotic field; bit-identical for a given seed."""
    return ComplexField(config.grid, sample_thermal_array(config, [seed])[:, 0])
