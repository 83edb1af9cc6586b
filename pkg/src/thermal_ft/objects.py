"""Test objects and their closed-form Fourier transforms.

Fourier convention throughout: ``F(ν) = ∫ f(ξ) exp(-2πj ν ξ) dξ`` with ν in 1/µm.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .elements import Transmittance
from .errors import ConfigError
from .grid import Grid


def rect(u):
    """Unit rectangle; 1/2 on the edges ``|u| = 1/2``."""
    a = np.abs(np.asarray(u, dtype=float))
    out = np.where(a < 0.5, 1.0, 0.0)
    out = np.where(a == 0.5, 0.5, out)
    return out if out.ndim else float(out)


def sinc(u):
    """Normalized sinc, ``sin(πu) / (πu)``."""
    out = np.sinc(np.asarray(u, dtype=float))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class ConceivedObjectParams:
    """Two-level object: a raised cosine in the real part, two bars in the imaginary part.

    ``f(ξ) = {(1 + cos(cos_freq·ξ)) + j[rect((ξ+off)/w) + rect((ξ-off)/w)]}·rect(ξ/support)``
    """

    cos_freq: float = 0.05
    rect_offset: float = 150.0
    rect_width: float = 105.0
    support_width: float = 1000.0

    def __post_init__(self):
        for name in ("cos_freq", "rect_offset", "rect_width", "support_width"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive", "E_OBJECT")
        if self.rect_offset + self.rect_width / 2 > self.support_width / 2:
            raise ConfigError("imaginary bars extend past the object support", "E_OBJECT")


def conceived_object(xi, params=ConceivedObjectParams()):
    xi = np.asarray(xi, dtype=float)
    p = params
    real = 1 + np.cos(p.cos_freq * xi)
    imag = rect((xi + p.rect_offset) / p.rect_width) + rect((xi - p.rect_offset) / p.rect_width)
    out = (real + 1j * imag) * rect(xi / p.support_width)
    return out if out.ndim else complex(out)


def analytic_ft_real(nu, params=ConceivedObjectParams()):
    """Real part of the object's transform: a central sinc with two cosine sidebands."""
    p = params
    L = p.support_width
    shift = p.cos_freq / (2 * np.pi)
    nu = np.asarray(nu, dtype=float)
    return (
        0.5 * L * sinc(L * (nu + shift))
        + L * sinc(L * nu)
        + 0.5 * L * sinc(L * (nu - shift))
    )


def analytic_ft_imag(nu, params=ConceivedObjectParams()):
    p = params
    w = p.rect_width
    nu = np.asarray(nu, dtype=float)
    return 2 * w * sinc(w * nu) * np.cos(2 * np.pi * p.rect_offset * nu)


def analytic_ft(nu, params=ConceivedObjectParams()):
    return analytic_ft_real(nu, params) + 1j * analytic_ft_imag(nu, params)


def rect_object(xi, center, width):
    """Real bar ``rect((ξ - center) / width)``; asymmetric when ``center != 0``."""
    return rect((np.asarray(xi, dtype=float) - center) / width).astype(complex)


def rect_object_ft(nu, center, width):
    nu = np.asarray(nu, dtype=float)
    return width * sinc(width * nu) * np.exp(-2j * np.pi * nu * center)


def sample_transmittance(grid: Grid, params=ConceivedObjectParams()) -> Transmittance:
    """The conceived object evaluated on ``grid``; the grid must cover its support."""
    half = params.support_width / 2
    if grid.center - grid.half_width > -half or grid.center + grid.half_width < half:
        raise ConfigError(
            f"object grid [{grid.center - grid.half_width:g}, {grid.center + grid.half_width:g}] um "
            f"does not cover the {params.support_width:g} um support",
            "E_OBJECT_GRID",
        )
    return Transmittance(grid, conceived_object(grid.positions, params))
