"""Numeric comparison of measured, oracle and analytic signals.

Results are only defined up to a complex constant, so comparisons first fit
that constant by least squares.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

import numpy as np

from .errors import DomainError, UsageError


def _pair(measured, reference, dtype=complex):
    m = np.asarray(measured, dtype=dtype).ravel()
    r = np.asarray(reference, dtype=dtype).ravel()
    if m.shape != r.shape:
        raise UsageError(f"length mismatch: {m.size} vs {r.size}")
    if m.size < 2:
        raise UsageError("need at least two samples")
    return m, r


def fit_complex_scale(measured, reference):
    """``c`` minimizing ``Σ|measured - c·reference|²``."""
    m, r = _pair(measured, reference)
    power = np.vdot(r, r).real
    if power == 0:
        raise DomainError("reference is identically zero")
    return complex(np.vdot(r, m) / power)


def pearson(a, b):
    a, b = _pair(a, b, float)
    a = a - a.mean()
    b = b - b.mean()
    na, nb = np.linalg.norm(a), np.linalg.norm(b)
    if na == 0 or nb == 0:
        raise DomainError("pearson correlation undefined for constant input")
    return float(np.clip(np.dot(a, b) / (na * nb), -1.0, 1.0))


def nrmse(measured, reference):
    """``‖m - c·r‖ / ‖c·r‖`` with ``c`` from :func:`fit_complex_scale`."""
    m, r = _pair(measured, reference)
    c = fit_complex_scale(m, r)
    fitted = c * r
    denom = np.linalg.norm(fitted)
    if denom == 0:
        # measured is orthogonal to the reference: no part of it is explained
        return 1.0
    return float(np.linalg.norm(m - fitted) / denom)


@dataclass(frozen=True)
class ComparisonReport:
    fitted_scale: complex
    pearson_re: float
    pearson_im: float
    nrmse: float
    window: Tuple[float, float]

    def as_dict(self):
        return {
            "fitted_scale_re": self.fitted_scale.real,
            "fitted_scale_im": self.fitted_scale.imag,
            "pearson_re": self.pearson_re,
            "pearson_im": self.pearson_im,
            "nrmse": self.nrmse,
            "window_min_um": self.window[0],
            "window_max_um": self.window[1],
        }


def window_mask(eta, window):
    eta = np.asarray(eta, dtype=float)
    return (eta >= window[0]) & (eta <= window[1])


def compare(measured, reference, eta, window=(-400.0, 400.0)):
    """Fit the complex scale on the window, then correlate real and imaginary parts."""
    mask = window_mask(eta, window)
    m = np.asarray(measured, dtype=complex)[mask]
    r = np.asarray(reference, dtype=complex)[mask]
    c = fit_complex_scale(m, r)
    fitted = c * r
    return ComparisonReport(
        fitted_scale=c,
        pearson_re=pearson(m.real, fitted.real),
        pearson_im=pearson(m.imag, fitted.imag),
        nrmse=nrmse(m, r),
        window=(float(window[0]), float(window[1])),
    )
