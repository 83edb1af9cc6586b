"""End-to-end simulation of the two-arm thermal-light Fourier interferometer.

Light from a chaotic source reaches two detector planes along two arms of
equal length. The lower arm passes the object; the upper (reference) arm
reaches the detector mirrored, so lower-arm point ``η`` meets reference-arm
point ``-η`` at the output beam splitter. Half the difference of the two
output intensities is the real part of the mutual intensity between the arms;
repeating with a π/2 plate in the reference arm gives the imaginary part. On
the mirrored coordinates the mutual intensity is the object's Fourier
transform at ``ν = 2η / (λ d2)`` up to a complex constant.
"""
from __future__ import annotations

import logging
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Tuple

import numpy as np

from .elements import (
    FRESNEL_PAIR_PHASE,
    PhasePlateSetting,
    Transmittance,
    _mix,
    arm_phases,
)
from .errors import ConfigError, UsageError
from .grid import ComplexField, Grid, SystemGeometry
from .objects import ConceivedObjectParams, sample_transmittance
from .propagation import build_transfer_matrix, validate_sampling
from .source import SourceConfig, realization_seed, sample_thermal_array

log = logging.getLogger(__name__)

WORKERS_ENV = "THERMAL_FT_WORKERS"

DEFAULT_SOURCE_GRID = Grid.from_extent(3000.0, 1536)
DEFAULT_OBJECT_GRID = Grid.from_extent(1200.0, 1024)
DEFAULT_DETECTOR_GRID = Grid(0.0, 1.0, 801)
DEFAULT_REALIZATIONS = 20_000
DEFAULT_CHUNK = 250


def default_plates(p_prime_on=True, p_prime_phase=None):
    """(J off, J on) settings sharing one P' state."""
    kw = {"p_prime_on": p_prime_on}
    if p_prime_phase is not None:
        kw["p_prime_phase"] = p_prime_phase
    return (PhasePlateSetting(j_plate_on=False, **kw), PhasePlateSetting(j_plate_on=True, **kw))


@dataclass(frozen=True, eq=False)
class ExperimentConfig:
    geometry: SystemGeometry
    source: SourceConfig
    object_grid: Grid
    detector_grid: Grid
    transmittance: Transmittance
    plates: Tuple[PhasePlateSetting, PhasePlateSetting] = field(default_factory=default_plates)
    n_realizations: int = DEFAULT_REALIZATIONS
    shared_noise: bool = False
    chunk_size: int = DEFAULT_CHUNK
    # resolved key/value document this config was parsed from, if any
    settings: Optional[Mapping[str, object]] = field(default=None, repr=False)

    def __post_init__(self):
        if int(self.n_realizations) != self.n_realizations or self.n_realizations < 1:
            raise ConfigError(
                f"n_realizations must be a positive integer, got {self.n_realizations}",
                "E_REALIZATIONS",
            )
        if int(self.chunk_size) != self.chunk_size or self.chunk_size < 1:
            raise ConfigError("chunk_size must be a positive integer", "E_CHUNK")
        if self.detector_grid.center != 0:
            raise ConfigError("detector grid must be centered on 0", "E_GRID_CENTER")
        if self.transmittance.grid != self.object_grid:
            raise ConfigError("transmittance is not sampled on the object grid", "E_OBJECT_GRID")
        if len(self.plates) != 2 or self.plates[0].j_plate_on or not self.plates[1].j_plate_on:
            raise ConfigError("plates must be a (J off, J on) pair", "E_PLATES")
        a, b = self.plates
        if (a.p_prime_on, a.p_prime_phase) != (b.p_prime_on, b.p_prime_phase):
            raise ConfigError("both J settings must use the same P' plate", "E_PLATES")
        for report in sampling_reports(self):
            if not report.passed:
                raise ConfigError(f"sampling check failed for {report}", "E_SAMPLING")

    @property
    def p_prime(self):
        return self.plates[0]


def sampling_reports(config):
    g = config.geometry
    return [
        validate_sampling(config.source.grid, config.object_grid, g.d1, g.wavelength, "source->object"),
        validate_sampling(config.object_grid, config.detector_grid, g.d2, g.wavelength, "object->detector"),
        validate_sampling(config.source.grid, config.detector_grid, g.d, g.wavelength, "source->detector"),
    ]


def default_config(transmittance=None, **overrides):
    """Default geometry and grids; keyword overrides replace fields."""
    object_grid = overrides.pop("object_grid", DEFAULT_OBJECT_GRID)
    if transmittance is None:
        transmittance = sample_transmittance(object_grid, ConceivedObjectParams())
    elif callable(transmittance):
        transmittance = Transmittance(object_grid, transmittance(object_grid.positions))
    seed = overrides.pop("seed", 0)
    base = dict(
        geometry=SystemGeometry(),
        source=SourceConfig(DEFAULT_SOURCE_GRID, 1.0, seed),
        object_grid=object_grid,
        detector_grid=DEFAULT_DETECTOR_GRID,
        transmittance=transmittance,
    )
    base.update(overrides)
    return ExperimentConfig(**base)


@dataclass(frozen=True, eq=False)
class AcquisitionResult:
    detector_grid: Grid
    I1: np.ndarray
    I2: np.ndarray
    I1p: np.ndarray
    I2p: np.ndarray
    re_part: np.ndarray
    im_part: np.ndarray
    complex_ft: np.ndarray
    realizations_used: int

    @property
    def mutual_intensity(self):
        """``re_part + j im_part``: measured mutual intensity before the phase rotation."""
        return self.re_part + 1j * self.im_part


@dataclass(frozen=True)
class _Arms:
    x_to_xi: np.ndarray  # weighted, (n_obj, n_src)
    xi_to_eta: np.ndarray  # weighted, (n_det, n_obj)
    x_to_eta: np.ndarray  # weighted, (n_det, n_src)


@lru_cache(maxsize=4)
def _arms(geometry, src, obj, det):
    t1 = build_transfer_matrix(src, obj, geometry.d1, geometry, "source->object")
    t2 = build_transfer_matrix(obj, det, geometry.d2, geometry, "object->detector")
    t3 = build_transfer_matrix(src, det, geometry.d, geometry, "source->detector")
    return _Arms(t1.weighted, t2.weighted, t3.weighted)


def arms_for(config):
    return _arms(config.geometry, config.source.grid, config.object_grid, config.detector_grid)


def resolve_workers(workers=None):
    if workers is None:
        workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    return max(1, int(workers))


def _chunks(n, size):
    return [(start, min(start + size, n)) for start in range(0, n, size)]


def _accumulate_chunk(config, arms, f, start, stop, measurements):
    """Summed output intensities for realizations ``start..stop-1``.

    ``measurements`` is a sequence of ``(upper_phase, lower_phase, tag)``;
    measurements sharing a tag see the same source realizations. Returns an
    array ``(len(measurements), 2, n_det)`` of (port 1, port 2) sums.
    """
    n_det = config.detector_grid.count
    out = np.zeros((len(measurements), 2, n_det))
    idx = np.arange(start, stop, dtype=np.uint64)
    fields = {}
    for k, (upper, lower, tag) in enumerate(measurements):
        if tag not in fields:
            seeds = realization_seed(config.source.master_seed, idx, tag)
            E = sample_thermal_array(config.source, seeds)
            lower_field = arms.xi_to_eta @ (f[:, None] * (arms.x_to_xi @ E))
            upper_field = (arms.x_to_eta @ E)[::-1]
            fields[tag] = (lower_field, upper_field)
        L, U = fields[tag]
        if lower:
            L = L * np.exp(1j * lower)
        if upper:
            U = U * np.exp(1j * upper)
        e1, e2 = _mix(L, U)
        out[k, 0] = np.sum(e1.real**2 + e1.imag**2, axis=1)
        out[k, 1] = np.sum(e2.real**2 + e2.imag**2, axis=1)
    return out


def accumulate_intensities(config, measurements, n_realizations=None, workers=None):
    """Mean port intensities for each measurement setting.

    Realizations are processed in fixed contiguous chunks of
    ``config.chunk_size`` and chunk sums are added in chunk order, so the
    result is bit-identical for any worker count.
    """
    n = config.n_realizations if n_realizations is None else int(n_realizations)
    if n < 1:
        raise ConfigError("need at least one realization", "E_REALIZATIONS")
    arms = arms_for(config)
    f = config.transmittance.values
    chunks = _chunks(n, config.chunk_size)
    workers = resolve_workers(workers)

    def work(bounds):
        return _accumulate_chunk(config, arms, f, bounds[0], bounds[1], measurements)

    total = np.zeros((len(measurements), 2, config.detector_grid.count))
    if workers == 1 or len(chunks) == 1:
        partials = map(work, chunks)
        for part in partials:
            total += part
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(work, chunks):
                total += part
    return total / n


def _measurement(config, setting_index, upper_offset=0.0):
    upper, lower = arm_phases(config.plates[setting_index])
    tag = 0 if config.shared_noise else setting_index
    return (upper + upper_offset, lower, tag)


def run_acquisition(config: ExperimentConfig, workers=None, n_realizations=None):
    """Simulate both J settings and extract the complex transform.

    Per realization and setting: lower arm through the object, reference arm
    mirrored, the two mixed on the beam splitter, and both port intensities
    accumulated. ``re_part = (I2 - I1)/2`` and ``im_part = (I2' - I1')/2``.
    """
    n = config.n_realizations if n_realizations is None else int(n_realizations)
    measurements = [_measurement(config, 0), _measurement(config, 1)]
    log.info("acquiring %d realizations x %d settings", n, len(measurements))
    means = accumulate_intensities(config, measurements, n, workers)
    I1, I2 = means[0]
    I1p, I2p = means[1]
    re_part = (I2 - I1) / 2
    im_part = (I2p - I1p) / 2
    return AcquisitionResult(
        detector_grid=config.detector_grid,
        I1=I1,
        I2=I2,
        I1p=I1p,
        I2p=I2p,
        re_part=re_part,
        im_part=im_part,
        complex_ft=assemble_complex_ft(re_part, im_part, config.p_prime),
        realizations_used=n,
    )


def estimate_mutual_intensity(config, upper_offset=0.0, workers=None, n_realizations=None):
    """Complex mutual intensity from the two quadrature measurements.

    ``upper_offset`` adds a fixed phase to the reference arm on top of both
    settings (an extra J plate is ``π/2``).
    """
    measurements = [_measurement(config, 0, upper_offset), _measurement(config, 1, upper_offset)]
    means = accumulate_intensities(config, measurements, n_realizations, workers)
    re_part = (means[0, 1] - means[0, 0]) / 2
    im_part = (means[1, 1] - means[1, 0]) / 2
    return re_part + 1j * im_part


def _lower_response(config):
    arms = arms_for(config)
    f = config.transmittance.values
    return arms.xi_to_eta @ (f[:, None] * arms.x_to_xi)


def coherent_mode_oracle(config: ExperimentConfig) -> np.ndarray:
    """Deterministic mutual intensity ``<L(η) U*(-η)>`` for the J-off setting.

    With a delta-correlated source of per-sample power ``I/Δx`` the ensemble
    average collapses to one sum over source points. The P' phase is
    included; the J-on value is ``-j`` times this.
    """
    arms = arms_for(config)
    H_low = _lower_response(config)
    H_up = arms.x_to_eta[::-1]
    J = np.einsum("ij,ij->i", H_low, H_up.conj()) * config.source.sample_variance
    _, lower = arm_phases(config.plates[0])
    if lower:
        J = J * np.exp(1j * lower)
    return J


def arm_intensities(config):
    """Mean detector intensity of each arm alone, ``(lower, upper)``."""
    arms = arms_for(config)
    H_low = _lower_response(config)
    var = config.source.sample_variance
    lower = np.sum(H_low.real**2 + H_low.imag**2, axis=1) * var
    upper = np.sum(np.abs(arms.x_to_eta[::-1]) ** 2, axis=1) * var
    return lower, upper


def assemble_complex_ft(re_part, im_part, plates: PhasePlateSetting):
    """``re + j im``, rotated by the fixed Fresnel-pair phase unless P' already did it."""
    re_part = np.asarray(re_part, dtype=float)
    im_part = np.asarray(im_part, dtype=float)
    if re_part.shape != im_part.shape:
        raise UsageError(f"length mismatch: {re_part.shape} vs {im_part.shape}")
    z = re_part + 1j * im_part
    if not plates.p_prime_on:
        z = z * np.exp(-1j * FRESNEL_PAIR_PHASE)
    return z


def detector_frequencies(detector_grid: Grid, geometry: SystemGeometry):
    """Spatial frequency ``2η / (λ d2)`` sampled at each detector point."""
    return 2 * detector_grid.positions / (geometry.wavelength * geometry.d2)


@dataclass(frozen=True)
class Reconstruction:
    field: ComplexField
    frequencies: np.ndarray = field(repr=False)
    warnings: Tuple[str, ...] = ()


def invert_to_object(complex_ft, detector_grid: Grid, geometry: SystemGeometry, target_grid: Grid,
                     edge_tolerance=0.05):
    """Inverse transform by direct summation, ``f(ξ) = Σ Z(ν) exp(2πj ν ξ) Δν``.

    The result carries the same unknown complex constant as ``complex_ft``.
    ``warnings`` flags spectra that are still large at the edge of the
    frequency window and target grids wider than the alias period ``1/Δν``.
    """
    Z = np.asarray(complex_ft, dtype=complex)
    if Z.shape != (detector_grid.count,):
        raise UsageError(f"expected {detector_grid.count} spectrum samples, got {Z.shape}")
    nu = detector_frequencies(detector_grid, geometry)
    dnu = 2 * detector_grid.spacing / (geometry.wavelength * geometry.d2)
    xi = target_grid.positions
    kernel = np.exp(2j * np.pi * xi[:, None] * nu[None, :])
    values = kernel @ Z * dnu

    notes = []
    peak = np.max(np.abs(Z))
    if peak > 0:
        edge = max(1, detector_grid.count // 20)
        edge_level = max(np.max(np.abs(Z[:edge])), np.max(np.abs(Z[-edge:]))) / peak
        if edge_level > edge_tolerance:
            notes.append(
                f"spectrum still at {edge_level:.1%} of peak at |nu| = {nu[-1]:.4g} /um; "
                "frequency coverage is narrower than the object bandwidth"
            )
    span = target_grid.count * target_grid.spacing
    if span > 1 / dnu:
        notes.append(f"target grid spans {span:g} um, more than the alias period {1 / dnu:g} um")
    for note in notes:
        warnings.warn(note, stacklevel=2)
    return Reconstruction(ComplexField(target_grid, values), nu, tuple(notes))


@dataclass(frozen=True)
class ConvergencePoint:
    n_realizations: int
    relative_error: float


def relative_error(estimate, reference, mask=None):
    if mask is not None:
        estimate, reference = estimate[mask], reference[mask]
    return float(np.linalg.norm(estimate - reference) / np.linalg.norm(reference))


def convergence_sweep(config, ns: Sequence[int], window=(-400.0, 400.0), workers=None):
    """Relative L2 error of the Monte Carlo mutual intensity against the oracle for each N.

    Returns the points and the fitted log-log slope (``-0.5`` for an unbiased
    estimator).
    """
    oracle = coherent_mode_oracle(config)
    eta = config.detector_grid.positions
    mask = (eta >= window[0]) & (eta <= window[1])
    points = []
    for n in ns:
        est = estimate_mutual_intensity(config, workers=workers, n_realizations=n)
        points.append(ConvergencePoint(int(n), relative_error(est, oracle, mask)))
        log.info("N=%d relative error %.4g", n, points[-1].relative_error)
    slope = float(np.polyfit(np.log([p.n_realizations for p in points]),
                             np.log([p.relative_error for p in points]), 1)[0])
    return points, slope
