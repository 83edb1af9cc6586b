"""Flat ``key = value`` run configuration.

Keys are dotted (``geometry.d1_um``, ``grids.detector.count``); ``#`` starts a
comment. Omitted keys take the defaults below. The canonical form sorts keys
and prints numbers with full round-trip precision; its SHA-256 is the config
digest.
"""
from __future__ import annotations

import hashlib
import math
from pathlib import Path

import numpy as np

from .elements import P_PRIME_DEFAULT, Transmittance
from .errors import ConfigError
from .experiment import DEFAULT_CHUNK, ExperimentConfig, default_plates
from .grid import Grid, SystemGeometry
from .objects import ConceivedObjectParams, rect_object, sample_transmittance
from .source import SourceConfig

OBJECT_KINDS = ("conceived", "rect", "opaque")

# key -> (type, default)
SCHEMA = {
    "seed": (int, 0),
    "geometry.wavelength_um": (float, 0.532),
    "geometry.d1_um": (float, 60_000.0),
    "geometry.d2_um": (float, 75_000.0),
    "geometry.d_um": (float, 135_000.0),
    "source.mean_intensity": (float, 1.0),
    "source.n_realizations": (int, 20_000),
    "source.shared_noise": (bool, False),
    "grids.source.count": (int, 1536),
    "grids.source.spacing_um": (float, 3000.0 / 1536),
    "grids.source.center_um": (float, 0.0),
    "grids.object.count": (int, 1024),
    "grids.object.spacing_um": (float, 1200.0 / 1024),
    "grids.object.center_um": (float, 0.0),
    "grids.detector.count": (int, 801),
    "grids.detector.spacing_um": (float, 1.0),
    "object.kind": (str, "conceived"),
    "object.cos_freq_per_um": (float, 0.05),
    "object.rect_offset_um": (float, 150.0),
    "object.rect_width_um": (float, 105.0),
    "object.support_width_um": (float, 1000.0),
    "object.bar_center_um": (float, 100.0),
    "object.bar_width_um": (float, 50.0),
    "plates.p_prime_on": (bool, True),
    "plates.p_prime_phase_rad": (float, P_PRIME_DEFAULT),
    "run.chunk_size": (int, DEFAULT_CHUNK),
    "analysis.window_um": (float, 400.0),
}


def _coerce(key, kind, raw):
    text = raw.strip()
    try:
        if kind is bool:
            low = text.lower()
            if low in ("true", "yes", "on", "1"):
                return True
            if low in ("false", "no", "off", "0"):
                return False
            raise ValueError(text)
        if kind is int:
            value = float(text)
            if not value.is_integer():
                raise ValueError(text)
            return int(value)
        if kind is float:
            value = float(text)
            if not math.isfinite(value):
                raise ValueError(text)
            return value
        return text.strip("\"'")
    except ValueError:
        raise ConfigError(f"{key}: cannot read {raw!r} as {kind.__name__}", "E_SCHEMA") from None


def read_document(text):
    """Parse ``key = value`` lines into a fully resolved settings dict."""
    values = {}
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'", "E_SCHEMA")
        key, raw = (part.strip() for part in line.split("=", 1))
        if key not in SCHEMA:
            raise ConfigError(f"line {lineno}: unknown key {key!r}", "E_SCHEMA")
        if key in values:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}", "E_SCHEMA")
        values[key] = _coerce(key, SCHEMA[key][0], raw)
    resolved = {key: default for key, (_, default) in SCHEMA.items()}
    resolved.update(values)
    if resolved["object.kind"] not in OBJECT_KINDS:
        raise ConfigError(
            f"object.kind must be one of {OBJECT_KINDS}, got {resolved['object.kind']!r}",
            "E_SCHEMA",
        )
    return resolved


def _format(value):
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def dump_settings(settings):
    return "".join(f"{key} = {_format(settings[key])}\n" for key in sorted(settings))


def conceived_params(s):
    return ConceivedObjectParams(
        cos_freq=s["object.cos_freq_per_um"],
        rect_offset=s["object.rect_offset_um"],
        rect_width=s["object.rect_width_um"],
        support_width=s["object.support_width_um"],
    )


def build_transmittance(s, grid):
    kind = s["object.kind"]
    if kind == "conceived":
        return sample_transmittance(grid, conceived_params(s))
    if kind == "rect":
        return Transmittance(grid, rect_object(grid.positions, s["object.bar_center_um"],
                                               s["object.bar_width_um"]))
    return Transmittance(grid, np.zeros(grid.count, dtype=complex))


def build_config(s):
    if s["source.n_realizations"] < 1:
        raise ConfigError("source.n_realizations must be >= 1", "E_REALIZATIONS")
    geometry = SystemGeometry(
        wavelength=s["geometry.wavelength_um"],
        d1=s["geometry.d1_um"],
        d2=s["geometry.d2_um"],
        d=s["geometry.d_um"],
    )
    src = Grid(s["grids.source.center_um"], s["grids.source.spacing_um"], s["grids.source.count"])
    obj = Grid(s["grids.object.center_um"], s["grids.object.spacing_um"], s["grids.object.count"])
    det = Grid(0.0, s["grids.detector.spacing_um"], s["grids.detector.count"])
    return ExperimentConfig(
        geometry=geometry,
        source=SourceConfig(src, s["source.mean_intensity"], s["seed"]),
        object_grid=obj,
        detector_grid=det,
        transmittance=build_transmittance(s, obj),
        plates=default_plates(s["plates.p_prime_on"], s["plates.p_prime_phase_rad"]),
        n_realizations=s["source.n_realizations"],
        shared_noise=s["source.shared_noise"],
        chunk_size=s["run.chunk_size"],
        settings=dict(s),
    )


def parse_config(text, **overrides) -> ExperimentConfig:
    """Validated config from a document; ``overrides`` replace keys (dots as given)."""
    settings = read_document(text)
    for key, value in overrides.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown key {key!r}", "E_SCHEMA")
        settings[key] = _coerce(key, SCHEMA[key][0], _format(value))
    return build_config(settings)


def load_config(source, **overrides):
    """``source`` is ``"default"`` or a path to a config document."""
    if source in (None, "default"):
        text = ""
    else:
        try:
            text = Path(source).read_text()
        except OSError as exc:
            raise ConfigError(f"cannot read config {source}: {exc}", "E_IO") from exc
    return parse_config(text, **overrides)


def dump_config(config: ExperimentConfig) -> str:
    if config.settings is None:
        raise ConfigError("config was not built from a document; nothing to serialize", "E_SCHEMA")
    return dump_settings(config.settings)


def config_digest(config: ExperimentConfig) -> str:
    return hashlib.sha256(dump_config(config).encode()).hexdigest()
