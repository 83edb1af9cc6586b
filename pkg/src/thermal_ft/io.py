"""CSV results and run manifests."""
from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import ConfigError

RESULT_COLUMNS = (
    "eta_um", "I1", "I2", "I1p", "I2p", "re_meas", "im_meas",
    "re_oracle", "im_oracle", "re_analytic", "im_analytic",
)
RESULTS_FILE = "results.csv"
MANIFEST_FILE = "manifest.txt"
CONFIG_FILE = "config.txt"


@dataclass(frozen=True)
class RunManifest:
    config_digest: str
    master_seed: int
    tool_version: str = __version__
    wall_time: float = 0.0

    def dumps(self):
        return (
            f"config_digest = {self.config_digest}\n"
            f"master_seed = {self.master_seed}\n"
            f"tool_version = {self.tool_version}\n"
            f"wall_time_s = {self.wall_time:.3f}\n"
        )

    @classmethod
    def loads(cls, text):
        kv = dict(
            (part.strip() for part in line.split("=", 1))
            for line in text.splitlines() if "=" in line
        )
        return cls(kv["config_digest"], int(kv["master_seed"]), kv["tool_version"],
                   float(kv["wall_time_s"]))


def write_csv(path, columns, table):
    table = np.asarray(table, dtype=float)
    with open(path, "w", newline="") as fh:
        fh.write(",".join(columns) + "\n")
        for row in table:
            fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def read_csv(path):
    """Columns of a CSV written by :func:`write_csv`, as a dict of arrays."""
    with open(path) as fh:
        header = fh.readline().strip().split(",")
    data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
    return {name: data[:, i] for i, name in enumerate(header)}


def _out_dir(path):
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ConfigError(f"cannot create output directory {out}: {exc}", "E_IO") from exc
    return out


def write_results(result, references, path, manifest=None, config_text=None):
    """Write ``results.csv`` (one row per detector sample) and the manifest.

    ``references`` maps ``"oracle"`` and ``"analytic"`` to complex arrays on
    the detector grid.
    """
    out = _out_dir(path)
    oracle = np.asarray(references["oracle"], dtype=complex)
    analytic = np.asarray(references["analytic"], dtype=complex)
    table = np.column_stack([
        result.detector_grid.positions,
        result.I1, result.I2, result.I1p, result.I2p,
        result.re_part, result.im_part,
        oracle.real, oracle.imag,
        analytic.real, analytic.imag,
    ])
    try:
        write_csv(out / RESULTS_FILE, RESULT_COLUMNS, table)
        if manifest is not None:
            (out / MANIFEST_FILE).write_text(manifest.dumps())
        if config_text is not None:
            (out / CONFIG_FILE).write_text(config_text)
    except OSError as exc:
        raise ConfigError(f"cannot write results to {out}: {exc}", "E_IO") from exc
    return out / RESULTS_FILE


class Stopwatch:
    def __enter__(self):
        self.start = time.perf_counter()
        self.elapsed = 0.0
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start
