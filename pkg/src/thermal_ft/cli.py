"""Command line driver: ``thermal-ft {acquire,oracle,compare,invert,sweep-n}``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import compare, nrmse
from .config import conceived_params, config_digest, dump_config, load_config
from .errors import ThermalFTError
from .experiment import (
    assemble_complex_ft,
    coherent_mode_oracle,
    convergence_sweep,
    detector_frequencies,
    invert_to_object,
    run_acquisition,
)
from .io import (
    CONFIG_FILE,
    RESULTS_FILE,
    RunManifest,
    Stopwatch,
    read_csv,
    write_csv,
    write_results,
)
from .objects import analytic_ft, conceived_object, rect_object, rect_object_ft

log = logging.getLogger("thermal_ft")


def analytic_reference(config):
    """Closed-form transform of the configured object at ``ν = 2η/(λ d2)``."""
    s = config.settings
    nu = detector_frequencies(config.detector_grid, config.geometry)
    kind = s["object.kind"]
    if kind == "conceived":
        return analytic_ft(nu, conceived_params(s))
    if kind == "rect":
        return rect_object_ft(nu, s["object.bar_center_um"], s["object.bar_width_um"])
    return np.zeros_like(nu, dtype=complex)


def true_object(config):
    s = config.settings
    xi = config.object_grid.positions
    kind = s["object.kind"]
    if kind == "conceived":
        return conceived_object(xi, conceived_params(s))
    if kind == "rect":
        return rect_object(xi, s["object.bar_center_um"], s["object.bar_width_um"])
    return np.zeros_like(xi, dtype=complex)


def _load(args):
    overrides = {}
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if getattr(args, "realizations", None) is not None:
        overrides["source.n_realizations"] = args.realizations
    return load_config(args.config, **overrides)


def _window(config, args):
    half = args.window if getattr(args, "window", None) is not None else config.settings["analysis.window_um"]
    return (-half, half)


def cmd_acquire(args):
    config = _load(args)
    with Stopwatch() as clock:
        result = run_acquisition(config, workers=args.workers)
    refs = {"oracle": coherent_mode_oracle(config), "analytic": analytic_reference(config)}
    manifest = RunManifest(config_digest(config), config.source.master_seed, __version__, clock.elapsed)
    path = write_results(result, refs, args.out, manifest, dump_config(config))
    print(f"wrote {path} ({result.realizations_used} realizations, {clock.elapsed:.1f} s)")
    return 0


def cmd_oracle(args):
    config = _load(args)
    oracle = coherent_mode_oracle(config)
    analytic = analytic_reference(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([config.detector_grid.positions, oracle.real, oracle.imag,
                             analytic.real, analytic.imag])
    write_csv(out / "oracle.csv", ("eta_um", "re_oracle", "im_oracle", "re_analytic", "im_analytic"), table)
    (out / CONFIG_FILE).write_text(dump_config(config))
    report = compare(oracle, analytic, config.detector_grid.positions, _window(config, args))
    _print_report("oracle vs analytic", report)
    print(f"wrote {out / 'oracle.csv'}")
    return 0


def _print_report(title, report):
    print(title)
    for key, value in report.as_dict().items():
        print(f"  {key} = {value:.6g}")


def _run_dir_config(run_dir):
    return load_config(Path(run_dir) / CONFIG_FILE)


def cmd_compare(args):
    run_dir = Path(args.run)
    cols = read_csv(run_dir / RESULTS_FILE)
    config = _run_dir_config(run_dir)
    measured = cols["re_meas"] + 1j * cols["im_meas"]
    reference = cols[f"re_{args.against}"] + 1j * cols[f"im_{args.against}"]
    report = compare(measured, reference, cols["eta_um"], _window(config, args))
    _print_report(f"measured vs {args.against}", report)
    out = run_dir / f"compare_{args.against}.txt"
    out.write_text("".join(f"{k} = {v!r}\n" for k, v in report.as_dict().items()))
    print(f"wrote {out}")
    return 0


def cmd_invert(args):
    run_dir = Path(args.run)
    config = _run_dir_config(run_dir)
    cols = read_csv(run_dir / RESULTS_FILE)
    if args.use == "measured":
        spectrum = assemble_complex_ft(cols["re_meas"], cols["im_meas"], config.p_prime)
    else:
        spectrum = cols[f"re_{args.use}"] + 1j * cols[f"im_{args.use}"]
    recon = invert_to_object(spectrum, config.detector_grid, config.geometry, config.object_grid)
    truth = true_object(config)
    values = recon.field.samples
    table = np.column_stack([config.object_grid.positions, values.real, values.imag, truth.real, truth.imag])
    out = Path(args.out) if args.out else run_dir / f"object_{args.use}.csv"
    write_csv(out, ("xi_um", "re_recon", "im_recon", "re_true", "im_true"), table)
    if np.any(truth):
        on_support = np.abs(truth) > 0
        print(f"nrmse on support = {nrmse(values[on_support], truth[on_support]):.6g}")
    for note in recon.warnings:
        print(f"warning: {note}")
    print(f"wrote {out}")
    return 0


def cmd_sweep(args):
    config = _load(args)
    ns = [int(n) for n in args.ns.split(",") if n.strip()]
    points, slope = convergence_sweep(config, ns, _window(config, args), workers=args.workers)
    rows = [(p.n_realizations, p.relative_error) for p in points]
    print(f"{'N':>8}  relative_error")
    for n, err in rows:
        print(f"{n:>8}  {err:.6g}")
    print(f"slope = {slope:.4f}")
    if args.out:
        write_csv(args.out, ("n_realizations", "relative_error"), rows)
        print(f"wrote {args.out}")
    return 0


def build_parser():
    parser = argparse.ArgumentParser(prog="thermal-ft", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", default="default", help="config file or 'default'")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="master seed (overrides config)")
        p.add_argument("--window", type=float, default=None, help="half-width of comparison window, um")

    p = sub.add_parser("acquire", help="run the Monte Carlo acquisition")
    common(p)
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--realizations", type=int, default=None)
    p.add_argument("--workers", type=int, default=None, help="thread count (default: $THERMAL_FT_WORKERS or 1)")
    p.set_defaults(func=cmd_acquire)

    p = sub.add_parser("oracle", help="write coherent-mode and analytic references")
    common(p, seed=False)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("compare", help="compare a run against a reference")
    p.add_argument("run", help="directory written by 'acquire'")
    p.add_argument("--against", choices=("analytic", "oracle"), default="oracle")
    p.add_argument("--window", type=float, default=None)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("invert", help="reconstruct the object from a run")
    p.add_argument("run")
    p.add_argument("--use", choices=("measured", "oracle", "analytic"), default="measured")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_invert)

    p = sub.add_parser("sweep-n", help="Monte Carlo convergence study")
    p.add_argument("ns", help="comma separated realization counts, e.g. 500,2000,8000,32000")
    common(p)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out", default=None, help="optional CSV of the table")
    p.set_defaults(func=cmd_sweep)
    return parser


def run_cli(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except ThermalFTError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def main():
    sys.exit(run_cli())


if __name__ == "__main__":
    main()
