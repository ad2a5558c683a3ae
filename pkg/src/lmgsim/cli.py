"""Command-line entry point.

Subcommands: simulate, spectrum, wigner, pairswap, presets. Failures exit
nonzero with a machine-readable JSON error record on stderr.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .config import ConfigError, ExperimentConfig, PairSwapConfig, \
    load_experiment_config
from .dynamics import IntegrationDivergedError
from .presets import PRESETS, build_preset
from .runner import (
    default_out_dir,
    run,
    run_pair_swap_preset,
    run_spectrum_scan,
)


def _common_flags(p: argparse.ArgumentParser):
    p.add_argument("--out-dir", default=None,
                   help="output directory (default: $LMGSIM_OUT_DIR or ./out)")
    p.add_argument("--threads", type=int, default=None,
                   help="worker threads for grid evaluation")
    p.add_argument("--dt-override", type=float, default=None,
                   help="integrator step in ns (overrides model default)")


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="lmgsim",
        description="Driven collective-spin (LMG) quench simulator")
    sub = ap.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate",
                         help="run a quench simulation preset or config")
    src = sim.add_mutually_exclusive_group(required=True)
    src.add_argument("--preset", help="preset name (see `lmgsim presets`)")
    src.add_argument("--config", help="path to a JSON experiment config")
    _common_flags(sim)

    spec = sub.add_parser("spectrum",
                          help="parity-labelled spectrum vs Omega/lambda")
    spec.add_argument("--n-qubits", type=int, default=6)
    spec.add_argument("--lambda-mhz", type=float, default=3.8,
                      help="coupling as f in 2pi x f MHz")
    spec.add_argument("--ratio-max", type=float, default=12.0,
                      help="largest Omega/lambda in the scan")
    spec.add_argument("--ratio-points", type=int, default=61)
    _common_flags(spec)

    wig = sub.add_parser("wigner",
                         help="run a preset/config with only the Wigner "
                              "observable")
    wsrc = wig.add_mutually_exclusive_group(required=True)
    wsrc.add_argument("--preset")
    wsrc.add_argument("--config")
    _common_flags(wig)

    ps = sub.add_parser("pairswap", help="two-qubit exchange-rate scan")
    ps.add_argument("--config", help="path to a JSON pair-swap config")
    ps.add_argument("--pair", default=None,
                    help="comma-separated qubit indices, e.g. 1,4")
    ps.add_argument("--operating-points", default=None,
                    help="comma-separated frequencies in GHz (over 2pi)")
    ps.add_argument("--model", choices=["pairwise", "circuit_qed", "both"],
                    default="both")
    _common_flags(ps)

    sub.add_parser("presets", help="list available presets")
    return ap


def _load_simulate_config(args) -> tuple[ExperimentConfig, str | None]:
    if args.preset:
        preset = PRESETS.get(args.preset)
        if preset is None or preset.kind != "experiment":
            raise ConfigError("preset",
                              f"unknown simulation preset {args.preset!r}")
        return build_preset(args.preset), args.preset
    return load_experiment_config(args.config), None


def _cmd_simulate(args) -> int:
    config, label = _load_simulate_config(args)
    manifest = run(config, out_dir=args.out_dir, threads=args.threads,
                   dt_override=args.dt_override, label=label)
    print(json.dumps({"out_dir": str(Path(args.out_dir)
                                     if args.out_dir else default_out_dir()),
                      "outputs": [o["path"] for o in manifest.outputs],
                      "norm_drift": manifest.norm_drift,
                      "wall_clock_s": round(manifest.wall_clock_s, 3)}))
    return 0


def _cmd_wigner(args) -> int:
    config, label = _load_simulate_config(args)
    wanted = config.wigner_grid.times_ns
    config = dataclasses.replace(
        config, observables=("wigner",),
        integrator=dataclasses.replace(
            config.integrator,
            checkpoint_times_ns=wanted or tuple(config.checkpoints())))
    manifest = run(config, out_dir=args.out_dir, threads=args.threads,
                   dt_override=args.dt_override, label=label)
    print(json.dumps({"outputs": [o["path"] for o in manifest.outputs]}))
    return 0


def _cmd_spectrum(args) -> int:
    ratios = [args.ratio_max * k / (args.ratio_points - 1)
              for k in range(args.ratio_points)]
    manifest = run_spectrum_scan(args.n_qubits, args.lambda_mhz, ratios,
                                 out_dir=args.out_dir, threads=args.threads)
    print(json.dumps({"outputs": [o["path"] for o in manifest.outputs]}))
    return 0


def _cmd_pairswap(args) -> int:
    if args.config:
        with open(args.config) as f:
            cfg = PairSwapConfig.from_dict(json.load(f))
    else:
        d: dict = {}
        if args.pair:
            d["pair"] = [int(x) for x in args.pair.split(",")]
        if args.operating_points:
            d["operating_points_ghz_over_2pi"] = [
                float(x) for x in args.operating_points.split(",")]
        if args.model != "both":
            d["models"] = [args.model]
        if args.dt_override:
            d["dt_ns"] = args.dt_override
        cfg = PairSwapConfig.from_dict(d)
    manifest = run_pair_swap_preset(cfg, out_dir=args.out_dir)
    print(json.dumps({"outputs": [o["path"] for o in manifest.outputs]}))
    return 0


def _cmd_presets(_args) -> int:
    for name, preset in PRESETS.items():
        print(f"{name:10s} {preset.kind:10s} {preset.description}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "simulate": _cmd_simulate,
        "spectrum": _cmd_spectrum,
        "wigner": _cmd_wigner,
        "pairswap": _cmd_pairswap,
        "presets": _cmd_presets,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as e:
        json.dump({"error": {"type": "config", "field": e.field,
                             "message": str(e)}}, sys.stderr)
        sys.stderr.write("\n")
        return 2
    except IntegrationDivergedError as e:
        json.dump({"error": {"type": "integration_diverged",
                             "message": str(e)}}, sys.stderr)
        sys.stderr.write("\n")
        return 1
    except (OSError, ValueError, KeyError) as e:
        json.dump({"error": {"type": type(e).__name__, "message": str(e)}},
                  sys.stderr)
        sys.stderr.write("\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
