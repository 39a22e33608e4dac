"""Experiment runner CLI.

Subcommands reproduce the study's figures as CSV, run generic parameter
sweeps, and execute the validation suite. Exit codes: 0 success, 1
validation failure, 2 usage or config-parse error.
"""

from __future__ import annotations

import argparse
import sys

from . import experiments, validate
from .params import ConfigError, config_template, default_params, load_config

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_USAGE = 2

DEFAULT_SEED = 20240
DEFAULT_MC_BLOCKS = 10**6


def _add_common(parser: argparse.ArgumentParser, scheme: bool = True) -> None:
    parser.add_argument("--config", metavar="PATH", help="parameter file (defaults built in)")
    parser.add_argument("--out", metavar="PATH", help="output CSV path (default: stdout)")
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED, help="master RNG seed")
    parser.add_argument(
        "--mc-blocks", type=int, default=DEFAULT_MC_BLOCKS, metavar="N",
        help="Monte Carlo fading blocks per estimate",
    )
    if scheme:
        parser.add_argument(
            "--scheme", choices=["ts", "ps", "both"], default="both",
            help="energy-harvesting scheme(s) to run",
        )
        parser.add_argument(
            "--fraction", default=None, metavar="X|auto",
            help="harvesting fraction; 'auto' optimizes it per parameter point "
                 "(default: value from the config file)",
        )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="covertrelay",
        description="Covert-rate and detection analysis for a self-sustained relay.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("config-template", help="print a parameter-file template").add_argument(
        "--out", metavar="PATH", help="write template here instead of stdout"
    )

    p2 = sub.add_parser("fig2", help="detection error vs threshold (closed form + MC)")
    _add_common(p2)
    p2.add_argument("--eta1", type=float, default=experiments.FIG2_ETA1,
                    help="upgraded conversion efficiency under the covert hypothesis")
    p2.add_argument("--n-tau", type=int, default=201, help="threshold grid size")

    p3 = sub.add_parser("fig3", help="max effective covert rate vs source power")
    _add_common(p3)

    p4 = sub.add_parser("fig4", help="max effective covert rate vs baseline efficiency")
    _add_common(p4)

    p5 = sub.add_parser("fig5", help="realized efficiency ratio vs baseline efficiency")
    _add_common(p5, scheme=False)

    p6 = sub.add_parser("fig6", help="max effective covert rate vs relay position")
    _add_common(p6)

    psw = sub.add_parser("sweep", help="generic single-parameter sweep")
    _add_common(psw)
    psw.add_argument("--param", required=True, help="parameter to sweep (config units)")
    group = psw.add_mutually_exclusive_group(required=True)
    group.add_argument("--values", help="comma-separated grid values")
    group.add_argument("--linspace", nargs=3, metavar=("START", "STOP", "NUM"),
                       help="linear grid specification")

    pv = sub.add_parser("validate", help="run the closed-form cross-validation suite")
    _add_common(pv, scheme=False)
    pv.add_argument("--fraction", default=None, metavar="X|auto",
                    help="harvesting fraction used by scheme-specific checks (default 0.5)")
    pv.add_argument("--self-test", action="store_true",
                    help="inject a deliberate closed-form perturbation; the suite must fail")

    return parser


def _load(args) -> tuple:
    if args.config:
        params, scheme, fraction = load_config(args.config)
    else:
        params, scheme, fraction = default_params(), "ts", "auto"
    if getattr(args, "fraction", None) is not None:
        fraction = args.fraction if args.fraction == "auto" else float(args.fraction)
    return params, scheme, fraction


def _emit(rows, out_path) -> None:
    data = experiments.csv_bytes(rows)
    if out_path:
        with open(out_path, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode("utf-8"))


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        if args.command == "config-template":
            text = config_template()
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
            return EXIT_OK

        params, _config_scheme, fraction = _load(args)

        if args.command == "fig2":
            rows = experiments.run_fig2(
                params, fraction=fraction, eta1=args.eta1,
                n_tau=args.n_tau, mc_blocks=args.mc_blocks, seed=args.seed,
                scheme_selector=args.scheme,
            )
        elif args.command == "fig3":
            rows = experiments.run_fig3(params, fraction=fraction, scheme_selector=args.scheme)
        elif args.command == "fig4":
            rows = experiments.run_fig4(params, fraction=fraction, scheme_selector=args.scheme)
        elif args.command == "fig5":
            rows = experiments.run_fig5(params)
        elif args.command == "fig6":
            rows = experiments.run_fig6(params, fraction=fraction, scheme_selector=args.scheme)
        elif args.command == "sweep":
            if args.values:
                values = [float(v) for v in args.values.split(",")]
            else:
                start, stop, num = args.linspace
                import numpy as np

                values = list(np.linspace(float(start), float(stop), int(num)))
            rows = experiments.run_sweep(
                params, args.param, values, fraction=fraction, scheme_selector=args.scheme,
            )
        elif args.command == "validate":
            f = 0.5 if fraction == "auto" else float(fraction)
            perturb = 0.05 if args.self_test else 0.0
            results = validate.run_validation(
                params, seed=args.seed, mc_blocks=args.mc_blocks,
                fraction_ts=f, fraction_ps=f, perturb=perturb,
            )
            report = validate.format_report(results)
            if args.out:
                with open(args.out, "w", encoding="utf-8") as fh:
                    fh.write(report + "\n")
            else:
                print(report)
            return EXIT_OK if all(r.passed for r in results) else EXIT_VALIDATION
        else:  # pragma: no cover - argparse enforces the choices
            return EXIT_USAGE

        _emit(rows, args.out)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
