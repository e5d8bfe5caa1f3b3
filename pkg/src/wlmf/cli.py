"""Command line front end for the experiment harness.

Usage: ``wlmf-run --experiment gain-bias [flags]`` or
``python -m wlmf --experiment ...``.

Parameters resolve in three layers: per-experiment defaults, then a flat
key-value config file (``--config``), then explicit flags. Config keys match
the long flag names (``rho-u = 0.04, 0.1``). The output directory default
can also come from the ``WLMF_OUT_DIR`` environment variable. Failures are
reported as a one-line JSON object on stderr with a nonzero exit code.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .experiments import EXPERIMENTS, ExperimentSpec, run_experiment

__all__ = ["build_parser", "load_config", "resolve_spec", "main"]

ENV_OUT_DIR = "WLMF_OUT_DIR"

_CONFIG_KEYS = (
    "experiment",
    "rho-u",
    "filter-len",
    "signal-len",
    "trials",
    "seed",
    "mode",
    "out-dir",
    "workers",
    "est-len",
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wlmf-run",
        description=(
            "Run a matched-filter experiment (SNR-gain bias grid, gain surface, "
            "matched-filter demo, CNN training trace, or sequence designer) and "
            "write CSV/JSON outputs plus a reproducibility manifest."
        ),
    )
    parser.add_argument("--experiment", choices=EXPERIMENTS, help="experiment to run")
    parser.add_argument(
        "--rho-u",
        dest="rho_u",
        help="comma-separated driving-noise impropriety grid, values in [0, 1)",
    )
    parser.add_argument(
        "--filter-len",
        dest="filter_len",
        help="comma-separated filter lengths",
    )
    parser.add_argument(
        "--signal-len",
        dest="signal_len",
        type=int,
        help="input sequence length (gain-bias: draws per trial; "
        "gain-surface: filler length after the matched sequence)",
    )
    parser.add_argument("--trials", type=int, help="Monte Carlo trials per grid cell")
    parser.add_argument("--seed", type=int, help="master seed (default 1234)")
    parser.add_argument(
        "--mode",
        choices=("analytic", "empirical"),
        help="covariance source for gain-surface (default: empirical)",
    )
    parser.add_argument(
        "--out-dir",
        dest="out_dir",
        help=f"output directory (default: ${ENV_OUT_DIR} or current directory)",
    )
    parser.add_argument("--config", help="flat key-value config file; flags override it")
    parser.add_argument(
        "--workers", type=int, help="trial-level parallel workers (default 1)"
    )
    parser.add_argument(
        "--est-len",
        dest="est_len",
        type=int,
        help="noise record length for empirical covariance estimates (default 5000)",
    )
    return parser


def load_config(path: str) -> dict:
    """Parse ``key = value`` lines; '#' starts a comment, blanks are skipped."""
    values: dict[str, str] = {}
    with open(path) as handle:
        for lineno, raw in enumerate(handle, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ValueError(f"{path}:{lineno}: expected 'key = value'")
            key, _, value = line.partition("=")
            key = key.strip()
            if key not in _CONFIG_KEYS:
                raise ValueError(f"{path}:{lineno}: unknown key {key!r}")
            values[key] = value.strip()
    return values


def _float_list(text: str) -> tuple[float, ...]:
    return tuple(float(part) for part in text.split(",") if part.strip())


def _int_list(text: str) -> tuple[int, ...]:
    return tuple(int(part) for part in text.split(",") if part.strip())


def resolve_spec(args: argparse.Namespace) -> ExperimentSpec:
    """Merge defaults, config file, and flags into a resolved spec."""
    config = load_config(args.config) if args.config else {}

    def pick(flag_value, key: str, convert):
        if flag_value is not None:
            return flag_value
        if key in config:
            return convert(config[key])
        return None

    experiment = pick(args.experiment, "experiment", str)
    if experiment is None:
        raise ValueError("an experiment must be named via --experiment or the config file")

    out_dir = pick(args.out_dir, "out-dir", str)
    if out_dir is None:
        out_dir = os.environ.get(ENV_OUT_DIR, ".")

    return ExperimentSpec.with_defaults(
        experiment,
        rho_u=pick(
            _float_list(args.rho_u) if args.rho_u is not None else None,
            "rho-u",
            _float_list,
        ),
        filter_len=pick(
            _int_list(args.filter_len) if args.filter_len is not None else None,
            "filter-len",
            _int_list,
        ),
        signal_len=pick(args.signal_len, "signal-len", int),
        trials=pick(args.trials, "trials", int),
        seed=pick(args.seed, "seed", int),
        mode=pick(args.mode, "mode", str),
        workers=pick(args.workers, "workers", int),
        est_len=pick(args.est_len, "est-len", int),
        out_dir=out_dir,
    )


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = resolve_spec(args)
        manifest = run_experiment(spec)
        for name in sorted(manifest.digests):
            print(os.path.join(spec.out_dir, name))
        print(os.path.join(spec.out_dir, f"{spec.experiment}-manifest.json"))
        return 0
    except Exception as exc:
        print(
            json.dumps({"error": type(exc).__name__, "message": str(exc)}),
            file=sys.stderr,
        )
        return 1
