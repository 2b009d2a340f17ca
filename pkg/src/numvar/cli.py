"""Command-line front end.

Subcommands: variance (experiment sweep), paircorr (both pair
correlation routes), energy (scaling sweep), verify (analytic check
suites), coeffs (Fourier coefficients of the dilation-averaged pair
correlation).  Exit codes: 0 success, 1 verification failure, 2 bad
configuration, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Dict, List, Optional

from .errors import BudgetError, ConfigError, NumvarError
from .harness import (
    ExperimentConfig,
    config_from_mapping,
    energy_table_to_csv,
    load_config_file,
    rows_to_csv,
    run_energy_sweep,
    run_variance_experiment,
    run_verification_suite,
    summary_to_json,
)
from .harness import _task_alpha
from .sequences import dilate_mod1, generate_sequence
from .stats import (
    TestFunction,
    WindowParams,
    pair_correlation_direct,
    pair_correlation_fourier,
)
from .theory import fourier_coefficient
import csv as _csv
import io


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seq", help="sequence spec: monomial:d=2 | lacunary:base=2 | custom:FILE")
    p.add_argument("--beta", type=float, help="window exponent, L = N^beta")
    p.add_argument("--schedule", help="N schedule: m=A..B (N = m^2) or n=N1,N2,...")
    p.add_argument("--alphas", type=int, help="dilation samples per N")
    p.add_argument("--seed", type=int, help="experiment seed")
    p.add_argument("--delta", type=float, help="deviation threshold (fraction of L)")
    p.add_argument("--tol", type=float, help="spectral truncation tolerance")
    p.add_argument("--mc", type=int, help="Monte Carlo window samples (0 = exact route)")
    p.add_argument("--workers", type=int, help="worker threads")
    p.add_argument("--config", help="key = value config file; flags override")
    p.add_argument("--out", help="output path (default stdout)")
    p.add_argument("--format", choices=("csv", "json"), help="output format")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="numvar",
        description="Fine-scale statistics of dilated integer sequences mod 1.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, desc in (
        ("variance", "number variance sweep over a schedule of N"),
        ("paircorr", "pair correlation by direct and spectral routes"),
        ("energy", "additive energy scaling along a schedule"),
        ("verify", "analytic verification suites"),
        ("coeffs", "Fourier coefficients of the averaged pair correlation"),
    ):
        p = sub.add_parser(name, help=desc)
        _add_common(p)
        if name == "verify":
            p.add_argument("--suites", default="all",
                           help="comma list: lemma1,lemma2,identity,mean,parseval")
            p.add_argument("--trials", type=int, default=10000,
                           help="trials for the lemma sweeps")
        if name == "coeffs":
            p.add_argument("--kmax", type=int, default=32,
                           help="emit coefficients for k = 1..kmax")
    return parser


def _merge_config(args: argparse.Namespace, defaults: Dict[str, str]) -> ExperimentConfig:
    mapping = dict(defaults)
    for flag, key in (
        ("seq", "seq"), ("beta", "beta"), ("schedule", "schedule"),
        ("alphas", "alphas"), ("seed", "seed"), ("delta", "delta"),
        ("tol", "tol"), ("mc", "mc"), ("workers", "workers"),
    ):
        value = getattr(args, flag, None)
        if value is not None:
            mapping[key] = str(value)
    return config_from_mapping(mapping)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        # newline='' keeps CSV's \r\n intact on every platform
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_variance(args: argparse.Namespace, defaults: Dict[str, str]) -> int:
    cfg = _merge_config(args, defaults)
    rows, summary = run_variance_experiment(cfg)
    if (args.format or "csv") == "json":
        _emit(summary_to_json(summary), args.out)
    else:
        _emit(rows_to_csv(rows), args.out)
    return 0


def _cmd_paircorr(args: argparse.Namespace, defaults: Dict[str, str]) -> int:
    cfg = _merge_config(args, defaults)
    f_tent = TestFunction.tent()
    records: List[Dict] = []
    for n_value in cfg.schedule:
        seq = generate_sequence(cfg.seq, n_value)
        params = WindowParams.from_beta(n_value, cfg.beta)
        for idx in range(cfg.alpha_samples):
            alpha = _task_alpha(cfg.seed, n_value, idx)
            points = dilate_mod1(alpha, seq)
            direct = pair_correlation_direct(points, params, f_tent)
            spectral = pair_correlation_fourier(seq, alpha, params, cfg.tol)
            records.append(
                {
                    "seq_id": seq.spec.label(),
                    "N": n_value,
                    "beta": cfg.beta,
                    "L": params.L,
                    "alpha_hex": alpha.to_hex(),
                    "r2_direct": direct.r2,
                    "r2_fourier": spectral.r2,
                    "truncation_bound": spectral.truncation_bound,
                }
            )
    if (args.format or "csv") == "json":
        _emit(json.dumps(records, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\r\n")
        header = list(records[0].keys())
        writer.writerow(header)
        for rec in records:
            writer.writerow([_field(rec[h]) for h in header])
        _emit(buf.getvalue(), args.out)
    return 0


def _field(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def _cmd_energy(args: argparse.Namespace, defaults: Dict[str, str]) -> int:
    cfg = _merge_config(args, defaults)
    table = run_energy_sweep(cfg)
    if (args.format or "csv") == "json":
        _emit(json.dumps(table, indent=2) + "\n", args.out)
    else:
        _emit(energy_table_to_csv(table), args.out)
    return 0


def _cmd_verify(args: argparse.Namespace, defaults: Dict[str, str]) -> int:
    selection = tuple(s.strip() for s in args.suites.split(",") if s.strip())
    tol = args.tol if args.tol is not None else float(defaults.get("tol", 1e-6))
    seed = args.seed if args.seed is not None else int(defaults.get("seed", 0))
    report = run_verification_suite(
        selection=selection or ("all",), tol=tol, seed=seed, trials=args.trials
    )
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return 0 if report["passed"] else 1


def _cmd_coeffs(args: argparse.Namespace, defaults: Dict[str, str]) -> int:
    cfg = _merge_config(args, defaults)
    if args.kmax < 1:
        raise ConfigError("--kmax must be >= 1")
    n_value = cfg.schedule[0]
    seq = generate_sequence(cfg.seq, n_value)
    params = WindowParams.from_beta(n_value, cfg.beta)
    coeffs = [fourier_coefficient(seq, k, params) for k in range(1, args.kmax + 1)]
    if (args.format or "csv") == "json":
        payload = [
            {"k": c.k, "value": c.value, "N": c.N, "L": c.L} for c in coeffs
        ]
        _emit(json.dumps(payload, indent=2) + "\n", args.out)
    else:
        buf = io.StringIO()
        writer = _csv.writer(buf, lineterminator="\r\n")
        writer.writerow(("k", "value", "N", "L"))
        for c in coeffs:
            writer.writerow((str(c.k), repr(c.value), str(c.N), repr(c.L)))
        _emit(buf.getvalue(), args.out)
    return 0


_COMMANDS = {
    "variance": _cmd_variance,
    "paircorr": _cmd_paircorr,
    "energy": _cmd_energy,
    "verify": _cmd_verify,
    "coeffs": _cmd_coeffs,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        defaults = load_config_file(args.config) if args.config else {}
        if args.command == "verify":
            return _cmd_verify(args, defaults)
        return _COMMANDS[args.command](args, defaults)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except BudgetError as exc:
        print("budget exceeded: %s" % exc, file=sys.stderr)
        return 3
    except NumvarError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except (OverflowError, ValueError) as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except OSError as exc:
        print("io error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
