"""Command-line entry point.

    oamnoma figure fig4 --out fig4.csv [--config scenario.txt] [--set key=value ...]
    oamnoma point [--set snr_db=30]
    oamnoma oracle --out oracle.csv

Exit codes: 0 success, 1 validation error, 2 runtime or degenerate-geometry
error, 3 oracle failure.
"""

from __future__ import annotations

import argparse
import sys
from typing import Optional, Sequence

import numpy as np

from .capacity import Scheme
from .config import ConfigError, SystemConfig, load_config
from .experiments import FIGURES, figure_preset, run_oracle_report, run_sweep
from .noma import DegenerateModeError
from .scenario import evaluate_scheme, resolve

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_RUNTIME = 2
EXIT_ORACLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def _add_config_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="key = value scenario file")
    p.add_argument(
        "--set",
        dest="overrides",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="override one config key (repeatable)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="oamnoma", description="NOMA over OAM mode multiplexing: capacity simulator")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    fig = sub.add_parser("figure", help="run a figure sweep and write its CSV")
    fig.add_argument("name", choices=sorted(FIGURES))
    fig.add_argument("--out", required=True)
    fig.add_argument("--workers", type=int, default=1)
    fig.add_argument("--grid", help="comma-separated grid overriding the preset")
    _add_config_args(fig)

    point = sub.add_parser("point", help="evaluate every scheme at one operating point")
    _add_config_args(point)

    oracle = sub.add_parser("oracle", help="run the diagonalization oracle and write its CSV")
    oracle.add_argument("--out", required=True)
    _add_config_args(oracle)
    return parser


def _write_config_echo(path: str, config: SystemConfig) -> None:
    with open(path + ".config", "w", encoding="ascii", newline="") as fh:
        fh.write(f"# effective configuration, fingerprint {config.fingerprint()}\n")
        fh.write(config.to_text())


def cmd_figure(args, config: SystemConfig) -> int:
    grid = None
    if args.grid:
        try:
            grid = [float(v) for v in args.grid.split(",")]
        except ValueError as exc:
            raise ConfigError([f"--grid: {exc}"]) from None
    try:
        spec = figure_preset(args.name, config, grid)
    except ValueError as exc:
        raise ConfigError([str(exc)]) from None
    result = run_sweep(spec, workers=args.workers)
    result.write_csv(args.out)
    _write_config_echo(args.out, spec.fixed_params)
    if result.errors:
        print(f"{len(result.errors)} rows failed; see error codes in {args.out}", file=sys.stderr)
        return EXIT_RUNTIME
    print(f"wrote {len(result.rows)} rows to {args.out}")
    return EXIT_OK


def _point_schemes(config: SystemConfig):
    n = config.mode_count
    return ((Scheme.NOMA_OAM_MDMA, n), (Scheme.OMA_OAM_MDMA, n), (Scheme.CONVENTIONAL_NOMA, 1))


def format_point(config: SystemConfig) -> str:
    lines = [f"# config fingerprint {config.switch_fingerprint()}"]
    for key, value in config.items():
        lines.append(f"#   {key} = {value}")
    for scheme, n in _point_schemes(config):
        cfg = config.with_mode_count(n)
        sc = resolve(cfg)
        report = evaluate_scheme(cfg, scheme, n)
        alloc = sc.allocation
        lines.append("")
        lines.append(f"scheme {scheme.value}  N={n}  noise_variance={alloc.noise_variance:.6g}")
        header = (
            f"{'mode':>4} {'P_l':>12} {'rho_l':>12} {'|xi_ccu|':>12} {'|xi_ceu|':>12} "
            f"{'sinr_x1@ue1':>12} {'sinr_x2@ue1':>12} {'sinr_x2@ue2':>12} "
            f"{'C_ccu_l':>12} {'C_ceu_l':>12}"
        )
        lines.append(header)
        xi1 = np.abs(sc.ccu_link.mode_eigenvalues)
        xi2 = np.abs(sc.ceu_link.mode_eigenvalues)
        sinr = report.sinr
        for l in range(n):
            if sinr is not None:
                s = (sinr.x1_at_ue1[l], sinr.x2_at_ue1[l], sinr.x2_at_ue2[l])
                s_txt = " ".join(f"{v:>12.5e}" for v in s)
            else:
                s_txt = " ".join(f"{'-':>12}" for _ in range(3))
            lines.append(
                f"{l:>4} {alloc.per_mode_power[l]:>12.5e} {alloc.per_mode_snr[l]:>12.5e} "
                f"{xi1[l]:>12.5e} {xi2[l]:>12.5e} {s_txt} "
                f"{report.ccu_per_mode[l]:>12.5e} {report.ceu_per_mode[l]:>12.5e}"
            )
        lines.append(
            f"total ccu_capacity={report.ccu_capacity:.12g} ceu_capacity={report.ceu_capacity:.12g} "
            f"sum_capacity={report.sum_capacity:.12g} bits/s/Hz"
        )
    return "\n".join(lines) + "\n"


def cmd_point(args, config: SystemConfig) -> int:
    sys.stdout.write(format_point(config))
    return EXIT_OK


def cmd_oracle(args, config: SystemConfig) -> int:
    report = run_oracle_report(config)
    report.write_csv(args.out)
    _write_config_echo(args.out, config)
    status = "PASS" if report.passed else "FAIL"
    print(f"oracle {status}: {len(report.rows)} rows written to {args.out}")
    return EXIT_OK if report.passed else EXIT_ORACLE


COMMANDS = {"figure": cmd_figure, "point": cmd_point, "oracle": cmd_oracle}


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = load_config(args.config, args.overrides)
        return COMMANDS[args.command](args, config)
    except ConfigError as exc:
        print(exc, file=sys.stderr)
        return EXIT_VALIDATION
    except DegenerateModeError as exc:
        print(f"degenerate geometry: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
