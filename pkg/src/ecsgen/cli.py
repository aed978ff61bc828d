"""Command-line entry point: ``ecsgen sweep | figures | compare``.

Exit codes: 0 success, 1 invalid input, 2 oracle tolerance or truncation
failure, 3 file I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .errors import ECSError, TruncationError
from .fock import TruncationSpec
from .model import ModelParams
from .sweep import (OUTPUT_COLUMNS, ReportIOError, SweepConfig, compare_report, emit_csv, figure_data,
                    run_sweep)

EXIT_OK, EXIT_INVALID, EXIT_ORACLE, EXIT_IO = 0, 1, 2, 3

_PARAM_FLAGS = ("g1", "g2", "omega1", "omega2", "kappa", "sign")


class _Parser(argparse.ArgumentParser):
    """Argument errors are validation errors: exit 1, not argparse's 2 (reserved for oracle failures)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", type=Path, help="JSON config; explicit flags override its values")
    p.add_argument("--omega1", type=float)
    p.add_argument("--omega2", type=float)
    p.add_argument("--g1", type=float)
    p.add_argument("--g2", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--sign", choices=("plus", "minus"))
    p.add_argument("--t-min", dest="t_min", type=float)
    p.add_argument("--t-max", dest="t_max", type=float)
    p.add_argument("--steps", type=int)
    p.add_argument("--dim1", type=int, help="Fock cutoff of mode 1 (oracle runs)")
    p.add_argument("--dim2", type=int, help="Fock cutoff of mode 2 (oracle runs)")
    p.add_argument("--dt", type=float, help="integrator step (oracle runs)")
    p.add_argument("--hamiltonian", choices=("eff", "full"),
                   help="coherent part of the oracle dynamics (default: eff)")
    p.add_argument("--out", type=Path, required=True)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="ecsgen",
        description="Entangled coherent states from a driven V atom in a two-mode cavity. "
                    "Rates are in units of g1 (g1 = 1 by convention); times in units of 1/g1.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    sw = sub.add_parser("sweep", help="evaluate closed forms (or the oracle) on a time grid and write CSV")
    _common(sw)
    sw.add_argument("--mode", choices=("lossless", "lossy", "oracle_compare"))
    sw.add_argument("--outputs", help="comma-separated subset of " + ",".join(OUTPUT_COLUMNS))
    sw.add_argument("--envelope", choices=("plus", "minus"),
                    help="snap samples to cos(2ut) = +1 (plus) or -1 (minus)")

    fg = sub.add_parser("figures", help="write the preset figure sweeps")
    fg.add_argument("which", choices=("fig2", "fig3"))
    fg.add_argument("--out", type=Path, default=Path("."), help="output directory")

    cp = sub.add_parser("compare", help="oracle vs closed-form comparison report (JSON)")
    _common(cp)
    return parser


def config_from_args(args: argparse.Namespace, mode: str | None = None) -> SweepConfig:
    data: dict = {}
    if args.config is not None:
        try:
            data = json.loads(Path(args.config).read_text(encoding="utf-8"))
        except OSError as exc:
            raise ReportIOError(f"cannot read config {args.config}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ValueError(f"config {args.config} is not valid JSON: {exc}") from exc
    params = dict(data.get("params", {}))
    for name in _PARAM_FLAGS:
        value = getattr(args, name, None)
        if value is not None:
            params[name] = value
    data["params"] = ModelParams(**params)
    for name in ("t_min", "t_max", "steps", "dt", "hamiltonian", "mode", "envelope"):
        value = getattr(args, name, None)
        if value is not None:
            data[name] = value
    if getattr(args, "outputs", None):
        data["outputs"] = [o.strip() for o in args.outputs.split(",") if o.strip()]
    trunc = data.get("truncation") or {}
    if args.dim1 is not None:
        trunc["d1"] = args.dim1
    if args.dim2 is not None:
        trunc["d2"] = args.dim2
    if trunc:
        data["truncation"] = TruncationSpec(**trunc) if isinstance(trunc, dict) else trunc
    if mode is not None:
        data["mode"] = mode
    if "t_max" not in data:
        raise ValueError("--t-max is required (flag or config)")
    return SweepConfig.from_dict(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "sweep":
            cfg = config_from_args(args)
            emit_csv(run_sweep(cfg), args.out, cfg)
            print(args.out)
        elif args.command == "figures":
            for path in figure_data(args.which, args.out):
                print(path)
        else:
            cfg = config_from_args(args, mode="oracle_compare")
            report = compare_report(cfg, args.out)
            status = "PASS" if report["passed"] else "FAIL"
            print(f"{status} {args.out}")
            for name, ok in report["checks"].items():
                print(f"  {name}: {'ok' if ok else 'FAILED'}")
            if not report["passed"]:
                return EXIT_ORACLE
    except ReportIOError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TruncationError as exc:
        print(f"truncation error: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    except (ECSError, ValueError, TypeError) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
