"""
witt-lattice: command-line entry point.

Exit codes: 0 success, 2 malformed input, 3 precision exhausted after the
automatic retry, 4 resource cap exceeded.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from pydantic import ValidationError

from app.config import get_settings
from app.constants import EXIT_CAP, EXIT_OK, EXIT_PRECISION, EXIT_VALIDATION
from app.exceptions import CapExceeded, InputValidationError, NotUnit, PrecisionExhausted
from app.schemas import (
    CensusRequest,
    ContextSpec,
    GenvalRequest,
    GroupRequest,
    PointSpec,
    PolynomialFile,
    RigidRequest,
    RunReport,
    WittRequest,
)
from app.services.commands import RunOptions, cmd_census, cmd_genval, cmd_group, cmd_rigid, cmd_witt, point_from_text
from app.utils.loaders import load_lattice_inputs, load_model
from app.utils.report_tables import render_report
from app.utils.serializer import digest_payload

logger = logging.getLogger("witt_lattice")


def _json_arg(text: str | None):
    if text is None:
        return None
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise InputValidationError(f"Argument {text!r} is not valid JSON: {e}")


# ---------- Handlers ----------

def _run_witt(args: argparse.Namespace, options: RunOptions) -> RunReport:
    settings = options.settings
    request = WittRequest(
        op=args.op,
        p=args.p,
        m=args.m or settings.residue_degree,
        N=args.precision or settings.precision,
        x=_json_arg(args.x),
        y=_json_arg(args.y),
        l=args.l,
        index=args.index,
    )
    options.inputs = {"request": digest_payload(request)}
    return cmd_witt(request, options)


def _run_rigid(args: argparse.Namespace, options: RunOptions) -> RunReport:
    order, lattice, digests = load_lattice_inputs(args.lattice, args.order)
    options.inputs = digests
    return cmd_rigid(RigidRequest(order=order, lattice=lattice, precision=args.precision), options)


def _run_census(args: argparse.Namespace, options: RunOptions) -> RunReport:
    order, lattice, digests = load_lattice_inputs(args.lattice, args.order)
    options.inputs = digests
    request = CensusRequest(order=order, lattice=lattice, precision=args.precision, max_colength=args.max_colength)
    return cmd_census(request, options)


def _run_genval(args: argparse.Namespace, options: RunOptions) -> RunReport:
    settings = options.settings
    polynomial, digest = load_model(args.polynomial, PolynomialFile)
    inputs = {"polynomial": digest}
    if polynomial.context is not None:
        context = polynomial.context
    elif args.p is not None:
        context = ContextSpec(p=args.p, m=args.m or settings.residue_degree, N=args.precision or settings.precision)
    else:
        raise InputValidationError("The polynomial file has no context; pass --p")

    if args.point_file is not None:
        point, inputs["point"] = load_model(args.point_file, PointSpec)
    elif args.point is not None:
        point = point_from_text(args.point, args.digits)
        inputs["point"] = digest_payload(point)
    else:
        raise InputValidationError("Give the point with --point or --point-file")

    options.inputs = inputs
    request = GenvalRequest(
        context=context,
        polynomial=polynomial,
        point=point,
        precision=args.precision,
        witness=args.witness,
        threshold=args.threshold,
    )
    return cmd_genval(request, options)


def _run_group(args: argparse.Namespace, options: RunOptions) -> RunReport:
    settings = options.settings
    request = GroupRequest(
        group=args.group,
        subgroup=args.subgroup,
        p=args.p,
        m=args.m or settings.residue_degree,
        precision=args.precision,
        op=args.op,
        max_colength=args.max_colength,
    )
    options.inputs = {"request": digest_payload(request)}
    return cmd_group(request, options)


# ---------- Parsing ----------

def _parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None, help="Seed for random trials (default LATTICE_SEED)")
    common.add_argument("--precision", type=int, default=None, help="Working precision N")
    common.add_argument("--m", type=int, default=None, help="Residue field degree")
    common.add_argument("--out", dest="out_path", type=Path, help="Write the JSON report to this file")
    common.add_argument("--json", dest="as_json", action="store_true", help="Print the JSON report instead of tables")
    common.add_argument("--no-timings", dest="no_timings", action="store_true", help="Omit wall-clock timings")
    common.add_argument("--log-level", dest="log_level", default=None, help="Logging level (default LATTICE_LOG_LEVEL)")

    parser = argparse.ArgumentParser(
        prog="witt-lattice",
        description="Exact computations with lattices over p-adic orders.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    witt = commands.add_parser("witt", parents=[common], help="Witt digit arithmetic and conversions")
    witt.add_argument("op", choices=["add", "mul", "teichmuller", "to-digits", "from-digits", "ghost"])
    witt.add_argument("--p", type=int, required=True)
    witt.add_argument("--x", default=None, help="First operand as JSON")
    witt.add_argument("--y", default=None, help="Second operand as JSON")
    witt.add_argument("--l", type=int, default=None, help="Number of Witt digits for to-digits")
    witt.add_argument("--index", type=int, default=1, help="Ghost polynomial index")
    witt.set_defaults(handler=_run_witt)

    rigid = commands.add_parser("rigid", parents=[common], help="Rigidity and Ext¹ invariants of a lattice")
    rigid.add_argument("lattice", type=Path)
    rigid.add_argument("--order", type=Path, default=None)
    rigid.set_defaults(handler=_run_rigid)

    census = commands.add_parser("census", parents=[common], help="Sublattice census up to a colength bound")
    census.add_argument("lattice", type=Path)
    census.add_argument("--order", type=Path, default=None)
    census.add_argument("--max-colength", dest="max_colength", type=int, required=True)
    census.set_defaults(handler=_run_census)

    genval = commands.add_parser("genval", parents=[common], help="Generic valuation at a Witt point")
    genval.add_argument("polynomial", type=Path)
    genval.add_argument("--point", default=None, help="JSON array of coordinates")
    genval.add_argument("--point-file", dest="point_file", type=Path, default=None)
    genval.add_argument("--digits", type=int, default=1, help="Witt digits per coordinate (l)")
    genval.add_argument("--p", type=int, default=None, help="Prime, when the polynomial file has no context")
    genval.add_argument("--witness", action="store_true")
    genval.add_argument("--threshold", type=int, default=None)
    genval.set_defaults(handler=_run_genval)

    group = commands.add_parser("group", parents=[common], help="Permutation lattices of a finite group")
    group.add_argument("--group", required=True, help='Generators in cycle notation, e.g. "(1 2),(1 2 3)", or a catalog name')
    group.add_argument("--subgroup", default=None, help="Subgroup generators in cycle notation")
    group.add_argument("--p", type=int, required=True)
    group.add_argument("--op", choices=["rigid", "endrank", "hh1", "census", "double-cosets"], default="rigid")
    group.add_argument("--max-colength", dest="max_colength", type=int, default=2)
    group.set_defaults(handler=_run_group)

    return parser.parse_args(argv)


def _write_text(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")


def main(argv: list[str] | None = None) -> int:
    args = _parse_args(argv)
    settings = get_settings()
    logging.basicConfig(
        level=(args.log_level or settings.effective_log_level).upper(),
        format="%(levelname)s %(name)s: %(message)s",
    )
    options = RunOptions.create(
        settings=settings,
        seed=args.seed,
        record_timings=False if args.no_timings else None,
    )

    try:
        report = args.handler(args, options)
    except (InputValidationError, NotUnit, ValidationError, ValueError, FileNotFoundError) as e:
        logger.error(f"Invalid input: {e}")
        return EXIT_VALIDATION
    except PrecisionExhausted as e:
        logger.error(f"Precision exhausted: {e}")
        return EXIT_PRECISION
    except CapExceeded as e:
        logger.error(f"Resource cap exceeded: {e}")
        return EXIT_CAP

    payload = report.to_json()
    if args.out_path is not None:
        _write_text(args.out_path, payload + "\n")
    if args.as_json:
        sys.stdout.write(payload + "\n")
    else:
        sys.stdout.write(render_report(report))
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
