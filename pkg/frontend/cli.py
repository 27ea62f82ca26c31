"""Command-line front end: `schurpower <subcommand> ...`.

stdout carries only JSON results; logs go to stderr. Exit codes: 0 success or
verdict true, 1 verdict false, 2 error, 3 cap or budget exceeded.
"""

import argparse
import asyncio
import json
import os
import sys
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence

import numpy as np
from loguru import logger
from pydantic import BaseModel, ValidationError

from backend.core.env import DEFAULT_GRID, DOMAIN_CAP, LOG_LEVEL, SEARCH_BUDGET, STABILIZATION_CAP, THREADS
from backend.core.errors import BudgetExceededError, DomainCapExceededError, SchurPowerError
from backend.core.groups.coloring import ColoredGroup, individualize
from backend.core.groups.group import group_by_name
from backend.core.groups.group_file import GroupFile, colored_group_to_file, group_from_file
from backend.core.partitions.partition import Partition, is_coarser_equal
from backend.core.srings.constructions import compute_Am
from backend.core.srings.sring import SRingFile, sring_from_file, sring_to_file
from backend.core.utils.utils_io import Invocation, read_json, read_model, write_json
from backend.core.wl.fingerprint import FingerprintResult, MatchingReport, joint_colorings, match_colors
from backend.core.wl.rainbow import coherent_config_to_file
from backend.core.wl.refinement import wl_m_group
from backend.core.autiso.automorphisms import cyc_m
from backend.core.autiso.isomorphisms import IsoWitnessFile, algebraic_iso_search, combinatorial_iso_search
from backend.core.autiso.reductions import IsoOracle, iso_colored_groups
from backend.core.verify.grid import GridJob, failures, limited, run_default_grid, run_jobs, summary_table
from backend.core.verify.reports import TheoremId

EXIT_OK, EXIT_FALSE, EXIT_ERROR, EXIT_LIMIT = 0, 1, 2, 3


class CompareMode(str, Enum):
    EQUAL = "equal"
    COARSER = "coarser"
    FINER = "finer"


class IsoMode(str, Enum):
    GROUP = "group"
    ALGEBRAIC = "algebraic"
    COMBINATORIAL = "combinatorial"


class FingerprintFile(BaseModel):
    fingerprint: FingerprintResult
    matching: Optional[MatchingReport] = None


class CompareFile(BaseModel):
    mode: CompareMode
    holds: bool
    classes_a: int
    classes_b: int


def load_group(source: str) -> ColoredGroup:
    """A group file path, or a group name such as Z4, S3 or Z2xZ2."""
    if os.path.exists(source):
        return group_from_file(read_model(source, GroupFile))
    return ColoredGroup.monochrome(group_by_name(source))


def load_partition(path: str) -> Partition:
    """Any file carrying a `class_of` list: partitions, S-rings and coherent configurations."""
    data = read_json(path)
    if isinstance(data, dict) and "invocation" in data:
        data = data["result"]
    if not isinstance(data, dict) or "class_of" not in data:
        raise SchurPowerError(f"{path} holds no class_of list")
    return Partition.from_labels(np.asarray(data["class_of"], dtype=np.int64))


def _coloring_of(CG: ColoredGroup) -> Optional[ColoredGroup]:
    return None if CG.num_colors == 1 else CG


def cmd_group(args) -> int:
    CG = group_from_file(read_model(args.table, GroupFile)) if args.table else load_group(args.name)
    for x in args.individualize or []:
        CG = individualize(CG, x)
    write_json(colored_group_to_file(CG), _invocation(args))
    return EXIT_OK


def cmd_am(args) -> int:
    CG = load_group(args.group)
    A = compute_Am(CG.group, args.m, coloring=_coloring_of(CG), cap=args.cap)
    write_json(sring_to_file(A, with_constants=args.constants), _invocation(args))
    return EXIT_OK


def cmd_cyc(args) -> int:
    CG = load_group(args.group)
    A = cyc_m(CG.group, args.m, coloring=_coloring_of(CG), cap=args.cap)
    write_json(sring_to_file(A, with_constants=args.constants), _invocation(args))
    return EXIT_OK


def cmd_wl(args) -> int:
    CG = load_group(args.group)
    cc = wl_m_group(CG.group, args.m, coloring=_coloring_of(CG), cap=args.cap)
    write_json(coherent_config_to_file(cc), _invocation(args))
    return EXIT_OK


def cmd_fingerprint(args) -> int:
    first, second = load_group(args.a), load_group(args.b)
    inputs = [(CG.group, _coloring_of(CG)) for CG in (first, second)]
    ctxs, colors, result = joint_colorings(inputs[0], inputs[1], args.m, cap=args.cap)
    matching = match_colors(ctxs, colors, result) if args.confirm else None
    write_json(FingerprintFile(fingerprint=result, matching=matching), _invocation(args))
    return EXIT_OK if result.equal else EXIT_FALSE


def cmd_compare(args) -> int:
    P, Q = load_partition(args.a), load_partition(args.b)
    mode = CompareMode(args.mode)
    if P.size != Q.size:
        holds = False
    elif mode == CompareMode.EQUAL:
        holds = P == Q
    elif mode == CompareMode.COARSER:
        holds = is_coarser_equal(P, Q)
    else:
        holds = is_coarser_equal(Q, P)
    write_json(CompareFile(mode=mode, holds=holds, classes_a=P.num_classes, classes_b=Q.num_classes), _invocation(args))
    return EXIT_OK if holds else EXIT_FALSE


def cmd_iso(args) -> int:
    mode = IsoMode(args.mode)
    if mode == IsoMode.GROUP:
        CG, CH = load_group(args.a), load_group(args.b)
        f = iso_colored_groups(CG, CH, IsoOracle(args.oracle), limit=max(CG.group.order, 1), budget=args.budget)
        witness = IsoWitnessFile(kind="group", found=f is not None, map=None if f is None else f.tolist(), budget=args.budget)
    else:
        A, B = (_sring_input(source, args) for source in (args.a, args.b))
        if mode == IsoMode.ALGEBRAIC:
            phi = algebraic_iso_search(A, B, budget=args.budget)
            witness = IsoWitnessFile(
                kind="algebraic",
                found=phi is not None,
                class_map=None if phi is None else phi.class_map.tolist(),
                budget=args.budget,
            )
        else:
            f = combinatorial_iso_search(A, B, budget=args.budget)
            witness = IsoWitnessFile(
                kind="combinatorial", found=f is not None, map=None if f is None else f.tolist(), budget=args.budget
            )
    write_json(witness, _invocation(args))
    return EXIT_OK if witness.found else EXIT_FALSE


def _sring_input(source: str, args):
    """An S-ring file, or a group (file or name) whose A_m is computed with --m."""
    if os.path.exists(source):
        data = read_json(source)
        if isinstance(data, dict) and "invocation" in data:
            data = data["result"]
        if isinstance(data, dict) and "carrier" in data:
            return sring_from_file(SRingFile.model_validate(data))
    CG = load_group(source)
    return compute_Am(CG.group, args.m, coloring=_coloring_of(CG), cap=args.cap)


def cmd_verify(args) -> int:
    if args.theorem in ("grid", TheoremId.WORD.value) and args.seed is None:
        raise SchurPowerError("sampling checks need an explicit --seed")
    if args.theorem == "grid":
        reports = run_default_grid(
            names=args.group or DEFAULT_GRID,
            threads=args.threads,
            cap=args.cap,
            budget=args.budget,
            stabilization_cap=args.stabilization_cap,
            samples=args.samples,
            seed=args.seed,
            timings=args.timings,
        )
    else:
        theorem = TheoremId(args.theorem)
        if not args.group:
            raise SchurPowerError(f"{theorem.value} needs at least one --group")
        parameters: Dict[str, int] = {"m": args.m}
        if theorem == TheoremId.STABILIZATION and args.k is None:
            raise SchurPowerError("stabilization needs --k")
        if args.k is not None:
            parameters["k"] = args.k
        if theorem == TheoremId.WORD:
            parameters.update(samples=args.samples, seed=args.seed)
        job = GridJob(theorem=theorem, groups=args.group or [], parameters=parameters)
        reports = asyncio.run(run_jobs([job], threads=1, cap=args.cap, budget=args.budget, timings=args.timings))
    exclude = None if args.timings else {"elapsed_seconds"}
    write_json([r.model_dump(mode="json", exclude=exclude) for r in reports], _invocation(args))
    sys.stderr.write(summary_table(reports).to_string(index=False) + "\n")
    if failures(reports):
        return EXIT_FALSE
    stopped = limited(reports)
    # a single check, or a grid where nothing ran to a verdict
    if stopped and (args.theorem != "grid" or len(stopped) == len(reports)):
        return EXIT_LIMIT
    return EXIT_OK


def _invocation(args) -> Invocation:
    parameters = {
        key: (value.value if isinstance(value, Enum) else value)
        for key, value in sorted(vars(args).items())
        if key not in {"command", "handler", "out", "verbose", "a", "b", "group", "table"}
    }
    inputs = [v for key in ("group", "table", "a", "b") for v in _as_list(getattr(args, key, None))]
    return Invocation(subcommand=args.command, inputs=inputs, parameters=parameters, output=args.out)


def _as_list(value: Any) -> List[str]:
    if value is None:
        return []
    return [str(v) for v in value] if isinstance(value, list) else [str(value)]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="schurpower", description="Schur rings over direct powers of finite groups")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--cap", type=int, default=DOMAIN_CAP, help="Largest admissible carrier size n^m")
    common.add_argument("--budget", type=int, default=SEARCH_BUDGET, help="Search node budget")
    common.add_argument("--threads", type=int, default=THREADS)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--timings", action="store_true", help="Include elapsed seconds in reports")
    common.add_argument("--out", default=None, help="Output path; stdout when omitted")
    common.add_argument("-v", "--verbose", action="store_true", help="Log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("group", parents=[common], help="Build or validate a group file")
    p.add_argument("--name", default="Z1", help="Group name such as Z4, S3, D4, Q8 or Z2xZ2")
    p.add_argument("--table", default=None, help="Group file to validate")
    p.add_argument("--individualize", type=int, action="append", help="Give this element a fresh color")
    p.set_defaults(handler=cmd_group)

    for name, handler, help_text in (
        ("am", cmd_am, "Compute A_m(G)"),
        ("cyc", cmd_cyc, "Compute cyc_m(G)"),
        ("wl", cmd_wl, "Compute WL_m(G)"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_text)
        p.add_argument("--group", required=True, help="Group file or group name")
        p.add_argument("--m", type=int, required=True)
        if name != "wl":
            p.add_argument("--constants", action="store_true", help="Export nonzero structure constants")
        p.set_defaults(handler=handler)

    p = sub.add_parser("fingerprint", parents=[common], help="Joint WL_m fingerprint of two groups")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--confirm", action="store_true", help="Re-check a positive verdict through the color matching")
    p.set_defaults(handler=cmd_fingerprint)

    p = sub.add_parser("compare", parents=[common], help="Compare two partitions")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--mode", choices=[m.value for m in CompareMode], default=CompareMode.EQUAL.value)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("iso", parents=[common], help="Group or S-ring isomorphism search")
    p.add_argument("--mode", choices=[m.value for m in IsoMode], required=True)
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--m", type=int, default=3, help="Arity used when an input is a group")
    p.add_argument("--oracle", choices=[o.value for o in IsoOracle], default=IsoOracle.DIRECT.value)
    p.set_defaults(handler=cmd_iso)

    p = sub.add_parser("verify", parents=[common], help="Run theorem checks")
    p.add_argument("--theorem", choices=["grid"] + [t.value for t in TheoremId], default="grid")
    p.add_argument("--group", action="append", help="Group name; repeat for two-group checks")
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument(
        "--stabilization-cap",
        type=int,
        default=STABILIZATION_CAP,
        help="Largest n^(m+k) for stabilization checks in the grid",
    )
    p.set_defaults(handler=cmd_verify)
    return parser


def configure_logging(verbose: bool) -> None:
    logger.remove()
    logger.add(sys.stderr, level="DEBUG" if verbose else LOG_LEVEL)


def run(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (DomainCapExceededError, BudgetExceededError) as e:
        logger.error(str(e))
        return EXIT_LIMIT
    except (SchurPowerError, ValidationError, OSError, json.JSONDecodeError, ValueError) as e:
        logger.error(f"{type(e).__name__}: {e}")
        return EXIT_ERROR


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
