"""Command-line interface.

Exit codes: 0 success / verified, 1 violations or invalid certificate,
2 usage or input errors, 3 search budget exhausted.  Every command prints a
JSON report to stdout (or ``--report FILE``); reports are byte-stable unless
``--timing`` adds wall-clock fields.
"""

from __future__ import annotations

import argparse
import logging
import sys
import time
from typing import Optional, Sequence

from . import __version__
from . import geometry as geo
from . import io
from .certificate import build_certificate
from .construction import build_construction
from .errors import (AffbolError, BudgetExceeded, InternalInconsistency, InvalidP,
                     NotVerified, QEqualsTwo)
from .families import bollobas_sum, verify_cross_intersecting
from .search import build_ground_set, search_max

log = logging.getLogger("affbol")

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dims(text: str) -> list[int]:
    try:
        return sorted({int(x) for x in text.split(",") if x.strip()})
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--report", metavar="FILE", help="write the JSON report here as well")
    common.add_argument("--timing", action="store_true",
                        help="include wall-clock times (makes reports non-reproducible)")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="affbol", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"affbol {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("verify", parents=[common], help="check a family file")
    s.add_argument("family")
    s.add_argument("--mode", choices=["skew", "symmetric"],
                   help="override the mode stored in the file")

    s = sub.add_parser("construct", parents=[common], help="build the hyperplane family")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("-o", "--output", metavar="FILE", help="write the family file here")

    s = sub.add_parser("certify", parents=[common], help="check the evaluation-matrix certificate")
    s.add_argument("family")
    s.add_argument("--p", type=int, help="prime divisor of q - 1 (default: smallest)")

    s = sub.add_parser("search", parents=[common], help="exact branch-and-bound search")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--geometry", choices=["affine", "projective"], default="affine")
    s.add_argument("--dims-a", type=_dims, help="allowed dimensions of A, e.g. 0,1")
    s.add_argument("--dims-b", type=_dims, help="allowed dimensions of B")
    s.add_argument("--budget", type=int, help="maximum search-tree nodes to expand")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--checkpoint", metavar="FILE", help="resume from / save progress to FILE")
    s.add_argument("--no-symmetry", action="store_true",
                   help="search from every node instead of one per symmetry orbit")
    s.add_argument("-o", "--output", metavar="FILE", help="write the witness family file here")

    s = sub.add_parser("enumerate", parents=[common], help="list affine subspaces")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--dims", type=_dims)

    s = sub.add_parser("sum", parents=[common], help="exact Bollobas sum of a set family")
    s.add_argument("family")
    return p


# ---------------------------------------------------------------------------
# commands; each returns (exit code, result dict)


def cmd_verify(args):
    fam = io.read_family(args.family)
    if args.mode:
        fam = fam.with_mode(args.mode)
    bad = verify_cross_intersecting(fam)
    result = {
        "m": fam.m,
        "geometry": fam.geometry,
        "mode": fam.mode,
        "verdict": "violations" if bad else "verified",
        "violations": [{"kind": v.kind, "i": v.i, "j": v.j,
                        "witness": sorted(v.witness) if isinstance(v.witness, frozenset)
                        else (list(v.witness) if isinstance(v.witness, tuple) else v.witness)}
                       for v in bad],
    }
    return (EXIT_FAIL if bad else EXIT_OK), result


def cmd_construct(args):
    out = build_construction(geo.make_space(args.n, args.q))
    data = io.serialize_family(out.family)
    if args.output:
        io.write_bytes(args.output, data)
    result = {
        "m": out.family.m,
        "expected_m": (args.q**args.n - 1) // (args.q - 1),
        "verdict": "verified",
        "family": io.family_to_json(out.family),
        "shifts": [list(b) for b in out.shifts],
    }
    return EXIT_OK, result


def cmd_certify(args):
    fam = io.read_family(args.family)
    cert = build_certificate(fam, args.p)
    result = cert.to_json()
    result["verdict"] = "valid" if cert.valid else "invalid"
    return (EXIT_OK if cert.valid else EXIT_FAIL), result


def cmd_search(args):
    space = (geo.make_space(args.n, args.q) if args.geometry == "affine"
             else geo.projective_space(args.n, args.q))
    gs = build_ground_set(space, args.dims_a, args.dims_b, args.geometry)
    seeds = list(range(len(gs.nodes))) if args.no_symmetry else None
    res = search_max(gs, budget=args.budget, seeds=seeds, workers=args.workers,
                     checkpoint=args.checkpoint)
    if args.output:
        io.write_bytes(args.output, io.serialize_family(res.witness))
    stats = dict(res.stats)
    wall = stats.pop("wall_time_s")
    if args.timing:
        stats["wall_time_s"] = wall
    result = {
        "geometry": gs.geometry,
        "ground_set_nodes": len(gs.nodes),
        "dims_a": list(gs.dims_a),
        "dims_b": list(gs.dims_b),
        "best_m": res.best_m,
        "optimal": res.optimal,
        "sequence": list(res.sequence),
        "witness": io.family_to_json(res.witness),
        "stats": stats,
        "bounds_context": res.bounds_context,
        "verdict": "optimal" if res.optimal else "budget_exhausted",
    }
    return (EXIT_OK if res.optimal else EXIT_BUDGET), result


def cmd_enumerate(args):
    space = geo.make_space(args.n, args.q)
    subs = geo.enumerate_affine_subspaces(space, args.dims)
    counts: dict[str, int] = {}
    for S in subs:
        counts[str(S.dim)] = counts.get(str(S.dim), 0) + 1
    result = {
        "count": len(subs),
        "counts_by_dim": counts,
        "subspaces": [io._member_json("affine", S) for S in subs],
    }
    return EXIT_OK, result


def cmd_sum(args):
    fam = io.read_family(args.family)
    total = bollobas_sum(fam)
    result = {
        "m": fam.m,
        "sum": f"{total.numerator}/{total.denominator}",
        "numerator": total.numerator,
        "denominator": total.denominator,
        "at_most_one": total <= 1,
        "verdict": "verified",
    }
    return EXIT_OK, result


COMMANDS = {"verify": cmd_verify, "construct": cmd_construct, "certify": cmd_certify,
            "search": cmd_search, "enumerate": cmd_enumerate, "sum": cmd_sum}

# failures that are verdicts about the input, not misuse
_FAIL_ERRORS = (QEqualsTwo, NotVerified, InvalidP)


def run_command(argv: Optional[Sequence[str]] = None) -> tuple[int, dict]:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    params = {k: v for k, v in sorted(vars(args).items())
              if k not in ("command", "report", "timing", "verbose")}
    t0 = time.perf_counter()
    try:
        code, result = COMMANDS[args.command](args)
        error = None
    except InternalInconsistency:
        raise
    except _FAIL_ERRORS as exc:
        code, result, error = EXIT_FAIL, None, exc
    except (AffbolError, OSError) as exc:
        code, result, error = EXIT_USAGE, None, exc
    report = {
        "command": args.command,
        "parameters": params,
        "tool_version": __version__,
        "exit_code": code,
        "result": result,
    }
    if error is not None:
        hint = (" (set AFFBOL_BUDGET to raise the point cap)"
                if isinstance(error, BudgetExceeded) else "")
        report["error"] = {"type": type(error).__name__, "message": f"{error}{hint}"}
    if args.timing:
        report["wall_time_s"] = round(time.perf_counter() - t0, 6)
    text = io.dumps(report)
    if args.report:
        with open(args.report, "w", encoding="utf-8") as fh:
            fh.write(text)
    sys.stdout.write(text)
    if error is not None:
        print(f"affbol {args.command}: {type(error).__name__}: {error}", file=sys.stderr)
    return code, report


def main(argv: Optional[Sequence[str]] = None) -> int:
    return run_command(argv)[0]


if __name__ == "__main__":
    sys.exit(main())
