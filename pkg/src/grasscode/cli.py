"""Command line entry point: ``enum``, ``graph`` and ``verify``.

Exit codes: 0 pass, 1 assertion failure, 2 usage error, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .codegraph import VARIANTS, build_graph, nondegenerate_array
from .field import SUPPORTED_ORDERS, gf
from .graphio import FORMATS, dimacs_encode, graph6_encode, label_lines, write_graph
from .grassmannian import BudgetExceededError, GrassmannianParams, grassmannian_array, to_subspaces
from .suites import SUITES, run_all, run_suite

EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if value <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="grasscode", description="Grassmann graphs of linear codes over small finite fields.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def space(sp, required=True):
        sp.add_argument("--q", type=int, required=required, help=f"field order, one of {list(SUPPORTED_ORDERS)}")
        sp.add_argument("--n", type=int, required=required, help="ambient dimension")
        sp.add_argument("--k", type=int, required=required, help="subspace dimension")
        sp.add_argument("--budget", type=_positive, default=None, help="vertex budget (default: GRASSCODE_BUDGET or 2000000)")
        sp.add_argument("--out", type=Path, default=None, help="output file (default: stdout)")

    e = sub.add_parser("enum", help="list subspaces, one per line, then count=N")
    space(e)
    e.add_argument("--nondeg", action="store_true", help="only non-degenerate codes")

    g = sub.add_parser("graph", help="export a graph as graph6 or DIMACS with a label sidecar")
    space(g)
    g.add_argument("--variant", choices=[v for v in VARIANTS if v != "custom-vertex-set"], default="nondeg")
    g.add_argument("--nondeg", action="store_const", const="nondeg", dest="variant", help="same as --variant nondeg")
    g.add_argument("--format", choices=FORMATS, default="graph6")

    v = sub.add_parser("verify", help="run a verification suite and print a JSON report")
    space(v, required=False)
    v.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--time-budget", type=_positive_float, default=None, help="seconds")
    v.add_argument("--jobs", type=_positive, default=1)
    v.add_argument("--long", action="store_true", help="include the n = 9 distance witness search")
    return p


def _params(args) -> GrassmannianParams:
    kw = {"budget": args.budget} if args.budget else {}
    return GrassmannianParams(args.n, args.k, gf(args.q), **kw)


def _emit(text: str, out: Path | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


def cmd_enum(args) -> int:
    params = _params(args)
    params.check_budget()
    F = params.field
    arr = nondegenerate_array(F, args.n, args.k, params.budget) if args.nondeg else grassmannian_array(F, args.n, args.k, params.budget)
    lines = [X.serialize() for X in to_subspaces(F, arr)]
    _emit("".join(s + "\n" for s in lines) + f"count={len(lines)}\n", args.out)
    return EXIT_PASS


def cmd_graph(args) -> int:
    g = build_graph(_params(args), args.variant)
    if args.out is not None:
        write_graph(g, args.out, args.format)
        return EXIT_PASS
    if args.format == "graph6":
        sys.stdout.write(graph6_encode(g.num_vertices, g.edge_array()).decode("ascii"))
    else:
        p = g.params
        note = f"grassmann graph n={p.n} k={p.k} q={p.q} variant={g.variant}"
        sys.stdout.write(dimacs_encode(g.num_vertices, g.edge_array(), (note,)))
        sys.stdout.write("".join(f"c label {i + 1} {s}" for i, s in enumerate(label_lines(g).splitlines(True))))
    return EXIT_PASS


def cmd_verify(args) -> int:
    if args.q is not None and args.q not in SUPPORTED_ORDERS:
        raise ValueError(f"unsupported field order {args.q}")
    common = {"seed": args.seed, "long": args.long, "time_budget": args.time_budget, "jobs": args.jobs}
    if args.suite == "all":
        report = run_all(**common)
    else:
        report = run_suite(args.suite, args.q, args.n, args.k, **common)
    _emit(json.dumps(report, indent=2) + "\n", args.out)
    return {"pass": EXIT_PASS, "fail": EXIT_FAIL, "budget": EXIT_BUDGET}[report["status"]]


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    saved = os.environ.get("GRASSCODE_BUDGET")
    if args.budget is not None:
        # suites build their own params, which read the budget from the environment
        os.environ["GRASSCODE_BUDGET"] = str(args.budget)
    try:
        return {"enum": cmd_enum, "graph": cmd_graph, "verify": cmd_verify}[args.command](args)
    except BudgetExceededError as exc:
        print(f"grasscode: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        print(f"grasscode: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        if saved is None:
            os.environ.pop("GRASSCODE_BUDGET", None)
        else:
            os.environ["GRASSCODE_BUDGET"] = saved


if __name__ == "__main__":
    raise SystemExit(main())
