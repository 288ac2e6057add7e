"""``tdl``: batch front end for the census, extremal search, orderings, containers and switching.

Result bodies are deterministic; anything run-dependent (timing, worker
count, node counts) goes to the ``<out>.manifest.json`` sidecar.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from . import config
from .config import budget, parse_budget, set_budget
from .digraph import Digraph, Family
from .errors import BudgetExceeded, InvariantViolation
from .patterns import Pattern
from .weights import Weight

EXIT_OK, EXIT_USAGE, EXIT_BUDGET, EXIT_INVARIANT, EXIT_INTERNAL = 0, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _int_range(text: str) -> list[int]:
    """``5`` or ``3..6`` (inclusive)."""
    lo, sep, hi = text.partition("..")
    try:
        values = list(range(int(lo), int(hi) + 1)) if sep else [int(lo)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError(f"empty range {text!r}")
    return values


def _pattern(text: str) -> Pattern:
    try:
        return Pattern.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _weight(text: str) -> Weight:
    try:
        return Weight.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _family(text: str) -> Family:
    try:
        return Family.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _fraction(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected a number or p/q, got {text!r}") from None


def _graph(text: str) -> Digraph:
    try:
        return Digraph.from_text(text) if ";" in text else Digraph.from_hex(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=os.cpu_count() or 1, help="worker processes (1 = serial)")
    p.add_argument("--budget", help="budget preset and overrides, e.g. desk or large,census_space=1000000000")
    p.add_argument("--out", help="output file; a .manifest.json sidecar is written next to it")
    p.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tdl", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("census", help="count pattern-free graphs and classify them")
    p.add_argument("--n", type=_int_range, required=True)
    p.add_argument("--family", type=_family, default=Family.ORIENTED)
    p.add_argument("--pattern", type=_pattern, action="append", default=[])
    p.add_argument("--predicates", default="")
    p.add_argument("--samples", type=int, help="rejection-sample this many accepted graphs instead of enumerating")
    _common(p)

    p = sub.add_parser("extremal", help="exact weighted Turan number by branch and bound")
    p.add_argument("--n", type=_int_range, required=True)
    p.add_argument("--family", type=_family, default=Family.DIGRAPH)
    p.add_argument("--pattern", type=_pattern, action="append", required=True)
    p.add_argument("--weight", type=_weight, default=Weight.rational(2))
    p.add_argument("--witness-cap", type=int, default=10)
    p.add_argument("--stability", type=_fraction, metavar="DEFICIT",
                   help="also report distances of graphs within DEFICIT of the optimum")
    _common(p)

    p = sub.add_parser("fas", help="minimum feedback arc set (beta) with a witness ordering")
    p.add_argument("--graph", type=_graph, required=True, help='"n;u->v,..." or hex "n:rows"')
    _common(p)

    p = sub.add_parser("partition", help="optimal k-partition, or distance to a structured family")
    p.add_argument("--graph", type=_graph, required=True)
    p.add_argument("--k", type=int)
    p.add_argument("--distance", metavar="FAMILY",
                   help="transitive, tournament, blowup or kpartite:K")
    _common(p)

    p = sub.add_parser("containers", help="pattern hypergraph co-degrees and the container lemma bound")
    p.add_argument("--n", type=_int_range, required=True, help="N or A..B")
    p.add_argument("--pattern", type=_pattern, required=True)
    p.add_argument("--gamma", type=_fraction, default=Fraction(1))
    p.add_argument("--tau", type=_fraction, help="report delta at this tau instead of checking the lemma")
    _common(p)

    p = sub.add_parser("switch", help="flip-map identities between beta classes")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m1", type=int)
    p.add_argument("--m2", type=int)
    p.add_argument("--k", type=int, default=3)
    p.add_argument("--restricted", type=int, metavar="E", help="only graphs with at most E edges")
    p.add_argument("--largest", action="store_true", help="lex-max topological order as tie-break")
    _common(p)

    p = sub.add_parser("verify", help="run the acceptance suite")
    p.add_argument("--suite", default="all", help="all, or a comma list of criterion numbers")
    _common(p)
    return parser


# -- commands ------------------------------------------------------------------


def cmd_census(args, meta) -> tuple[list[dict], list[dict]]:
    from .census import exhaustive_census, parse_predicates, sample_census

    try:
        preds = parse_predicates(args.predicates)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.samples is not None and args.samples < 1:
        raise UsageError("--samples must be >= 1")
    records = []
    for n in args.n:
        if args.samples is None:
            records.append(exhaustive_census(n, args.family, args.pattern, preds, jobs=args.jobs))
        else:
            records.append(sample_census(n, args.family, args.pattern, preds, args.samples, args.seed,
                                         jobs=args.jobs))
    return [r for rec in records for r in rec.rows()], [rec.to_json() for rec in records]


def cmd_extremal(args, meta):
    from .extremal import extremal_number, stability_probe

    if args.stability is not None and len(args.pattern) != 1:
        raise UsageError("--stability takes a single pattern")
    rows, docs = [], []
    for n in args.n:
        res = extremal_number(n, tuple(args.pattern), args.family, args.weight,
                              witness_cap=args.witness_cap, jobs=args.jobs)
        meta.setdefault("node_count", {})[str(n)] = res.node_count
        meta.setdefault("elapsed_ms", {})[str(n)] = round(res.elapsed_ms, 3)
        rec = res.record()
        rec["value"] = str(res.value)
        rows.append(dict(rec))
        rec["witnesses"] = [g.to_text() for g in res.witnesses]
        if args.stability is not None:
            rec["stability"] = stability_probe(n, args.pattern[0], args.family, args.weight, args.stability)
        docs.append(rec)
    return rows, docs


def cmd_fas(args, meta):
    from .order import beta, gamma

    b, ordering = beta(args.graph)
    rec = {"graph": args.graph.to_text(), "beta": b, "gamma": gamma(args.graph),
           "order": " ".join(map(str, ordering.order))}
    return [rec], rec


def cmd_partition(args, meta):
    from .order import distance_to_family, optimal_partition

    if (args.k is None) == (args.distance is None):
        raise UsageError("give exactly one of --k or --distance")
    g = args.graph
    if args.k is not None:
        if args.k < 1:
            raise UsageError("--k must be >= 1")
        cost, part = optimal_partition(g, args.k)
        rec = {"graph": g.to_text(), "k": args.k, "non_crossing": cost,
               "classes": " ".join(map(str, part.classes))}
    else:
        try:
            d = distance_to_family(g, args.distance)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        rec = {"graph": g.to_text(), "family": args.distance, "distance": d}
    return [rec], rec


def cmd_containers(args, meta):
    from .containers import build_pattern_hypergraph, co_degree, lemma_deltabound_check, m_density

    H = args.pattern
    try:
        m = str(m_density(H))
    except ValueError:
        m = ""
    if args.tau is not None:
        if args.tau <= 0:
            raise UsageError("--tau must be positive")
        rows = []
        for N in args.n:
            D = build_pattern_hypergraph(N, H)
            row = co_degree(D, args.tau).to_json(str(H))
            row.update(edges=len(D.edges), r=D.r, m=m)
            rows.append(row)
        return rows, rows
    try:
        rep = lemma_deltabound_check(H, args.gamma, args.n)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    rep["m"] = m
    if not rep["pass"]:
        raise InvariantViolation(f"container co-degree bound fails for {H}", rep)
    return rep["rows"], rep


def cmd_switch(args, meta):
    from .switching import backward_preimage_bound_check, forward_degree_identity_check, ratio_check

    if args.m1 is None and args.m2 is None:
        raise UsageError("give --m1 and/or --m2")
    try:
        reports = []
        if args.m2 is not None:
            reports.append(dict(check="forward", **forward_degree_identity_check(
                args.n, args.m2, args.k, args.restricted, args.largest)))
        if args.m1 is not None:
            reports.append(dict(check="backward", **backward_preimage_bound_check(
                args.n, args.m1, args.k, args.restricted)))
        if args.m1 is not None and args.m2 is not None and args.restricted is None:
            r = ratio_check(args.n, args.m1, args.m2, args.k)
            r.pop("sizes")
            reports.append(dict(check="ratio", **r))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    bad = [r["check"] for r in reports if not r["pass"]]
    if bad:
        raise InvariantViolation(f"switching checks failed: {', '.join(bad)}", {"reports": reports})
    return reports, reports


def cmd_verify(args, meta):
    from . import acceptance

    if args.suite == "all":
        selection = sorted(acceptance.CRITERIA)
    else:
        try:
            selection = [int(x) for x in args.suite.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"bad --suite {args.suite!r}") from None
        unknown = [i for i in selection if i not in acceptance.CRITERIA]
        if unknown or not selection:
            raise UsageError(f"unknown criteria {unknown}")
    results = {}
    for i in selection:
        results.update(acceptance.run([i]))
        print(acceptance.summary_line(i, results[i]), file=sys.stderr, flush=True)
    meta["seconds"] = {str(i): r.pop("seconds") for i, r in results.items()}
    rows = [{"criterion": i, "pass": r["pass"], "detail": r["detail"]} for i, r in results.items()]
    doc = json.loads(acceptance.dumps(results))
    failed = [i for i, r in results.items() if not r["pass"]]
    if failed:
        meta["failed"] = failed
    return rows, doc


COMMANDS = {"census": cmd_census, "extremal": cmd_extremal, "fas": cmd_fas, "partition": cmd_partition,
            "containers": cmd_containers, "switch": cmd_switch, "verify": cmd_verify}


# -- output ----------------------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, (dict, list, tuple)):
        return json.dumps(v, sort_keys=True, default=str)
    return "" if v is None else str(v)


def render(rows: list[dict], doc, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(doc, indent=2, sort_keys=True, default=str) + "\n"
    buf = io.StringIO()
    fields: list[str] = []
    for r in rows:
        fields += [k for k in r if k not in fields]
    w = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: _cell(r.get(k)) for k in fields})
    return buf.getvalue()


def _write(path: str | None, text: str):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    if args.jobs < 1:
        print("tdl: error: --jobs must be >= 1", file=sys.stderr)
        return EXIT_USAGE
    previous = None
    if args.budget:
        try:
            previous = config._override
            set_budget(parse_budget(args.budget))
        except ValueError as exc:
            print(f"tdl: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    meta: dict = {}
    start = time.perf_counter()
    code = EXIT_OK
    rows, doc = [], None
    try:
        rows, doc = COMMANDS[args.command](args, meta)
        if meta.get("failed"):
            code = EXIT_INVARIANT
    except UsageError as exc:
        print(f"tdl {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"tdl {args.command}: refused: {exc}", file=sys.stderr)
        code = EXIT_BUDGET
        doc = {"error": "budget", "message": str(exc)}
    except InvariantViolation as exc:
        print(f"tdl {args.command}: invariant violated: {exc}", file=sys.stderr)
        code = EXIT_INVARIANT
        rows, doc = exc.record.get("rows") or exc.record.get("reports") or [], exc.record
    except Exception as exc:  # noqa: BLE001 - reported with its own exit code
        print(f"tdl {args.command}: internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    finally:
        if args.budget:
            set_budget(previous)
    if doc is not None:
        _write(args.out, render(rows if code != EXIT_BUDGET else [doc], doc, args.format))
    if args.out:
        manifest = {
            "argv": ["tdl"] + argv, "command": args.command, "version": __version__,
            "budget": vars(budget()) if not args.budget else vars(parse_budget(args.budget)),
            "seed": args.seed, "jobs": args.jobs, "format": args.format, "exit_code": code,
            "wall_seconds": round(time.perf_counter() - start, 3),
            "finished": time.strftime("%Y-%m-%dT%H:%M:%S%z"),
            **meta,
        }
        with open(args.out + ".manifest.json", "w", encoding="utf-8") as fh:
            json.dump(manifest, fh, indent=2, sort_keys=True, default=str)
            fh.write("\n")
    return code


def run():
    sys.exit(main())


if __name__ == "__main__":
    run()
