"""Command-line interface.

Exit codes: 0 success, 1 evaluation failure (including engine disagreement
under ``nre --engine both``), 2 usage or input-parsing errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from . import bench as bench_mod
from .axis import convert, render_edges
from .errors import CfrdfError, ParseError
from .grammar import normalize, parse_grammar
from .nre import classify_nre, compile_nre, eval_nre, execute_plan, parse_nre
from .oracle import oracle_relation
from .queries import answer_pairs, parse_query, run_query
from .rdf import parse_ntriples
from .recognizer import relation_of, solve
from .sparql import evaluate_pattern, normalize_uccf, parse_pattern_file, render_mappings


def _read(path: str) -> str:
    return Path(path).read_text()


def _emit(lines_or_objs, fmt: str, out, header=None):
    stream = open(out, "w") if out else sys.stdout
    try:
        if fmt == "json":
            for obj in lines_or_objs:
                stream.write(json.dumps(obj, sort_keys=True) + "\n")
        else:
            if header:
                stream.write("\t".join(header) + "\n")
            for row in lines_or_objs:
                stream.write("\t".join(str(c) for c in row) + "\n")
    finally:
        if out:
            stream.close()


def _emit_pairs(pairs, fmt, out):
    if fmt == "json":
        _emit(({"x": a, "y": b} for a, b in pairs), fmt, out)
    else:
        _emit(pairs, fmt, out)


def _load_graph(args):
    return parse_ntriples(_read(args.graph), source=args.graph)


def cmd_convert(args) -> int:
    lg = convert(_load_graph(args))
    if args.format == "json":
        rows = (
            {"source": s, "label": l, "target": t}
            for s, l, t in (line.split("\t") for line in render_edges(lg))
        )
        _emit(rows, "json", args.out)
    else:
        _emit((line.split("\t") for line in render_edges(lg)), "tsv", args.out)
    return 0


def cmd_solve(args) -> int:
    g = _load_graph(args)
    cfg = parse_grammar(_read(args.grammar), source=args.grammar)
    rel = solve(convert(g), normalize(cfg), kernel=args.kernel)
    lex = g.interner.lexical
    pairs = sorted((lex(a), lex(b)) for a, b in relation_of(rel, args.start))
    _emit_pairs(pairs, args.format, args.out)
    return 0


def cmd_query(args) -> int:
    g = _load_graph(args)
    q = parse_query(_read(args.query), source=args.query)
    answers = run_query(g, q, kernel=args.kernel)
    _emit_pairs(answer_pairs(g, answers, q.head), args.format, args.out)
    return 0


def cmd_nre(args) -> int:
    g = _load_graph(args)
    expr = parse_nre(args.expr)
    lex = g.interner.lexical
    results = {}
    if args.engine in ("direct", "both"):
        results["direct"] = eval_nre(g, expr)
    if args.engine in ("compiled", "both"):
        results["compiled"] = execute_plan(g, compile_nre(expr), kernel=args.kernel)
    if args.engine == "both" and results["direct"] != results["compiled"]:
        only_d = results["direct"] - results["compiled"]
        only_c = results["compiled"] - results["direct"]
        print(
            f"engines disagree ({classify_nre(expr)}): "
            f"{len(only_d)} only-direct, {len(only_c)} only-compiled",
            file=sys.stderr,
        )
        for a, b in sorted((lex(x), lex(y)) for x, y in only_d):
            print(f"only-direct\t{a}\t{b}", file=sys.stderr)
        for a, b in sorted((lex(x), lex(y)) for x, y in only_c):
            print(f"only-compiled\t{a}\t{b}", file=sys.stderr)
        return 1
    pairs = results.get("direct", results.get("compiled"))
    _emit_pairs(sorted((lex(a), lex(b)) for a, b in pairs), args.format, args.out)
    return 0


def cmd_sparql(args) -> int:
    g = _load_graph(args)
    pattern, registry = parse_pattern_file(_read(args.pattern), source=args.pattern)
    if args.normalize_uccf:
        pattern, registry = normalize_uccf(pattern, registry)
    mappings = evaluate_pattern(g, pattern, registry, kernel=args.kernel)
    variables, rows = render_mappings(g, mappings)
    if args.format == "json":
        _emit(
            (
                {v: cell for v, cell in zip(variables, row) if cell != ""}
                for row in rows
            ),
            "json",
            args.out,
        )
    else:
        _emit(rows, "tsv", args.out, header=variables)
    return 0


def cmd_oracle(args) -> int:
    g = _load_graph(args)
    cfg = parse_grammar(_read(args.grammar), source=args.grammar)
    pairs = oracle_relation(g, cfg, args.start, args.max_len)
    lex = g.interner.lexical
    _emit_pairs(sorted((lex(a), lex(b)) for a, b in pairs), args.format, args.out)
    return 0


def cmd_bench(args) -> int:
    if args.suite == "hierarchy":
        if not args.graphs:
            print("bench --suite hierarchy requires --graphs", file=sys.stderr)
            return 2
        root = Path(args.graphs)
        if not root.exists():
            print(f"no such directory: {root}", file=sys.stderr)
            return 2
        paths = sorted(root.glob("*.nt")) if root.is_dir() else [root]
        if not paths:
            print(f"no .nt files under {root}", file=sys.stderr)
            return 2
        rows = bench_mod.bench_hierarchy(
            paths,
            subclass_iri=args.subclass_iri,
            type_iri=args.type_iri,
            kernel=args.kernel,
        )
    else:
        sizes = [int(s) for s in args.sizes.split(",")]
        rows = bench_mod.bench_chains(
            sizes, subclass_iri=args.subclass_iri, kernel=args.kernel
        )
    if args.format == "json":
        _emit((asdict(r) for r in rows), "json", args.out)
    else:
        header = ["name", "triples", "query", "kernel", "time_ms", "results", "probes"]
        _emit(
            (
                [r.name, r.triples, r.query, r.kernel, f"{r.elapsed_ms:.1f}", r.results, r.probes]
                for r in rows
            ),
            "tsv",
            args.out,
            header=header,
        )
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cfrdf",
        description="Context-free path queries over RDF graphs",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True, help="N-Triples file")
        p.add_argument("--out", help="write results to this file instead of stdout")
        p.add_argument("--format", choices=("tsv", "json"), default="tsv")

    p = sub.add_parser("convert", help="dump the axis graph as TSV edges")
    common(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("solve", help="solve a grammar and print one relation")
    common(p)
    p.add_argument("--grammar", required=True)
    p.add_argument("--start", required=True, help="nonterminal to report")
    p.add_argument("--kernel", choices=("numpy", "numba"))
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("query", help="evaluate a (U)CCFPQ query file")
    common(p)
    p.add_argument("--query", required=True)
    p.add_argument("--kernel", choices=("numpy", "numba"))
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("nre", help="evaluate a nested regular expression")
    common(p)
    p.add_argument("--expr", required=True)
    p.add_argument(
        "--engine", choices=("direct", "compiled", "both"), default="direct"
    )
    p.add_argument("--kernel", choices=("numpy", "numba"))
    p.set_defaults(func=cmd_nre)

    p = sub.add_parser("sparql", help="evaluate a pattern file")
    common(p)
    p.add_argument("--pattern", required=True)
    p.add_argument(
        "--normalize-uccf",
        action="store_true",
        help="rewrite uccftp nodes before evaluation",
    )
    p.add_argument("--kernel", choices=("numpy", "numba"))
    p.set_defaults(func=cmd_sparql)

    p = sub.add_parser("oracle", help="bounded brute-force relation (debugging)")
    common(p)
    p.add_argument("--grammar", required=True)
    p.add_argument("--start", required=True)
    p.add_argument("--max-len", type=int, default=6)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="run the benchmark suites")
    common(p, graph=False)
    p.add_argument("--suite", choices=("hierarchy", "chains"), default="hierarchy")
    p.add_argument("--graphs", help="directory of .nt files (hierarchy suite)")
    p.add_argument("--sizes", default="64,128,256,512", help="chain sizes")
    p.add_argument("--subclass-iri", default=bench_mod.RDFS_SUBCLASS)
    p.add_argument("--type-iri", default=bench_mod.RDF_TYPE)
    p.add_argument("--kernel", choices=("numpy", "numba", "both"))
    p.set_defaults(func=cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (ParseError, FileNotFoundError, IsADirectoryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CfrdfError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
