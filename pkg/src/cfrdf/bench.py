"""Benchmark harness: hierarchy queries over ontology files and a synthetic
chain family for scaling checks, with optional kernel comparison."""

from __future__ import annotations

import time
from dataclasses import dataclass
from pathlib import Path

from .axis import AxisLabel, convert
from .grammar import Cfg, normalize
from .rdf import RdfGraph, graph_from_lexical, parse_ntriples
from .recognizer import relation_of, solve

RDFS_SUBCLASS = "http://www.w3.org/2000/01/rdf-schema#subClassOf"
RDF_TYPE = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type"


@dataclass(frozen=True)
class BenchRow:
    name: str
    triples: int
    query: str
    kernel: str
    elapsed_ms: float
    results: int
    probes: int


def q1_grammar(subclass_iri: str = RDFS_SUBCLASS, type_iri: str = RDF_TYPE) -> Cfg:
    """Same-layer pairs: balanced up/down walks over subClassOf or type."""
    sub_up = AxisLabel("next", True, subclass_iri)
    sub_dn = AxisLabel("next", False, subclass_iri)
    ty_up = AxisLabel("next", True, type_iri)
    ty_dn = AxisLabel("next", False, type_iri)
    rules = (
        ("S", (sub_up, "S", sub_dn)),
        ("S", (ty_up, "S", ty_dn)),
        ("S", ()),
    )
    return Cfg(frozenset({"S"}), rules)


def q2_grammar(subclass_iri: str = RDFS_SUBCLASS) -> Cfg:
    """Adjacent-layer pairs over the subClassOf hierarchy."""
    dn = AxisLabel("next", False, subclass_iri)
    up = AxisLabel("next", True, subclass_iri)
    rules = (
        ("S", ("B", "S")),
        ("S", ()),
        ("B", (dn, "B", up)),
        ("B", ("B", up)),
        ("B", (dn, up)),
    )
    return Cfg(frozenset({"S", "B"}), rules)


def timed_solve(g: RdfGraph, cfg: Cfg, start: str, kernel: str | None = None):
    """(relation pairs, elapsed ms, probes); timing covers convert+solve only."""
    t0 = time.perf_counter()
    lg = convert(g)
    rel = solve(lg, normalize(cfg), kernel=kernel)
    pairs = relation_of(rel, start)
    elapsed = (time.perf_counter() - t0) * 1000.0
    return pairs, elapsed, rel.probes


def _expand_kernels(kernel: str | None) -> list[str]:
    if kernel == "both":
        return ["numpy", "numba"]
    return [kernel or "auto"]


def bench_hierarchy(
    paths,
    subclass_iri: str = RDFS_SUBCLASS,
    type_iri: str = RDF_TYPE,
    kernel: str | None = None,
) -> list[BenchRow]:
    queries = {
        "Q1": (q1_grammar(subclass_iri, type_iri), "S"),
        "Q2": (q2_grammar(subclass_iri), "S"),
    }
    rows = []
    for path in paths:
        path = Path(path)
        g = parse_ntriples(path.read_text(), source=str(path))
        for qname, (cfg, start) in queries.items():
            for k in _expand_kernels(kernel):
                use = None if k == "auto" else k
                pairs, ms, probes = timed_solve(g, cfg, start, kernel=use)
                rows.append(
                    BenchRow(path.name, len(g), qname, k, ms, len(pairs), probes)
                )
    return rows


def chain_graph(size: int, subclass_iri: str = RDFS_SUBCLASS) -> RdfGraph:
    """A subClassOf chain c0 < c1 < ... with `size` triples."""
    return graph_from_lexical(
        (f"urn:chain:c{i}", subclass_iri, f"urn:chain:c{i + 1}") for i in range(size)
    )


def bench_chains(
    sizes=(64, 128, 256, 512),
    subclass_iri: str = RDFS_SUBCLASS,
    kernel: str | None = None,
) -> list[BenchRow]:
    cfg = q1_grammar(subclass_iri, RDF_TYPE)
    rows = []
    for size in sizes:
        g = chain_graph(size, subclass_iri)
        for k in _expand_kernels(kernel):
            use = None if k == "auto" else k
            pairs, ms, probes = timed_solve(g, cfg, "S", kernel=use)
            rows.append(
                BenchRow(f"chain-{size}", len(g), "Q1", k, ms, len(pairs), probes)
            )
    return rows
