"""Navigation-axis graph: converts an RDF graph into an edge-labeled digraph.

Every triple (s, p, o) contributes twelve labeled edges (next/edge/node axes,
qualified and bare, forward and inverse) and every constant carries two self
loops.  The alphabet of these labels is what grammars and expressions range
over.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import ParseError
from .rdf import RdfGraph

AXES = ("self", "next", "edge", "node")

# synthetic axis used by compiled nre plans; '#' is illegal in axis tokens so
# these labels can never collide with parsed ones
SYNTH_AXIS = "nest"


@dataclass(frozen=True, slots=True)
class AxisLabel:
    """One edge label: an axis, an inverse flag and an optional qualifier."""

    axis: str
    inverse: bool = False
    qualifier: str | None = None

    def __post_init__(self):
        if self.axis == "self" and self.inverse:
            raise ValueError("self is its own inverse")

    def render(self) -> str:
        text = self.axis + ("-1" if self.inverse else "")
        if self.qualifier is not None:
            text += f"::{self.qualifier}"
        return text

    def __str__(self) -> str:
        return self.render()


def parse_axis_label(token: str, lineno=None, col=None, source=None) -> AxisLabel:
    """Parse a label token: ``next``, ``next-1``, ``next::IRI``, ``next-1::IRI``."""
    name, sep, qual = token.partition("::")
    inverse = False
    if name.endswith("-1"):
        inverse = True
        name = name[:-2]
    if name not in AXES:
        raise ParseError(f"unknown axis name {name!r}", lineno, col, source)
    if name == "self" and inverse:
        raise ParseError("self has no inverse form", lineno, col, source)
    if sep and not qual:
        raise ParseError("empty qualifier after '::'", lineno, col, source)
    return AxisLabel(name, inverse, qual if sep else None)


@dataclass(frozen=True)
class LabeledGraph:
    """voc(G) plus deduplicated labeled edges, indexed by label and endpoint.

    Immutable after construction; `extended` returns an augmented copy.
    """

    nodes: frozenset[int]
    by_label: dict[AxisLabel, frozenset[tuple[int, int]]]
    graph: RdfGraph
    out_adj: dict[int, tuple[tuple[AxisLabel, int], ...]] = field(init=False, repr=False)
    in_adj: dict[int, tuple[tuple[AxisLabel, int], ...]] = field(init=False, repr=False)

    def __post_init__(self):
        out: dict[int, list] = {n: [] for n in self.nodes}
        inc: dict[int, list] = {n: [] for n in self.nodes}
        for label, pairs in self.by_label.items():
            for a, b in pairs:
                out[a].append((label, b))
                inc[b].append((label, a))
        object.__setattr__(self, "out_adj", {n: tuple(v) for n, v in out.items()})
        object.__setattr__(self, "in_adj", {n: tuple(v) for n, v in inc.items()})

    @property
    def edge_count(self) -> int:
        return sum(len(p) for p in self.by_label.values())

    def edges(self):
        for label, pairs in self.by_label.items():
            for a, b in pairs:
                yield a, label, b

    def pairs(self, label: AxisLabel) -> frozenset[tuple[int, int]]:
        return self.by_label.get(label, frozenset())

    def qualified_edges(self, axis: str, inverse: bool):
        """All (source, qualifier-id, target) for one axis family.

        Qualifiers are reported as constant ids so nre nesting can intersect
        them with relation domains.
        """
        id_of = self.graph.interner.id_of
        for label, pairs in self.by_label.items():
            if label.axis != axis or label.inverse != inverse or label.qualifier is None:
                continue
            qid = id_of(label.qualifier)
            if qid is None:
                continue
            for a, b in pairs:
                yield a, qid, b

    def extended(self, extra: dict[AxisLabel, set[tuple[int, int]]]) -> "LabeledGraph":
        """A new graph with additional labeled edges over the same nodes."""
        merged = dict(self.by_label)
        for label, pairs in extra.items():
            merged[label] = frozenset(merged.get(label, frozenset()) | pairs)
        return LabeledGraph(self.nodes, merged, self.graph)


def convert(g: RdfGraph) -> LabeledGraph:
    """Materialize the axis graph: 2 self loops per constant, 12 edges per triple."""
    lex = g.interner.lexical
    by_label: dict[AxisLabel, set[tuple[int, int]]] = {}

    def add(a: int, label: AxisLabel, b: int):
        by_label.setdefault(label, set()).add((a, b))

    self_bare = AxisLabel("self")
    for c in g.vocabulary:
        add(c, self_bare, c)
        add(c, AxisLabel("self", qualifier=lex(c)), c)

    nxt, edg, nod = AxisLabel("next"), AxisLabel("edge"), AxisLabel("node")
    nxt_i = AxisLabel("next", True)
    edg_i = AxisLabel("edge", True)
    nod_i = AxisLabel("node", True)
    for s, p, o in g.triples:
        ls, lp, lo = lex(s), lex(p), lex(o)
        add(s, AxisLabel("next", qualifier=lp), o)
        add(s, nxt, o)
        add(o, AxisLabel("next", True, lp), s)
        add(o, nxt_i, s)
        add(s, AxisLabel("edge", qualifier=lo), p)
        add(s, edg, p)
        add(p, AxisLabel("edge", True, lo), s)
        add(p, edg_i, s)
        add(p, AxisLabel("node", qualifier=ls), o)
        add(p, nod, o)
        add(o, AxisLabel("node", True, ls), p)
        add(o, nod_i, p)

    frozen = {label: frozenset(pairs) for label, pairs in by_label.items()}
    return LabeledGraph(frozenset(g.vocabulary), frozen, g)


def render_edges(lg: LabeledGraph) -> list[str]:
    """TSV lines ``source<TAB>label<TAB>target``, sorted for reproducibility."""
    lex = lg.graph.interner.lexical
    rows = [(lex(a), label.render(), lex(b)) for a, label, b in lg.edges()]
    return ["\t".join(r) for r in sorted(rows)]
