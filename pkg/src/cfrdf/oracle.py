"""Brute-force reference implementations used as ground truth in tests.

Everything here is deliberately independent of the worklist recognizer: the
bounded relation is computed from the language side (enumerate strings, then
compose per-label edge relations), and membership is checked with CYK.
Exponential in the length bound by design; callers keep inputs small.
"""

from __future__ import annotations

from .axis import LabeledGraph, convert
from .errors import ContractError
from .grammar import Cfg, generate_strings, is_norm_form, normalize, nullable_set
from .rdf import RdfGraph


def enumerate_traces(lg: LabeledGraph, max_len: int) -> set[tuple]:
    """All (source, target, trace) for walks of length <= max_len.

    Walks, not simple paths: revisiting nodes is allowed, and length-0 walks
    contribute (a, a, ()) for every node.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    out = set()
    for start in lg.nodes:
        frontier = {(start, ())}
        out.add((start, start, ()))
        for _ in range(max_len):
            nxt = set()
            for node, trace in frontier:
                for label, dst in lg.out_adj[node]:
                    nxt.add((dst, trace + (label,)))
            for node, trace in nxt:
                out.add((start, node, trace))
            frontier = nxt
            if not frontier:
                break
    return out


def cyk_membership(g: Cfg, v: str, w: tuple) -> bool:
    """True iff the terminal string w is derivable from v (norm-form grammar).

    Norm form keeps epsilon rules, so binary rules may have nullable children;
    each span is closed under the induced unit-style propagation.
    """
    if not is_norm_form(g):
        raise ContractError("cyk_membership requires a norm-form grammar")
    nullable = nullable_set(g)
    if not w:
        return v in nullable
    n = len(w)
    binary = [(h, b) for h, b in g.rules if len(b) == 2]
    table: dict[tuple[int, int], set[str]] = {}
    for i in range(n):
        table[(i, i + 1)] = {h for h, b in g.rules if len(b) == 1 and b[0] == w[i]}
    for width in range(1, n + 1):
        for i in range(n - width + 1):
            j = i + width
            cell = table.setdefault((i, j), set())
            changed = True
            while changed:
                changed = False
                for head, (left, right) in binary:
                    if head in cell:
                        continue
                    hit = (left in nullable and right in cell) or (
                        right in nullable and left in cell
                    )
                    if not hit:
                        for k in range(i + 1, j):
                            if left in table[(i, k)] and right in table[(k, j)]:
                                hit = True
                                break
                    if hit:
                        cell.add(head)
                        changed = True
    return v in table[(0, n)]


def _compose(rel: set, edges: frozenset) -> set:
    by_src: dict[int, list[int]] = {}
    for a, b in edges:
        by_src.setdefault(a, []).append(b)
    out = set()
    for a, mid in rel:
        for b in by_src.get(mid, ()):
            out.add((a, b))
    return out


def _string_relations(lg: LabeledGraph, strings: set[tuple]) -> dict[int, set]:
    """Union of walk relations of the given label strings, grouped by length.

    Shared prefixes are composed once via a trie; empty intermediate relations
    prune whole subtrees.
    """
    per_len: dict[int, set] = {}
    trie: dict = {}
    END = object()
    for s in strings:
        node = trie
        for sym in s:
            node = node.setdefault(sym, {})
        node[END] = True

    def walk(node, rel, depth):
        for sym, child in node.items():
            if sym is END:
                per_len.setdefault(depth, set()).update(rel)
                continue
            edges = lg.pairs(sym)
            nxt = (
                set(edges) if rel is None else _compose(rel, edges)
            )
            if nxt:
                walk(child, nxt, depth + 1)

    if () in strings:
        per_len[0] = {(a, a) for a in lg.nodes}
        trie.pop(END, None)
    walk(trie, None, 0)
    return per_len


def oracle_relation(g: RdfGraph, cfg: Cfg, v: str, max_len: int, lg=None) -> set:
    """Pairs connected by a walk of length <= max_len whose trace is in L(G_v).

    Computed from the language side: enumerate the bounded string set, then
    intersect each string with the graph by relation composition.  Equals the
    walk-side definition (a trace in the language is exactly a language string
    realized by a walk) while staying tractable on multigraphs.
    """
    per_len = per_length_relations(g, cfg, v, max_len, lg)
    out: set = set()
    for pairs in per_len.values():
        out |= pairs
    return out


def per_length_relations(g: RdfGraph, cfg: Cfg, v: str, max_len: int, lg=None):
    if lg is None:
        lg = convert(g)
    strings = generate_strings(cfg, v, max_len)
    return _string_relations(lg, strings)


def oracle_relation_from_traces(g: RdfGraph, cfg: Cfg, v: str, max_len: int) -> set:
    """The literal walk-side formulation; tiny inputs only (cross-check)."""
    lg = convert(g)
    norm = normalize(cfg)
    verdicts: dict[tuple, bool] = {}
    out = set()
    for a, b, trace in enumerate_traces(lg, max_len):
        if (a, b) in out:
            continue
        hit = verdicts.get(trace)
        if hit is None:
            hit = cyk_membership(norm, v, trace)
            verdicts[trace] = hit
        if hit:
            out.add((a, b))
    return out


def stabilized_oracle_relation(
    g: RdfGraph, cfg: Cfg, v: str, cap: int = 8, window: int = 2, lg=None
):
    """Bounded relation once it has stopped growing.

    Returns (relation, settled_length), or None when the relation still grows
    within `window` increments of the cap, i.e. the instance is unusable as a
    ground-truth comparison.
    """
    per_len = per_length_relations(g, cfg, v, cap, lg)
    acc: set = set()
    last_growth = 0
    for length in range(cap + 1):
        extra = per_len.get(length, set()) - acc
        if extra:
            acc |= extra
            last_growth = length
    if cap - last_growth < window:
        return None
    return acc, last_growth
