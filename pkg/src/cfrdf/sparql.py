"""cfSPARQL pattern algebra: context-free triple patterns plus AND, UNION,
OPT, FILTER and SELECT under mapping-set semantics.

Patterns reference named queries from a registry; union-of-conjunctive
triple patterns can be normalized away into plain context-free triple
patterns without changing any answer set.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import EvaluationError, ParseError
from .queries import (
    Mapping,
    NonterminalAtom,
    TriplePatternAtom,
    Uccfpq,
    run_query,
)
from .rdf import RdfGraph

# --- pattern tree ------------------------------------------------------------


@dataclass(frozen=True)
class Cftp:
    x: str
    query: str
    y: str


@dataclass(frozen=True)
class Uccftp:
    x: str
    query: str
    y: str


@dataclass(frozen=True)
class TriplePattern:
    x: str
    y: str
    z: str


@dataclass(frozen=True)
class And:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class Union:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class Opt:
    left: "Pattern"
    right: "Pattern"


@dataclass(frozen=True)
class Filter:
    pattern: "Pattern"
    constraint: "Constraint"


@dataclass(frozen=True)
class Select:
    variables: frozenset[str]
    pattern: "Pattern"


Pattern = "Cftp | Uccftp | TriplePattern | And | Union | Opt | Filter | Select"


# --- constraints (three-valued: True / False / None means error) -------------


@dataclass(frozen=True)
class Const:
    lexical: str


@dataclass(frozen=True)
class Eq:
    left: "str | Const"
    right: "str | Const"


@dataclass(frozen=True)
class Bound:
    var: str


@dataclass(frozen=True)
class CAnd:
    left: "Constraint"
    right: "Constraint"


@dataclass(frozen=True)
class COr:
    left: "Constraint"
    right: "Constraint"


@dataclass(frozen=True)
class CNot:
    inner: "Constraint"


Constraint = "Eq | Bound | CAnd | COr | CNot"


def _operand(op, mapping: Mapping, g: RdfGraph):
    if isinstance(op, Const):
        return g.interner.id_of(op.lexical)  # None only if absent from graph
    if op in mapping:
        return mapping[op]
    return "unbound"


def eval_constraint(c, mapping: Mapping, g: RdfGraph):
    """Kleene evaluation; '=' on an unbound variable is an error (None)."""
    if isinstance(c, Eq):
        left = _operand(c.left, mapping, g)
        right = _operand(c.right, mapping, g)
        if left == "unbound" or right == "unbound":
            return None
        return left is not None and right is not None and left == right
    if isinstance(c, Bound):
        return c.var in mapping
    if isinstance(c, CNot):
        inner = eval_constraint(c.inner, mapping, g)
        return None if inner is None else not inner
    if isinstance(c, CAnd):
        left = eval_constraint(c.left, mapping, g)
        right = eval_constraint(c.right, mapping, g)
        if left is False or right is False:
            return False
        if left is None or right is None:
            return None
        return True
    if isinstance(c, COr):
        left = eval_constraint(c.left, mapping, g)
        right = eval_constraint(c.right, mapping, g)
        if left is True or right is True:
            return True
        if left is None or right is None:
            return None
        return False
    raise TypeError(f"not a constraint: {c!r}")


# --- evaluation --------------------------------------------------------------


def _join_sets(left: set[Mapping], right: set[Mapping]) -> set[Mapping]:
    out = set()
    for l in left:
        for r in right:
            if l.compatible(r):
                out.add(l.merged(r))
    return out


def _pair_mappings(pairs, x: str, y: str) -> set[Mapping]:
    out = set()
    for a, b in pairs:
        if x == y:
            if a == b:
                out.add(Mapping({x: a}))
        else:
            out.add(Mapping({x: a, y: b}))
    return out


def evaluate_pattern(
    g: RdfGraph,
    p,
    registry: dict[str, Uccfpq],
    kernel: str | None = None,
) -> set[Mapping]:
    """Mapping-set semantics; OPT is the left outer join, FILTER keeps
    mappings whose constraint is true (errors filter out)."""
    if isinstance(p, (Cftp, Uccftp)):
        q = registry.get(p.query)
        if q is None:
            raise EvaluationError(f"unknown query name {p.query!r}")
        answers = run_query(g, q, kernel=kernel)
        hx, hy = q.head
        return _pair_mappings(((m[hx], m[hy]) for m in answers), p.x, p.y)
    if isinstance(p, TriplePattern):
        out = set()
        for triple in g.triples:
            binding: dict[str, int] = {}
            ok = True
            for var, value in zip((p.x, p.y, p.z), triple):
                if binding.setdefault(var, value) != value:
                    ok = False
                    break
            if ok:
                out.add(Mapping(binding))
        return out
    if isinstance(p, And):
        return _join_sets(
            evaluate_pattern(g, p.left, registry, kernel),
            evaluate_pattern(g, p.right, registry, kernel),
        )
    if isinstance(p, Union):
        return evaluate_pattern(g, p.left, registry, kernel) | evaluate_pattern(
            g, p.right, registry, kernel
        )
    if isinstance(p, Opt):
        left = evaluate_pattern(g, p.left, registry, kernel)
        right = evaluate_pattern(g, p.right, registry, kernel)
        out = set()
        for l in left:
            partners = [r for r in right if l.compatible(r)]
            if partners:
                out.update(l.merged(r) for r in partners)
            else:
                out.add(l)
        return out
    if isinstance(p, Filter):
        inner = evaluate_pattern(g, p.pattern, registry, kernel)
        return {m for m in inner if eval_constraint(p.constraint, m, g) is True}
    if isinstance(p, Select):
        inner = evaluate_pattern(g, p.pattern, registry, kernel)
        return {m.restrict(p.variables) for m in inner}
    raise TypeError(f"not a pattern: {p!r}")


# --- uccfSPARQL -> cfSPARQL --------------------------------------------------


def normalize_uccf(p, registry: dict[str, Uccfpq]):
    """Rewrite every union-of-conjunctive triple pattern into a Union tree of
    plain patterns; returns (pattern, registry-with-auxiliary-queries).

    Answer sets are preserved exactly: each disjunct becomes a projection of
    the join of its atoms, with non-head body variables renamed fresh.
    """
    registry = dict(registry)
    fresh_var = itertools.count()
    fresh_query = itertools.count()

    def aux_query(v: str, grammar) -> str:
        while True:
            name = f"_cfpq{next(fresh_query)}"
            if name not in registry:
                break
        registry[name] = Uccfpq(
            name=name,
            head=("?x", "?y"),
            bodies=((NonterminalAtom(v, "?x", "?y"),),),
            grammar=grammar,
        )
        return name

    def atoms_tree(body, grammar, rename) -> "Pattern":
        rename = dict(rename)

        def var_of(name: str) -> str:
            if name not in rename:
                rename[name] = f"?_v{next(fresh_var)}"
            return rename[name]

        parts = []
        for atom in body:
            if isinstance(atom, NonterminalAtom):
                parts.append(
                    Cftp(var_of(atom.x), aux_query(atom.v, grammar), var_of(atom.y))
                )
            else:
                parts.append(
                    TriplePattern(var_of(atom.x), var_of(atom.y), var_of(atom.z))
                )
        tree = parts[0]
        for part in parts[1:]:
            tree = And(tree, part)
        return tree

    def lower_disjunct(node: Uccftp, q: Uccfpq, body) -> "Pattern":
        hx, hy = q.head
        if hx == hy and node.x != node.y:
            # one query variable must surface as two pattern variables: join
            # two renamed copies and force them equal
            both = And(
                atoms_tree(body, q.grammar, {hx: node.x}),
                atoms_tree(body, q.grammar, {hx: node.y}),
            )
            return Select(
                frozenset({node.x, node.y}), Filter(both, Eq(node.x, node.y))
            )
        tree = atoms_tree(body, q.grammar, {hx: node.x, hy: node.y})
        if isinstance(tree, Cftp) and (tree.x, tree.y) == (node.x, node.y):
            return tree
        return Select(frozenset({node.x, node.y}), tree)

    def walk(node):
        if isinstance(node, Uccftp):
            q = registry.get(node.query)
            if q is None:
                raise EvaluationError(f"unknown query name {node.query!r}")
            branches = [lower_disjunct(node, q, body) for body in q.bodies]
            tree = branches[0]
            for branch in branches[1:]:
                tree = Union(tree, branch)
            return tree
        if isinstance(node, (And, Union, Opt)):
            return type(node)(walk(node.left), walk(node.right))
        if isinstance(node, Filter):
            return Filter(walk(node.pattern), node.constraint)
        if isinstance(node, Select):
            return Select(node.variables, walk(node.pattern))
        return node

    return walk(p), registry


# --- file format -------------------------------------------------------------


def _tokenize_sexp(text: str, source):
    tokens = []
    pos = 0
    while pos < len(text):
        ch = text[pos]
        if ch in " \t\r\n":
            pos += 1
        elif ch in "()":
            tokens.append(ch)
            pos += 1
        elif ch == "<":
            end = text.find(">", pos)
            if end < 0:
                raise ParseError("unterminated <...> constant", source=source)
            tokens.append(text[pos + 1 : end])
            pos = end + 1
        else:
            start = pos
            while pos < len(text) and text[pos] not in " \t\r\n()":
                pos += 1
            tokens.append(text[start:pos])
    return tokens


def _read_sexp(tokens, source):
    if not tokens:
        raise ParseError("unexpected end of pattern", source=source)
    tok = tokens.pop(0)
    if tok == "(":
        items = []
        while tokens and tokens[0] != ")":
            items.append(_read_sexp(tokens, source))
        if not tokens:
            raise ParseError("missing ')'", source=source)
        tokens.pop(0)
        return items
    if tok == ")":
        raise ParseError("unexpected ')'", source=source)
    return tok


def _build_constraint(sexp, source):
    if not isinstance(sexp, list) or not sexp:
        raise ParseError(f"bad constraint {sexp!r}", source=source)
    op = sexp[0]
    if op == "=" and len(sexp) == 3:
        return Eq(*(t if t.startswith("?") else Const(t) for t in sexp[1:]))
    if op == "bound" and len(sexp) == 2:
        return Bound(sexp[1])
    if op == "and" and len(sexp) == 3:
        return CAnd(_build_constraint(sexp[1], source), _build_constraint(sexp[2], source))
    if op == "or" and len(sexp) == 3:
        return COr(_build_constraint(sexp[1], source), _build_constraint(sexp[2], source))
    if op == "not" and len(sexp) == 2:
        return CNot(_build_constraint(sexp[1], source))
    raise ParseError(f"bad constraint head {op!r}", source=source)


def _build_pattern(sexp, registry, source):
    if not isinstance(sexp, list) or not sexp:
        raise ParseError(f"bad pattern {sexp!r}", source=source)
    head = sexp[0]
    if head in ("cftp", "uccftp") and len(sexp) == 4:
        x, name, y = sexp[1], sexp[2], sexp[3]
        if name not in registry:
            raise ParseError(f"pattern references unknown query {name!r}", source=source)
        return (Cftp if head == "cftp" else Uccftp)(x, name, y)
    if head == "tp" and len(sexp) == 4:
        return TriplePattern(sexp[1], sexp[2], sexp[3])
    if head in ("and", "union", "opt") and len(sexp) == 3:
        cls = {"and": And, "union": Union, "opt": Opt}[head]
        return cls(
            _build_pattern(sexp[1], registry, source),
            _build_pattern(sexp[2], registry, source),
        )
    if head == "filter" and len(sexp) == 3:
        return Filter(
            _build_pattern(sexp[2], registry, source),
            _build_constraint(sexp[1], source),
        )
    if head == "select" and len(sexp) == 3:
        if not isinstance(sexp[1], list):
            raise ParseError("select needs a (?x ?y ...) variable list", source=source)
        return Select(frozenset(sexp[1]), _build_pattern(sexp[2], registry, source))
    raise ParseError(f"bad pattern head {head!r}", source=source)


def parse_pattern_file(text: str, source=None):
    """``query NAME { <query file> }`` blocks followed by one s-expression
    pattern; returns (pattern, registry)."""
    from .queries import parse_query

    registry: dict[str, Uccfpq] = {}
    lines = text.splitlines()
    i = 0
    pattern_text: list[str] = []
    while i < len(lines):
        stripped = lines[i].strip()
        if stripped.startswith("query "):
            header = stripped[len("query "):].strip()
            if not header.endswith("{"):
                raise ParseError("expected '{' after query name", i + 1, source=source)
            name = header[:-1].strip()
            if not name:
                raise ParseError("query block needs a name", i + 1, source=source)
            depth = 1
            block: list[str] = []
            i += 1
            while i < len(lines):
                depth += lines[i].count("{") - lines[i].count("}")
                if depth <= 0:
                    break
                block.append(lines[i])
                i += 1
            if depth > 0:
                raise ParseError("unterminated query block", source=source)
            parsed = parse_query("\n".join(block), source=source)
            registry[name] = Uccfpq(name, parsed.head, parsed.bodies, parsed.grammar)
            i += 1
            continue
        if stripped and not stripped.startswith("#"):
            pattern_text.append(lines[i])
        i += 1
    if not pattern_text:
        raise ParseError("no pattern found", source=source)
    tokens = _tokenize_sexp("\n".join(pattern_text), source)
    sexp = _read_sexp(tokens, source)
    if tokens:
        raise ParseError("trailing input after pattern", source=source)
    return _build_pattern(sexp, registry, source), registry


def render_mappings(g: RdfGraph, mappings: set[Mapping]) -> tuple[list[str], list[list[str]]]:
    """(sorted variable header, rows with empty cells for unbound variables)."""
    variables = sorted({v for m in mappings for v in m.domain})
    lex = g.interner.lexical
    rows = sorted(
        [lex(m[v]) if v in m else "" for v in variables] for m in mappings
    )
    return variables, rows
