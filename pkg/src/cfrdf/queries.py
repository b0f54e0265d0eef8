"""Conjunctive context-free path queries and their union closure.

A query body conjoins nonterminal atoms V(?x,?y), whose rows come from the
solved context-free relation, with raw triple patterns (?x,?y,?z) over the
graph itself; answers are mappings projected onto the two head variables.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ContractError, EvaluationError, ParseError
from .grammar import NONTERM_RE, Cfg, normalize, parse_grammar
from .rdf import RdfGraph
from .recognizer import CfRelation, relation_of, solve_cached


class Mapping:
    """Immutable partial assignment of variables to constant ids."""

    __slots__ = ("_items",)

    def __init__(self, bindings: dict[str, int]):
        self._items = tuple(sorted(bindings.items()))

    @property
    def bindings(self) -> dict[str, int]:
        return dict(self._items)

    @property
    def domain(self) -> tuple[str, ...]:
        return tuple(var for var, _ in self._items)

    def __getitem__(self, var: str) -> int:
        for name, value in self._items:
            if name == var:
                return value
        raise KeyError(var)

    def __contains__(self, var: str) -> bool:
        return any(name == var for name, _ in self._items)

    def get(self, var: str, default=None):
        for name, value in self._items:
            if name == var:
                return value
        return default

    def compatible(self, other: "Mapping") -> bool:
        mine = dict(self._items)
        return all(mine.get(var, value) == value for var, value in other._items)

    def merged(self, other: "Mapping") -> "Mapping":
        merged = dict(self._items)
        merged.update(other._items)
        return Mapping(merged)

    def restrict(self, variables) -> "Mapping":
        return Mapping({v: val for v, val in self._items if v in variables})

    def __eq__(self, other):
        return isinstance(other, Mapping) and self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __repr__(self):
        inner = ", ".join(f"{v}={val}" for v, val in self._items)
        return f"Mapping({inner})"


@dataclass(frozen=True)
class TriplePatternAtom:
    x: str
    y: str
    z: str

    @property
    def variables(self):
        return (self.x, self.y, self.z)


@dataclass(frozen=True)
class NonterminalAtom:
    v: str
    x: str
    y: str

    @property
    def variables(self):
        return (self.x, self.y)


Atom = "TriplePatternAtom | NonterminalAtom"


@dataclass(frozen=True)
class Ccfpq:
    head: tuple[str, str]
    body: tuple
    grammar: Cfg


@dataclass(frozen=True)
class Uccfpq:
    name: str
    head: tuple[str, str]
    bodies: tuple[tuple, ...]
    grammar: Cfg

    def disjuncts(self):
        return [Ccfpq(self.head, body, self.grammar) for body in self.bodies]


_VAR_RE = re.compile(r"\?[A-Za-z_][A-Za-z0-9_]*\Z")
_HEAD_RE = re.compile(
    r"(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*\(\s*(?P<x>\?[^\s,()]+)\s*,\s*(?P<y>\?[^\s,()]+)\s*\)\s*:=\s*(?P<body>.+)\Z"
)
_NT_ATOM_RE = re.compile(r"(?P<v>[A-Z][A-Za-z0-9_]*)\s*\(\s*(?P<x>[^\s,()]+)\s*,\s*(?P<y>[^\s,()]+)\s*\)\Z")
_TP_ATOM_RE = re.compile(r"\(\s*(?P<x>[^\s,()]+)\s*,\s*(?P<y>[^\s,()]+)\s*,\s*(?P<z>[^\s,()]+)\s*\)\Z")


def _check_var(tok: str, lineno, source) -> str:
    if not _VAR_RE.match(tok):
        raise ParseError(f"expected a ?variable, got {tok!r}", lineno, source=source)
    return tok


def _parse_atom(text: str, grammar: Cfg, lineno, source):
    text = text.strip()
    m = _NT_ATOM_RE.match(text)
    if m:
        v = m.group("v")
        if v not in grammar.nonterminals:
            raise ParseError(f"unknown nonterminal {v!r}", lineno, source=source)
        return NonterminalAtom(
            v,
            _check_var(m.group("x"), lineno, source),
            _check_var(m.group("y"), lineno, source),
        )
    m = _TP_ATOM_RE.match(text)
    if m:
        return TriplePatternAtom(
            *(_check_var(m.group(k), lineno, source) for k in ("x", "y", "z"))
        )
    raise ParseError(f"cannot parse atom {text!r}", lineno, source=source)


def parse_query(text: str, source=None) -> Uccfpq:
    """Parse a query file: optional ``grammar { ... }`` block, then the rule.

    ``name(?x,?y) := atom & atom | atom`` with ``V(?x,?y)`` nonterminal atoms
    and ``(?x,?y,?z)`` triple patterns.
    """
    grammar_lines: list[str] = []
    query_line = None
    query_lineno = 0
    in_grammar = False
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if in_grammar:
            if line == "}":
                in_grammar = False
            else:
                grammar_lines.append(raw)
            continue
        if line.startswith("grammar"):
            rest = line[len("grammar"):].strip()
            if rest != "{":
                raise ParseError("expected '{' after 'grammar'", lineno, source=source)
            in_grammar = True
            continue
        if query_line is not None:
            raise ParseError("multiple query rules in one file", lineno, source=source)
        query_line = line
        query_lineno = lineno
    if in_grammar:
        raise ParseError("unterminated grammar block", source=source)
    if query_line is None:
        raise ParseError("no query rule found", source=source)

    grammar = parse_grammar("\n".join(grammar_lines), source=source)
    m = _HEAD_RE.match(query_line)
    if not m:
        raise ParseError("query must look like q(?x,?y) := ...", query_lineno, source=source)
    head = (
        _check_var(m.group("x"), query_lineno, source),
        _check_var(m.group("y"), query_lineno, source),
    )
    bodies = []
    for disjunct in m.group("body").split("|"):
        atoms = tuple(
            _parse_atom(part, grammar, query_lineno, source)
            for part in disjunct.split("&")
        )
        seen = {var for atom in atoms for var in atom.variables}
        for hv in head:
            if hv not in seen:
                raise ParseError(
                    f"head variable {hv} does not occur in the body",
                    query_lineno,
                    source=source,
                )
        bodies.append(atoms)
    return Uccfpq(m.group("name"), head, tuple(bodies), grammar)


def _atom_rows(g: RdfGraph, rel: CfRelation, atom) -> list[Mapping]:
    rows = []
    if isinstance(atom, TriplePatternAtom):
        variables = atom.variables
        for triple in g.triples:
            binding: dict[str, int] = {}
            ok = True
            for var, value in zip(variables, triple):
                if binding.setdefault(var, value) != value:
                    ok = False
                    break
            if ok:
                rows.append(Mapping(binding))
    else:
        for a, b in relation_of(rel, atom.v):
            if atom.x == atom.y:
                if a == b:
                    rows.append(Mapping({atom.x: a}))
            else:
                rows.append(Mapping({atom.x: a, atom.y: b}))
    return rows


def _join(left: list[Mapping], right: list[Mapping]) -> list[Mapping]:
    if not left or not right:
        return []
    shared = set(left[0].domain) & set(right[0].domain)
    key = tuple(sorted(shared))
    index: dict[tuple, list[Mapping]] = {}
    for m in right:
        index.setdefault(tuple(m[v] for v in key), []).append(m)
    out = []
    for m in left:
        for partner in index.get(tuple(m[v] for v in key), ()):
            out.append(m.merged(partner))
    return out


def _check_solved_against(g: RdfGraph, rel: CfRelation, grammar: Cfg):
    if rel.graph_digest != g.digest or rel.grammar_digest != normalize(grammar).digest:
        raise ContractError(
            "relation was not solved against this graph/grammar pair"
        )


def evaluate_ccfpq(g: RdfGraph, rel: CfRelation, q: Ccfpq) -> set[Mapping]:
    """Join the atom rows (smallest first) and project onto the head."""
    _check_solved_against(g, rel, q.grammar)
    rows = [_atom_rows(g, rel, atom) for atom in q.body]
    rows.sort(key=len)
    acc = rows[0]
    for nxt in rows[1:]:
        acc = _join(acc, nxt)
        if not acc:
            break
    return {m.restrict(q.head) for m in acc}


def evaluate_uccfpq(g: RdfGraph, rel: CfRelation, q: Uccfpq) -> set[Mapping]:
    out: set[Mapping] = set()
    for disjunct in q.disjuncts():
        out |= evaluate_ccfpq(g, rel, disjunct)
    return out


def run_query(g: RdfGraph, q: Uccfpq, kernel: str | None = None) -> set[Mapping]:
    """Solve the query's grammar over the graph (cached) and evaluate."""
    rel, _ = solve_cached(g, q.grammar, kernel=kernel)
    return evaluate_uccfpq(g, rel, q)


def answer_pairs(g: RdfGraph, answers: set[Mapping], head) -> list[tuple[str, str]]:
    """Render mapping answers as sorted lexical pairs."""
    lex = g.interner.lexical
    return sorted((lex(m[head[0]]), lex(m[head[1]])) for m in answers)
