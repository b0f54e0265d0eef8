"""RDF data model: interned constants, triples, N-Triples ingestion.

Constants are interned to dense integer ids at load time; every relation
downstream (labeled graphs, solver facts, query answers) operates on ids and
only renders lexical forms at the output boundary.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field

from .errors import ParseError

log = logging.getLogger(__name__)


class Interner:
    """Bijective mapping between lexical forms and dense integer ids."""

    __slots__ = ("_ids", "_lex")

    def __init__(self):
        self._ids: dict[str, int] = {}
        self._lex: list[str] = []

    def intern(self, lexical: str) -> int:
        cid = self._ids.get(lexical)
        if cid is None:
            cid = len(self._lex)
            self._ids[lexical] = cid
            self._lex.append(lexical)
        return cid

    def id_of(self, lexical: str) -> int | None:
        return self._ids.get(lexical)

    def lexical(self, cid: int) -> str:
        return self._lex[cid]

    def __len__(self) -> int:
        return len(self._lex)

    def __contains__(self, lexical: str) -> bool:
        return lexical in self._ids


@dataclass(frozen=True)
class RdfGraph:
    """A finite set of subject-predicate-object triples over interned ids.

    Immutable once constructed; safe to share across concurrent readers.
    """

    interner: Interner
    triples: frozenset[tuple[int, int, int]]
    _voc: frozenset[int] = field(init=False, repr=False, compare=False)
    _digest: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        voc = set()
        for s, p, o in self.triples:
            voc.add(s)
            voc.add(p)
            voc.add(o)
        object.__setattr__(self, "_voc", frozenset(voc))
        h = hashlib.sha256()
        for line in sorted(self.lexical_triples()):
            h.update("\x1f".join(line).encode())
            h.update(b"\x1e")
        object.__setattr__(self, "_digest", h.hexdigest())

    @property
    def vocabulary(self) -> frozenset[int]:
        """voc(G): every constant occurring in any triple position."""
        return self._voc

    @property
    def digest(self) -> str:
        """Content digest; stable across triple/interning order."""
        return self._digest

    def __len__(self) -> int:
        return len(self.triples)

    def lexical(self, cid: int) -> str:
        return self.interner.lexical(cid)

    def lexical_triples(self) -> list[tuple[str, str, str]]:
        lex = self.interner.lexical
        return [(lex(s), lex(p), lex(o)) for s, p, o in self.triples]

    def with_triples(self, extra: list[tuple[str, str, str]]) -> "RdfGraph":
        """New graph with additional lexical triples (shares no state)."""
        merged = self.lexical_triples() + list(extra)
        return graph_from_lexical(merged)


def graph_from_lexical(triples) -> RdfGraph:
    """Build a graph from (subject, predicate, object) lexical tuples."""
    interner = Interner()
    out = set()
    for s, p, o in triples:
        out.add((interner.intern(s), interner.intern(p), interner.intern(o)))
    return RdfGraph(interner, frozenset(out))


def vocabulary(g: RdfGraph) -> frozenset[int]:
    return g.vocabulary


def _take_term(line: str, pos: int, lineno: int, source) -> tuple[str, int]:
    """Consume one N-Triples term starting at pos; returns (lexical, next pos)."""
    n = len(line)
    while pos < n and line[pos] in " \t":
        pos += 1
    if pos >= n:
        raise ParseError("expected a term, found end of line", lineno, pos + 1, source)
    ch = line[pos]
    if ch == "<":
        end = line.find(">", pos + 1)
        if end < 0:
            raise ParseError("unterminated IRI", lineno, pos + 1, source)
        return line[pos + 1 : end], end + 1
    if ch == '"':
        i = pos + 1
        while i < n:
            if line[i] == "\\":
                i += 2
                continue
            if line[i] == '"':
                break
            i += 1
        if i >= n:
            raise ParseError("unterminated literal", lineno, pos + 1, source)
        i += 1
        # optional @lang or ^^<datatype> suffix stays part of the lexical form
        while i < n and line[i] not in " \t.":
            if line[i] == "<":
                end = line.find(">", i)
                if end < 0:
                    raise ParseError("unterminated datatype IRI", lineno, i + 1, source)
                i = end + 1
            else:
                i += 1
        return line[pos:i], i
    if line.startswith("_:", pos):
        i = pos
        while i < n and line[i] not in " \t.":
            i += 1
        return line[pos:i], i
    raise ParseError(f"unexpected character {ch!r}", lineno, pos + 1, source)


def parse_ntriples(text: str, strict: bool = False, source=None) -> RdfGraph:
    """Parse a line-oriented N-Triples subset into a deduplicated graph.

    IRIs are stripped of their angle brackets before interning.  Literals and
    blank nodes are interned as opaque constants; blank nodes emit a warning
    (or raise, under ``strict``) because the data model is IRI-only.
    """
    interner = Interner()
    triples = set()
    blanks = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        terms = []
        pos = 0
        for _ in range(3):
            lex, pos = _take_term(line, pos, lineno, source)
            if lex.startswith("_:"):
                blanks += 1
                if strict:
                    raise ParseError("blank node not allowed in strict mode", lineno, source=source)
            terms.append(lex)
        rest = line[pos:].strip()
        if rest != ".":
            raise ParseError(
                "expected terminating '.' after three terms", lineno, pos + 1, source
            )
        triples.add(tuple(interner.intern(t) for t in terms))
    if blanks:
        log.warning("interned %d blank node occurrence(s) as opaque constants", blanks)
    return RdfGraph(interner, frozenset(triples))


def _render_term(lexical: str) -> str:
    if lexical.startswith('"') or lexical.startswith("_:"):
        return lexical
    return f"<{lexical}>"


def serialize_ntriples(g: RdfGraph) -> str:
    """One triple per line, sorted, in the same subset parse_ntriples reads."""
    lines = [
        f"{_render_term(s)} {_render_term(p)} {_render_term(o)} ."
        for s, p, o in sorted(g.lexical_triples())
    ]
    return "\n".join(lines) + ("\n" if lines else "")
