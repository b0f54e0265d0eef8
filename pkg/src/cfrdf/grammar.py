"""Context-free grammars over axis-label terminals.

Grammars have no distinguished start symbol: every nonterminal names a
language.  Norm form restricts rule bodies to two nonterminals, a single
terminal, or epsilon, which is what the recognizer consumes.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

from .axis import AxisLabel, parse_axis_label
from .errors import ParseError

NONTERM_RE = re.compile(r"[A-Z][A-Za-z0-9_]*\Z")

Symbol = "str | AxisLabel"  # nonterminal name or terminal label
Body = tuple


def is_nonterminal(sym) -> bool:
    return isinstance(sym, str)


@dataclass(frozen=True)
class Cfg:
    """Rules are (head, body) with bodies over nonterminal names and labels.

    ``nonterminals`` may include names with no rules; they generate the empty
    language, which is legal.  Rule order is kept for deterministic output but
    carries no meaning.
    """

    nonterminals: frozenset[str]
    rules: tuple[tuple[str, Body], ...]
    _digest: str = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        seen = set()
        deduped = []
        for head, body in self.rules:
            key = (head, body)
            if key not in seen:
                seen.add(key)
                deduped.append(key)
        object.__setattr__(self, "rules", tuple(deduped))
        h = hashlib.sha256()
        for name in sorted(self.nonterminals):
            h.update(b"n:" + name.encode() + b"\x1e")
        for line in sorted(render_rule(head, body) for head, body in self.rules):
            h.update(line.encode() + b"\x1e")
        object.__setattr__(self, "_digest", h.hexdigest())

    @property
    def terminals(self) -> frozenset[AxisLabel]:
        return frozenset(
            sym for _, body in self.rules for sym in body if isinstance(sym, AxisLabel)
        )

    @property
    def digest(self) -> str:
        return self._digest

    def rules_for(self, head: str):
        return [body for h, body in self.rules if h == head]


def render_rule(head: str, body: Body) -> str:
    if not body:
        return f"{head} -> eps"
    parts = [sym if is_nonterminal(sym) else sym.render() for sym in body]
    return f"{head} -> " + " ".join(parts)


def render_grammar(g: Cfg) -> str:
    return "\n".join(render_rule(h, b) for h, b in g.rules) + "\n"


def parse_grammar(text: str, source=None) -> Cfg:
    """Parse the line-oriented grammar format.

    ``Head -> body | body``; bodies are whitespace-separated symbols;
    uppercase-starting identifiers are nonterminals, everything else must be
    an axis token; ``eps`` (alone) is the empty body; ``#`` lines are comments.
    """
    rules = []
    nonterminals = set()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        head_part, sep, rest = line.partition("->")
        if not sep:
            raise ParseError("expected '->'", lineno, source=source)
        head = head_part.strip()
        if not NONTERM_RE.match(head):
            raise ParseError(f"invalid nonterminal name {head!r}", lineno, 1, source)
        nonterminals.add(head)
        for alt in rest.split("|"):
            tokens = alt.split()
            if not tokens:
                raise ParseError("empty alternative (use 'eps')", lineno, source=source)
            if tokens == ["eps"]:
                rules.append((head, ()))
                continue
            body = []
            for tok in tokens:
                if tok == "eps":
                    raise ParseError(
                        "'eps' must stand alone as a body", lineno,
                        raw.index(tok) + 1, source,
                    )
                if NONTERM_RE.match(tok):
                    nonterminals.add(tok)
                    body.append(tok)
                else:
                    col = raw.index(tok) + 1
                    body.append(parse_axis_label(tok, lineno, col, source))
            rules.append((head, tuple(body)))
    return Cfg(frozenset(nonterminals), tuple(rules))


def is_norm_form(g: Cfg) -> bool:
    for _, body in g.rules:
        if len(body) == 0:
            continue
        if len(body) == 1 and isinstance(body[0], AxisLabel):
            continue
        if len(body) == 2 and is_nonterminal(body[0]) and is_nonterminal(body[1]):
            continue
        return False
    return True


def _fresh(base: str, used: set[str]) -> str:
    name = base
    while name in used:
        name += "_"
    used.add(name)
    return name


def normalize(g: Cfg) -> Cfg:
    """Norm-form construction preserving L(G_v) for every original v.

    TERM lifts terminals out of bodies of length >= 2, BIN binarizes, and unit
    rules v -> u are padded to v -> u E with a shared E -> eps (concatenating
    {eps} is the identity), which keeps the output linear in the input size.
    """
    used = set(g.nonterminals)
    term_names: dict[AxisLabel, str] = {}
    out: list[tuple[str, Body]] = []
    term_rules: list[tuple[str, Body]] = []

    def term_nt(label: AxisLabel) -> str:
        name = term_names.get(label)
        if name is None:
            name = _fresh(f"T{len(term_names)}", used)
            term_names[label] = name
            term_rules.append((name, (label,)))
        return name

    bin_count = 0
    for head, body in g.rules:
        if len(body) < 2:
            out.append((head, body))
            continue
        syms = [term_nt(s) if isinstance(s, AxisLabel) else s for s in body]
        cur = head
        while len(syms) > 2:
            link = _fresh(f"B{bin_count}", used)
            bin_count += 1
            out.append((cur, (syms[0], link)))
            cur = link
            syms = syms[1:]
        out.append((cur, tuple(syms)))

    pad = None
    final: list[tuple[str, Body]] = []
    for head, body in out:
        if len(body) == 1 and is_nonterminal(body[0]):
            if pad is None:
                pad = _fresh("E", used)
            final.append((head, (body[0], pad)))
        else:
            final.append((head, body))
    final.extend(term_rules)
    if pad is not None:
        final.append((pad, ()))
    return Cfg(frozenset(used), tuple(final))


def nullable_set(g: Cfg) -> frozenset[str]:
    """Nonterminals that derive the empty string."""
    nullable = set()
    changed = True
    while changed:
        changed = False
        for head, body in g.rules:
            if head in nullable:
                continue
            if all(is_nonterminal(s) and s in nullable for s in body):
                nullable.add(head)
                changed = True
    return frozenset(nullable)


def generate_strings(g: Cfg, v: str, max_len: int) -> set[tuple]:
    """Exactly the terminal strings of length <= max_len derivable from v.

    Kleene iteration over per-nonterminal string sets: every parse-tree yield
    of length <= max_len has all subtree yields <= max_len, so the bounded
    fixpoint is complete.  Terminates regardless of epsilon cycles, unlike a
    naive sentential-form search.  Sets are bucketed by length so that
    concatenation only pairs compatible lengths.
    """
    if max_len < 0:
        raise ValueError("max_len must be >= 0")
    buckets: dict[str, dict[int, set[tuple]]] = {nt: {} for nt in g.nonterminals}
    changed = True
    while changed:
        changed = False
        for head, body in g.rules:
            acc: dict[int, set[tuple]] = {0: {()}}
            for sym in body:
                nxt: dict[int, set[tuple]] = {}
                if isinstance(sym, AxisLabel):
                    for length, strings in acc.items():
                        if length < max_len:
                            nxt.setdefault(length + 1, set()).update(
                                s + (sym,) for s in strings
                            )
                else:
                    for l1, left in acc.items():
                        for l2, right in buckets.get(sym, {}).items():
                            if l1 + l2 > max_len:
                                continue
                            nxt.setdefault(l1 + l2, set()).update(
                                a + b for a in left for b in right
                            )
                acc = nxt
                if not acc:
                    break
            target = buckets[head]
            for length, strings in acc.items():
                cell = target.setdefault(length, set())
                before = len(cell)
                cell |= strings
                if len(cell) != before:
                    changed = True
    out: set[tuple] = set()
    for strings in buckets.get(v, {}).values():
        out |= strings
    return out
