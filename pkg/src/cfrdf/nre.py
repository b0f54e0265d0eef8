"""Nested regular expressions: parsing, direct evaluation, and compilation
onto the context-free core.

Direct evaluation is the reference semantics.  Compilation lifts every
maximal nesting into a stratum that materializes its inner relation as
synthetic edges, leaving a plain regular expression that becomes a grammar;
executing the plan must agree with direct evaluation on every graph.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .axis import AXES, SYNTH_AXIS, AxisLabel, LabeledGraph, convert
from .errors import ParseError
from .grammar import Cfg, normalize
from .queries import NonterminalAtom, Uccfpq, evaluate_uccfpq
from .rdf import RdfGraph
from .recognizer import solve


@dataclass(frozen=True)
class Axis:
    label: AxisLabel  # bare axis, no qualifier


@dataclass(frozen=True)
class AxisConst:
    label: AxisLabel  # qualified axis


@dataclass(frozen=True)
class Nest:
    axis: str
    inverse: bool
    inner: "Nre"


@dataclass(frozen=True)
class Seq:
    left: "Nre"
    right: "Nre"


@dataclass(frozen=True)
class Alt:
    left: "Nre"
    right: "Nre"


@dataclass(frozen=True)
class Star:
    inner: "Nre"


Nre = "Axis | AxisConst | Nest | Seq | Alt | Star"

FRAGMENT_BASIC = "nre0"
FRAGMENT_NESTED = "nre0N"
FRAGMENT_UNION = "nre0U"
FRAGMENT_FULL = "full"


# --- parsing -----------------------------------------------------------------

_QUAL_STOP = set(" \t/|*()[]<>")


class _Scanner:
    def __init__(self, text: str, source=None):
        self.text = text
        self.pos = 0
        self.source = source

    def error(self, message):
        raise ParseError(message, column=self.pos + 1, source=self.source)

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch):
        if self.peek() != ch:
            self.error(f"expected {ch!r}")
        self.pos += 1


def _parse_qualifier(sc: _Scanner) -> str:
    if sc.peek() == "<":
        sc.take("<")
        end = sc.text.find(">", sc.pos)
        if end < 0:
            sc.error("unterminated <...> qualifier")
        qual = sc.text[sc.pos:end]
        sc.pos = end + 1
        return qual
    start = sc.pos
    while sc.pos < len(sc.text) and sc.text[sc.pos] not in _QUAL_STOP:
        sc.pos += 1
    if sc.pos == start:
        sc.error("empty qualifier after '::'")
    return sc.text[start:sc.pos]


def _parse_primary(sc: _Scanner):
    ch = sc.peek()
    if ch == "(":
        sc.take("(")
        inner = _parse_alt(sc)
        sc.take(")")
        return inner
    start = sc.pos
    while sc.pos < len(sc.text) and (sc.text[sc.pos].isalnum() or sc.text[sc.pos] == "-"):
        sc.pos += 1
    name = sc.text[start:sc.pos]
    inverse = False
    if name.endswith("-1"):
        inverse = True
        name = name[:-2]
    if name not in AXES:
        sc.pos = start
        sc.error(f"expected an axis name, got {name!r}")
    if name == "self" and inverse:
        sc.pos = start
        sc.error("self has no inverse form")
    if sc.text.startswith("::", sc.pos):
        sc.pos += 2
        if sc.pos < len(sc.text) and sc.text[sc.pos] == "[":
            sc.pos += 1
            inner = _parse_alt(sc)
            sc.take("]")
            return Nest(name, inverse, inner)
        return AxisConst(AxisLabel(name, inverse, _parse_qualifier(sc)))
    return Axis(AxisLabel(name, inverse))


def _parse_star(sc: _Scanner):
    node = _parse_primary(sc)
    while sc.peek() == "*":
        sc.take("*")
        node = Star(node)
    return node


def _parse_seq(sc: _Scanner):
    node = _parse_star(sc)
    while sc.peek() == "/":
        sc.take("/")
        node = Seq(node, _parse_star(sc))
    return node


def _parse_alt(sc: _Scanner):
    node = _parse_seq(sc)
    while sc.peek() == "|":
        sc.take("|")
        node = Alt(node, _parse_seq(sc))
    return node


def parse_nre(text: str, source=None):
    """Parse the surface syntax; precedence * over / over |."""
    sc = _Scanner(text, source)
    node = _parse_alt(sc)
    sc.skip_ws()
    if sc.pos != len(sc.text):
        sc.error("trailing input after expression")
    return node


# --- direct evaluation -------------------------------------------------------


def _compose(r1, r2):
    by_src: dict[int, list[int]] = {}
    for a, b in r2:
        by_src.setdefault(a, []).append(b)
    return {(a, c) for a, b in r1 for c in by_src.get(b, ())}


def _star(rel, nodes):
    adj: dict[int, list[int]] = {}
    for a, b in rel:
        adj.setdefault(a, []).append(b)
    out = {(a, a) for a in nodes}
    for start in adj:
        seen = set()
        stack = list(adj[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            stack.extend(adj.get(node, ()))
        out.update((start, b) for b in seen)
    return out


def eval_nre(g: RdfGraph, e, lg: LabeledGraph | None = None) -> set:
    """Reference semantics over the converted graph; returns id pairs."""
    if lg is None:
        lg = convert(g)
    return _eval(e, lg)


def _eval(e, lg: LabeledGraph) -> set:
    if isinstance(e, (Axis, AxisConst)):
        return set(lg.pairs(e.label))
    if isinstance(e, Seq):
        return _compose(_eval(e.left, lg), _eval(e.right, lg))
    if isinstance(e, Alt):
        return _eval(e.left, lg) | _eval(e.right, lg)
    if isinstance(e, Star):
        return _star(_eval(e.inner, lg), lg.nodes)
    if isinstance(e, Nest):
        dom = {a for a, _ in _eval(e.inner, lg)}
        return {
            (a, b)
            for a, qid, b in lg.qualified_edges(e.axis, e.inverse)
            if qid in dom
        }
    raise TypeError(f"not an nre node: {e!r}")


def classify_nre(e) -> str:
    """Least fragment containing the expression."""
    has_alt = has_nest = False
    stack = [e]
    while stack:
        node = stack.pop()
        if isinstance(node, Alt):
            has_alt = True
            stack += [node.left, node.right]
        elif isinstance(node, Seq):
            stack += [node.left, node.right]
        elif isinstance(node, Star):
            stack.append(node.inner)
        elif isinstance(node, Nest):
            has_nest = True
            stack.append(node.inner)
    if has_alt and has_nest:
        return FRAGMENT_FULL
    if has_nest:
        return FRAGMENT_NESTED
    if has_alt:
        return FRAGMENT_UNION
    return FRAGMENT_BASIC


# --- compilation -------------------------------------------------------------


@dataclass(frozen=True)
class Stratum:
    label: AxisLabel  # synthetic edge label this stratum materializes
    axis: str
    inverse: bool
    inner: "QueryPlan"


@dataclass(frozen=True)
class QueryPlan:
    strata: tuple[Stratum, ...]
    top: Uccfpq
    root: str


def _lift_nests(e, counter, strata):
    if isinstance(e, (Axis, AxisConst)):
        return e
    if isinstance(e, Seq):
        return Seq(_lift_nests(e.left, counter, strata), _lift_nests(e.right, counter, strata))
    if isinstance(e, Alt):
        return Alt(_lift_nests(e.left, counter, strata), _lift_nests(e.right, counter, strata))
    if isinstance(e, Star):
        return Star(_lift_nests(e.inner, counter, strata))
    label = AxisLabel(SYNTH_AXIS, False, f"#{next(counter)}")
    strata.append(Stratum(label, e.axis, e.inverse, _compile(e.inner, counter)))
    return AxisConst(label)


def _regex_to_rules(e, counter, rules) -> str:
    name = f"N{next(counter)}"
    if isinstance(e, (Axis, AxisConst)):
        rules.append((name, (e.label,)))
    elif isinstance(e, Seq):
        left = _regex_to_rules(e.left, counter, rules)
        right = _regex_to_rules(e.right, counter, rules)
        rules.append((name, (left, right)))
    elif isinstance(e, Alt):
        left = _regex_to_rules(e.left, counter, rules)
        right = _regex_to_rules(e.right, counter, rules)
        rules.append((name, (left,)))
        rules.append((name, (right,)))
    elif isinstance(e, Star):
        inner = _regex_to_rules(e.inner, counter, rules)
        rules.append((name, ()))
        rules.append((name, (inner, name)))
    else:
        raise TypeError(f"nest survived lifting: {e!r}")
    return name


def _compile(e, counter) -> QueryPlan:
    strata: list[Stratum] = []
    residue = _lift_nests(e, counter, strata)
    rules: list = []
    root = _regex_to_rules(residue, counter, rules)
    grammar = Cfg(frozenset(h for h, _ in rules), tuple(rules))
    top = Uccfpq(
        name="plan",
        head=("?x", "?y"),
        bodies=((NonterminalAtom(root, "?x", "?y"),),),
        grammar=grammar,
    )
    return QueryPlan(tuple(strata), top, root)


def compile_nre(e) -> QueryPlan:
    """Stratified plan whose execution equals direct evaluation."""
    return _compile(e, itertools.count())


def _execute(plan: QueryPlan, aug: LabeledGraph, kernel):
    for stratum in plan.strata:
        inner_pairs, aug = _execute(stratum.inner, aug, kernel)
        dom = {a for a, _ in inner_pairs}
        pairs = {
            (a, b)
            for a, qid, b in aug.qualified_edges(stratum.axis, stratum.inverse)
            if qid in dom
        }
        aug = aug.extended({stratum.label: pairs})
    rel = solve(aug, normalize(plan.top.grammar), kernel=kernel)
    answers = evaluate_uccfpq(aug.graph, rel, plan.top)
    x, y = plan.top.head
    return {(m[x], m[y]) for m in answers}, aug


def execute_plan(g: RdfGraph, plan: QueryPlan, kernel: str | None = None) -> set:
    """Materialize strata innermost-first, then solve the top query."""
    pairs, _ = _execute(plan, convert(g), kernel)
    return pairs
