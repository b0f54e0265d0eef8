import random
from pathlib import Path

import pytest

from cfrdf.axis import AxisLabel, convert
from cfrdf.errors import ParseError
from cfrdf.nre import (
    Alt,
    Axis,
    AxisConst,
    Nest,
    Seq,
    Star,
    classify_nre,
    compile_nre,
    eval_nre,
    execute_plan,
    parse_nre,
)
from cfrdf.queries import NonterminalAtom
from cfrdf.rdf import graph_from_lexical, parse_ntriples

from generators import random_graph, random_nre

DATA = Path(__file__).parent / "data"


def lex_pairs(g, pairs):
    lex = g.interner.lexical
    return {(lex(a), lex(b)) for a, b in pairs}


# --- parsing ---


def test_parse_seq():
    e = parse_nre("next::a/next::b")
    assert e == Seq(
        AxisConst(AxisLabel("next", False, "a")),
        AxisConst(AxisLabel("next", False, "b")),
    )


def test_parse_star_of_nest():
    e = parse_nre("(next::[edge::c])*")
    assert e == Star(Nest("next", False, AxisConst(AxisLabel("edge", False, "c"))))


def test_parse_four_step_sequence():
    e = parse_nre("next::locatedIn/next-1::linkedTo/next::linkedTo/next-1::locatedIn")
    count = 0
    node = e
    while isinstance(node, Seq):
        count += 1
        node = node.left
    assert count == 3  # left-leaning chain of 4 elements


def test_parse_precedence():
    # * binds tighter than /, / tighter than |
    e = parse_nre("next/next*|self")
    assert e == Alt(
        Seq(Axis(AxisLabel("next")), Star(Axis(AxisLabel("next")))),
        Axis(AxisLabel("self")),
    )


def test_parse_bracketed_iri_qualifier():
    e = parse_nre("next::<http://x.org/a/b>/self")
    assert e.left == AxisConst(AxisLabel("next", False, "http://x.org/a/b"))


@pytest.mark.parametrize(
    "text", ["", "next/", "(next", "next::[self", "bogus::a", "self-1", "next::"]
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_nre(text)


# --- direct evaluation ---


def test_eval_self_diagonal():
    g = parse_ntriples("<a> <p> <b> .")
    assert lex_pairs(g, eval_nre(g, parse_nre("self"))) == {
        ("a", "a"),
        ("p", "p"),
        ("b", "b"),
    }


def test_eval_star_of_empty_is_diagonal():
    g = parse_ntriples("<a> <p> <b> .")
    assert lex_pairs(g, eval_nre(g, parse_nre("next::missing*"))) == {
        ("a", "a"),
        ("p", "p"),
        ("b", "b"),
    }


def test_eval_nested_qualifier():
    g = graph_from_lexical([("a", "p", "b"), ("p", "q", "c")])
    assert lex_pairs(g, eval_nre(g, parse_nre("next::[edge::c]"))) == {("a", "b")}


def test_eval_alt_commutes():
    g = graph_from_lexical([("a", "p", "b"), ("b", "q", "c")])
    one = eval_nre(g, parse_nre("next::p|edge"))
    other = eval_nre(g, parse_nre("edge|next::p"))
    assert one == other


@pytest.mark.parametrize("seed", range(6))
def test_eval_star_contains_diagonal(seed):
    rng = random.Random(seed + 9000)
    g = random_graph(rng, max_constants=6, max_triples=6)
    quals = sorted(g.interner.lexical(c) for c in g.vocabulary)
    e = Star(random_nre(rng, quals, depth=1))
    pairs = eval_nre(g, e)
    assert {(c, c) for c in g.vocabulary} <= pairs


# --- classification ---


@pytest.mark.parametrize(
    "text,tag",
    [
        ("next::a*", "nre0"),
        ("next::a/next::b", "nre0"),
        ("next::[self]", "nre0N"),
        ("next::a|next::b", "nre0U"),
        ("next::a|next::[self]", "full"),
    ],
)
def test_classify(text, tag):
    assert classify_nre(parse_nre(text)) == tag


# --- compilation ---


def test_compile_basic_has_no_strata():
    plan = compile_nre(parse_nre("next::a/next::b*"))
    assert plan.strata == ()
    assert plan.top.bodies == ((NonterminalAtom(plan.root, "?x", "?y"),),)


def _alt_derived_rules(grammar):
    # Alt is the only constructor that emits unit rules (v -> u alternatives)
    return [
        (h, b)
        for h, b in grammar.rules
        if len(b) == 1 and isinstance(b[0], str)
    ]


def test_compile_union_free_has_no_alt_rules():
    plan = compile_nre(parse_nre("next::[self]/next::a"))
    assert _alt_derived_rules(plan.top.grammar) == []


def test_compile_union_fragment_has_no_strata():
    plan = compile_nre(parse_nre("(next::a|next::b)*"))
    assert plan.strata == ()


def test_execute_self_plan():
    g = parse_ntriples("<a> <p> <b> .")
    plan = compile_nre(parse_nre("self"))
    assert lex_pairs(g, execute_plan(g, plan)) == {("a", "a"), ("p", "p"), ("b", "b")}


def test_execute_nested_self():
    g = parse_ntriples("<a> <p> <b> .")
    plan = compile_nre(parse_nre("next::[self]"))
    assert len(plan.strata) == 1
    assert lex_pairs(g, execute_plan(g, plan)) == {("a", "b")}


def test_execute_matches_eval_on_bio(bio_graph):
    e = parse_nre(
        "next::bio:locatedIn/(next-1::bio:linkedTo/next::bio:linkedTo)/next-1::bio:locatedIn"
    )
    direct = eval_nre(bio_graph, e)
    compiled = execute_plan(bio_graph, compile_nre(e))
    assert direct == compiled
    assert ("bio:GeneB", "bio:GeneC") in lex_pairs(bio_graph, direct)


def test_nested_star_roundtrip():
    g = graph_from_lexical([("a", "p", "b"), ("p", "q", "c"), ("b", "p", "c")])
    e = parse_nre("(next::[edge::c])*")
    assert eval_nre(g, e) == execute_plan(g, compile_nre(e))


@pytest.mark.parametrize("seed", range(25))
def test_compile_equivalence_random(seed):
    rng = random.Random(seed + 9500)
    g = random_graph(rng, max_constants=6, max_triples=8)
    quals = sorted(g.interner.lexical(c) for c in g.vocabulary) + ["missing"]
    e = random_nre(rng, quals, depth=3)
    assert eval_nre(g, e) == execute_plan(g, compile_nre(e), kernel="numpy")


@pytest.mark.parametrize("seed", range(12))
def test_fragment_plan_shapes(seed):
    rng = random.Random(seed + 9700)
    g = random_graph(rng, max_constants=5, max_triples=5)
    quals = sorted(g.interner.lexical(c) for c in g.vocabulary)
    e = random_nre(rng, quals, depth=2)
    plan = compile_nre(e)
    tag = classify_nre(e)
    assert len(plan.top.bodies) == 1 and len(plan.top.bodies[0]) == 1
    if tag in ("nre0", "nre0U"):
        assert plan.strata == ()
    if tag in ("nre0", "nre0N"):
        assert _alt_derived_rules(plan.top.grammar) == []
