import random
from pathlib import Path

import pytest

from cfrdf.axis import convert
from cfrdf.errors import EvaluationError, ParseError
from cfrdf.queries import Mapping
from cfrdf.rdf import graph_from_lexical, parse_ntriples
from cfrdf.sparql import (
    And,
    Bound,
    CAnd,
    Cftp,
    CNot,
    COr,
    Const,
    Eq,
    Filter,
    Opt,
    Select,
    TriplePattern,
    Uccftp,
    Union,
    eval_constraint,
    evaluate_pattern,
    normalize_uccf,
    parse_pattern_file,
    render_mappings,
)

from generators import random_graph, random_pattern, random_registry

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="module")
def bio_registry(bio_graph):
    _, registry = parse_pattern_file((DATA / "bio_pattern.sparql").read_text())
    return registry


def ids(g, **lexicals):
    return {k: g.interner.id_of(v) for k, v in lexicals.items()}


def test_triple_pattern_single_mapping():
    g = parse_ntriples("<a> <p> <b> .")
    out = evaluate_pattern(g, TriplePattern("?x", "?y", "?z"), {})
    want = Mapping(ids(g, **{"?x": "a", "?y": "p", "?z": "b"}))
    assert out == {want}


def test_triple_pattern_repeated_var():
    g = graph_from_lexical([("a", "p", "a"), ("a", "p", "b")])
    out = evaluate_pattern(g, TriplePattern("?x", "?p", "?x"), {})
    assert out == {Mapping(ids(g, **{"?x": "a", "?p": "p"}))}


def test_cftp_over_bio(bio_graph, bio_registry):
    out = evaluate_pattern(bio_graph, Cftp("?x", "SIM", "?y"), bio_registry)
    want = Mapping(ids(bio_graph, **{"?x": "bio:GeneB", "?y": "bio:GeneC"}))
    assert want in out


def test_unknown_query_name(bio_graph):
    with pytest.raises(EvaluationError):
        evaluate_pattern(bio_graph, Cftp("?x", "NOPE", "?y"), {})


def test_opt_with_empty_right_keeps_left(bio_graph, bio_registry):
    left = Cftp("?x", "SIM", "?y")
    # right side can never match: filter is unsatisfiable
    right = Filter(TriplePattern("?x", "?q", "?w"), Eq("?q", Const("no-such")))
    got = evaluate_pattern(bio_graph, Opt(left, right), bio_registry)
    assert got == evaluate_pattern(bio_graph, left, bio_registry)


def test_filter_equality_and_bound(bio_graph):
    tp = TriplePattern("?x", "?p", "?y")
    eq = Filter(tp, Eq("?p", Const("bio:has")))
    got = evaluate_pattern(bio_graph, eq, {})
    assert len(got) == 2  # GeneA and GeneB carry a has edge
    assert evaluate_pattern(bio_graph, Filter(tp, Bound("?x")), {}) == evaluate_pattern(
        bio_graph, tp, {}
    )
    # equality on an unbound variable is an error, so nothing passes
    assert evaluate_pattern(bio_graph, Filter(tp, Eq("?nope", "?x")), {}) == set()


def test_filter_three_valued_connectives():
    g = parse_ntriples("<a> <p> <b> .")
    m = Mapping(ids(g, **{"?x": "a"}))
    err = Eq("?unbound", "?x")
    assert eval_constraint(err, m, g) is None
    assert eval_constraint(CNot(err), m, g) is None
    assert eval_constraint(CAnd(Eq("?x", Const("b")), err), m, g) is False
    assert eval_constraint(COr(Eq("?x", Const("a")), err), m, g) is True
    assert eval_constraint(CAnd(Bound("?x"), CNot(Bound("?y"))), m, g) is True


def test_constraint_constant_not_in_graph():
    g = parse_ntriples("<a> <p> <b> .")
    m = Mapping(ids(g, **{"?x": "a"}))
    assert eval_constraint(Eq("?x", Const("zzz")), m, g) is False


def test_select_projects_domains(bio_graph):
    pattern = Select(frozenset({"?x"}), TriplePattern("?x", "?p", "?y"))
    for m in evaluate_pattern(bio_graph, pattern, {}):
        assert m.domain == ("?x",)


def test_pattern_file_end_to_end(bio_graph):
    pattern, registry = parse_pattern_file((DATA / "bio_pattern.sparql").read_text())
    out = evaluate_pattern(bio_graph, pattern, registry)
    variables, rows = render_mappings(bio_graph, out)
    assert variables == ["?f", "?x", "?y"]
    # GeneB is similar to GeneC and has a function; GeneC/GeneS have none bound
    assert ["bio:MolecularFunctionY", "bio:GeneB", "bio:GeneC"] in rows
    assert any(row[0] == "" for row in rows)


def test_pattern_file_errors():
    with pytest.raises(ParseError):
        parse_pattern_file("(tp ?x ?y)")  # wrong arity
    with pytest.raises(ParseError):
        parse_pattern_file("(cftp ?x NOQ ?y)")  # unknown query
    with pytest.raises(ParseError):
        parse_pattern_file("")  # no pattern


def test_normalize_single_disjunct_single_atom(bio_graph, bio_registry):
    node = Uccftp("?a", "SIM", "?b")
    rewritten, reg = normalize_uccf(node, bio_registry)
    assert isinstance(rewritten, Cftp)
    assert evaluate_pattern(bio_graph, node, bio_registry) == evaluate_pattern(
        bio_graph, rewritten, reg
    )


def test_normalize_bio_union(bio_graph):
    text = (DATA / "bio_union.cq").read_text()
    from cfrdf.queries import parse_query

    q = parse_query(text)
    registry = {"REL": q}
    node = Uccftp("?a", "REL", "?b")
    rewritten, reg = normalize_uccf(node, registry)
    assert isinstance(rewritten, Union)
    assert evaluate_pattern(bio_graph, node, registry) == evaluate_pattern(
        bio_graph, rewritten, reg
    )


@pytest.mark.parametrize("seed", range(12))
def test_algebra_laws_random(seed):
    rng = random.Random(seed + 11000)
    g = random_graph(rng, max_constants=6, max_triples=8)
    registry = random_registry(rng, convert(g))
    constants = sorted(g.interner.lexical(c) for c in g.vocabulary)
    p1 = random_pattern(rng, registry, constants, depth=2)
    p2 = random_pattern(rng, registry, constants, depth=2)

    def ev(p):
        return evaluate_pattern(g, p, registry, kernel="numpy")

    assert ev(Union(p1, p2)) == ev(Union(p2, p1))
    assert ev(And(p1, p2)) == ev(And(p2, p1))
    assert ev(Union(p1, Union(p2, p1))) == ev(Union(Union(p1, p2), p1))

    s = frozenset(rng.sample(("?a", "?b", "?c", "?d"), 3))
    t = frozenset(rng.sample(("?a", "?b", "?c", "?d"), 2))
    assert ev(Select(s, Select(t, p1))) == ev(Select(s & t, p1))

    # OPT preserves every left row and every joined row
    opt = ev(Opt(p1, p2))
    assert ev(And(p1, p2)) <= opt
    left_rows = ev(p1)
    for row in left_rows:
        assert any(row.compatible(o) and o.merged(row) == o for o in opt)


@pytest.mark.parametrize("seed", range(12))
def test_normalize_uccf_random_equivalence(seed):
    rng = random.Random(seed + 12000)
    g = random_graph(rng, max_constants=6, max_triples=8)
    registry = random_registry(rng, convert(g))
    constants = sorted(g.interner.lexical(c) for c in g.vocabulary)
    p = random_pattern(rng, registry, constants, depth=2)
    rewritten, reg = normalize_uccf(p, registry)
    assert evaluate_pattern(g, p, registry, kernel="numpy") == evaluate_pattern(
        g, rewritten, reg, kernel="numpy"
    )
