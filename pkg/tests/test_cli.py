import json
from pathlib import Path

import pytest

from cfrdf import cli

DATA = Path(__file__).parent / "data"


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_convert_tsv(capsys, tmp_path):
    path = tmp_path / "g.nt"
    path.write_text("<a> <p> <b> .\n")
    code, out, _ = run(capsys, "convert", "--graph", str(path))
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 18
    assert "a\tnext::p\tb" in lines
    assert lines == sorted(lines)


def test_solve_sorted_pairs(capsys, tmp_path):
    graph = tmp_path / "g.nt"
    graph.write_text("<a> <sub> <b> .\n<b> <sub> <c> .\n")
    grammar = tmp_path / "g.cfg"
    grammar.write_text("W -> V W | eps\nV -> next::sub\n")
    code, out, _ = run(capsys, "solve", "--graph", str(graph), "--grammar", str(grammar), "--start", "W")
    assert code == 0
    rows = [tuple(line.split("\t")) for line in out.strip().splitlines()]
    assert rows == sorted(rows)
    assert ("a", "c") in rows


def test_solve_json_format(capsys, tmp_path):
    graph = tmp_path / "g.nt"
    graph.write_text("<a> <sub> <b> .\n")
    grammar = tmp_path / "g.cfg"
    grammar.write_text("V -> next::sub\n")
    code, out, _ = run(
        capsys, "solve", "--graph", str(graph), "--grammar", str(grammar),
        "--start", "V", "--format", "json",
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert rows == [{"x": "a", "y": "b"}]


def test_query_subcommand(capsys):
    code, out, _ = run(
        capsys, "query", "--graph", str(DATA / "bio.nt"), "--query", str(DATA / "bio_union.cq")
    )
    assert code == 0
    assert "bio:GeneB\tbio:GeneS" in out


def test_nre_both_engines_agree(capsys):
    code, out, _ = run(
        capsys, "nre", "--graph", str(DATA / "bio.nt"),
        "--expr", "next::bio:belongsTo/next-1::bio:belongsTo",
        "--engine", "both",
    )
    assert code == 0
    assert "bio:GeneB\tbio:GeneS" in out


def test_nre_engine_mismatch_exits_nonzero(capsys, monkeypatch):
    monkeypatch.setattr(cli, "eval_nre", lambda g, e: {(0, 0)})
    code, _, err = run(
        capsys, "nre", "--graph", str(DATA / "bio.nt"),
        "--expr", "next::bio:belongsTo", "--engine", "both",
    )
    assert code == 1
    assert "disagree" in err


def test_sparql_subcommand(capsys):
    code, out, _ = run(
        capsys, "sparql", "--graph", str(DATA / "bio.nt"),
        "--pattern", str(DATA / "bio_pattern.sparql"),
    )
    assert code == 0
    header = out.splitlines()[0].split("\t")
    assert header == ["?f", "?x", "?y"]


def test_sparql_normalize_flag_same_answers(capsys):
    _, plain, _ = run(
        capsys, "sparql", "--graph", str(DATA / "bio.nt"),
        "--pattern", str(DATA / "bio_pattern.sparql"),
    )
    _, rewritten, _ = run(
        capsys, "sparql", "--graph", str(DATA / "bio.nt"),
        "--pattern", str(DATA / "bio_pattern.sparql"), "--normalize-uccf",
    )
    assert plain == rewritten


def test_oracle_subcommand(capsys):
    code, out, _ = run(
        capsys, "oracle", "--graph", str(DATA / "bio.nt"),
        "--grammar", str(DATA / "bio_similarity.cfg"),
        "--start", "V", "--max-len", "6",
    )
    assert code == 0
    assert "bio:GeneB\tbio:GeneC" in out


def test_bench_chains(capsys):
    code, out, _ = run(
        capsys, "bench", "--suite", "chains", "--sizes", "4,8", "--kernel", "both"
    )
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0].split("\t")[:4] == ["name", "triples", "query", "kernel"]
    assert len(lines) == 1 + 2 * 2  # two sizes x two kernels


def test_bench_hierarchy(capsys, tmp_path):
    (tmp_path / "tiny.nt").write_text(
        "<a> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <b> .\n"
        "<b> <http://www.w3.org/2000/01/rdf-schema#subClassOf> <c> .\n"
    )
    code, out, _ = run(
        capsys, "bench", "--suite", "hierarchy", "--graphs", str(tmp_path),
        "--format", "json",
    )
    assert code == 0
    rows = [json.loads(line) for line in out.strip().splitlines()]
    assert {r["query"] for r in rows} == {"Q1", "Q2"}
    q1 = next(r for r in rows if r["query"] == "Q1")
    assert q1["results"] == 4  # diagonal of voc: a, b, c, subClassOf


def test_missing_file_exits_2(capsys):
    code, _, err = run(capsys, "convert", "--graph", "/nonexistent.nt")
    assert code == 2
    assert "error" in err


def test_parse_error_exits_2(capsys, tmp_path):
    bad = tmp_path / "bad.nt"
    bad.write_text("<a> <p> .\n")
    code, _, err = run(capsys, "convert", "--graph", str(bad))
    assert code == 2
    assert "line 1" in err


def test_bad_grammar_exits_2(capsys, tmp_path):
    graph = tmp_path / "g.nt"
    graph.write_text("<a> <p> <b> .\n")
    grammar = tmp_path / "g.cfg"
    grammar.write_text("V -> wat::a\n")
    code, _, err = run(
        capsys, "solve", "--graph", str(graph), "--grammar", str(grammar), "--start", "V"
    )
    assert code == 2
    assert "wat" in err


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        cli.main(["solve"])  # missing required arguments
    assert exc.value.code == 2


def test_out_file(tmp_path, capsys):
    graph = tmp_path / "g.nt"
    graph.write_text("<a> <p> <b> .\n")
    target = tmp_path / "edges.tsv"
    code, out, _ = run(capsys, "convert", "--graph", str(graph), "--out", str(target))
    assert code == 0
    assert out == ""
    assert len(target.read_text().strip().splitlines()) == 18


def test_bench_hierarchy_requires_graphs(capsys):
    code, _, err = run(capsys, "bench", "--suite", "hierarchy")
    assert code == 2
    assert "--graphs" in err
