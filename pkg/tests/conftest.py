from pathlib import Path

import pytest

from cfrdf.grammar import normalize, parse_grammar
from cfrdf.rdf import graph_from_lexical, parse_ntriples

DATA = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def bio_graph():
    return parse_ntriples((DATA / "bio.nt").read_text())


@pytest.fixture(scope="session")
def bio_grammar():
    return parse_grammar((DATA / "bio_similarity.cfg").read_text())


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Compile the numba kernel up front so timed tests measure solving only."""
    from cfrdf.axis import convert
    from cfrdf.recognizer import available_kernels, solve

    g = graph_from_lexical([("a", "p", "b")])
    cfg = normalize(parse_grammar("V -> next::p"))
    lg = convert(g)
    for kernel in available_kernels():
        solve(lg, cfg, kernel=kernel)
