"""Context-free path queries and a context-free SPARQL algebra on RDF graphs."""

from .axis import AxisLabel, LabeledGraph, convert, parse_axis_label
from .errors import CfrdfError, ContractError, EvaluationError, ParseError
from .grammar import (
    Cfg,
    generate_strings,
    is_norm_form,
    normalize,
    parse_grammar,
)
from .nre import classify_nre, compile_nre, eval_nre, execute_plan, parse_nre
from .oracle import (
    cyk_membership,
    enumerate_traces,
    oracle_relation,
    stabilized_oracle_relation,
)
from .queries import (
    Ccfpq,
    Mapping,
    NonterminalAtom,
    TriplePatternAtom,
    Uccfpq,
    evaluate_ccfpq,
    evaluate_uccfpq,
    parse_query,
    run_query,
)
from .rdf import RdfGraph, graph_from_lexical, parse_ntriples, serialize_ntriples, vocabulary
from .recognizer import (
    CfRelation,
    available_kernels,
    relation_of,
    solve,
    solve_cached,
)
from .sparql import evaluate_pattern, normalize_uccf, parse_pattern_file

__version__ = "0.1.0"
