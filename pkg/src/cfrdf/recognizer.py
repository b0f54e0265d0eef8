"""Worklist fixpoint computing the context-free relation over an axis graph.

The relation is the least set of facts (v, a, b) closed under the norm-form
grammar: seeded from epsilon and terminal rules, then saturated by composing
adjacent facts through binary rules.  Two interchangeable kernels do the
saturation; CFRDF_KERNEL=numpy|numba (or the `kernel` argument) picks one.
"""

from __future__ import annotations

import os
from collections import OrderedDict
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from . import _kernel_numpy
from .axis import LabeledGraph, convert
from .errors import ContractError
from .grammar import Cfg, is_norm_form, normalize
from .rdf import RdfGraph

KERNEL_ENV = "CFRDF_KERNEL"

_numba_error = None
try:
    from . import _kernel_numba
except ImportError as exc:  # pragma: no cover - exercised only without numba
    _kernel_numba = None
    _numba_error = exc


def available_kernels() -> tuple[str, ...]:
    return ("numpy", "numba") if _kernel_numba is not None else ("numpy",)


def default_kernel() -> str:
    env = os.environ.get(KERNEL_ENV)
    if env:
        return resolve_kernel(env)
    return "numba" if _kernel_numba is not None else "numpy"


def resolve_kernel(name: str | None) -> str:
    if name is None:
        return default_kernel()
    if name == "numpy":
        return "numpy"
    if name == "numba":
        if _kernel_numba is None:
            raise ContractError(f"numba kernel unavailable: {_numba_error}")
        return "numba"
    raise ContractError(f"unknown kernel {name!r} (expected numpy or numba)")


@dataclass(frozen=True)
class CfRelation:
    """The solved facts plus the two endpoint indexes, as consistent views."""

    _pairs: dict[str, frozenset[tuple[int, int]]]
    graph_digest: str
    grammar_digest: str
    kernel: str
    probes: int

    @cached_property
    def facts(self) -> frozenset[tuple[str, int, int]]:
        return frozenset(
            (v, a, b) for v, pairs in self._pairs.items() for a, b in pairs
        )

    @cached_property
    def index_by_source(self) -> dict[tuple[str, int], frozenset[int]]:
        idx: dict[tuple[str, int], set[int]] = {}
        for v, a, b in self.facts:
            idx.setdefault((v, a), set()).add(b)
        return {k: frozenset(s) for k, s in idx.items()}

    @cached_property
    def index_by_target(self) -> dict[tuple[str, int], frozenset[int]]:
        idx: dict[tuple[str, int], set[int]] = {}
        for v, a, b in self.facts:
            idx.setdefault((v, b), set()).add(a)
        return {k: frozenset(s) for k, s in idx.items()}

    @property
    def fact_count(self) -> int:
        return sum(len(p) for p in self._pairs.values())

    def pairs(self, v: str) -> frozenset[tuple[int, int]]:
        return self._pairs.get(v, frozenset())


def relation_of(rel: CfRelation, v: str) -> frozenset[tuple[int, int]]:
    """{(a, b) | (v, a, b) solved}; empty for unknown nonterminals."""
    return rel.pairs(v)


def solve(
    lg: LabeledGraph,
    g: Cfg,
    kernel: str | None = None,
    order_seed: int | None = None,
) -> CfRelation:
    """Least fixpoint of the norm-form grammar over the labeled graph.

    `order_seed` randomizes worklist pop order (the result is order-invariant;
    the knob exists so tests can prove that).
    """
    if not is_norm_form(g):
        raise ContractError("solve requires a grammar in norm form")
    kernel = resolve_kernel(kernel)

    nts = sorted(g.nonterminals)
    nt_id = {name: i for i, name in enumerate(nts)}
    n_nt = len(nts)
    n = len(lg.graph.interner)
    if n_nt == 0 or n == 0:
        return CfRelation({}, lg.graph.digest, g.digest, kernel, 0)
    nn = n * n

    seeds: set[int] = set()
    nodes = sorted(lg.nodes)
    binary: list[tuple[int, int, int]] = []
    for head, body in g.rules:
        v = nt_id[head]
        if len(body) == 0:
            for a in nodes:
                seeds.add(v * nn + a * n + a)
        elif len(body) == 1:
            for a, b in lg.pairs(body[0]):
                seeds.add(v * nn + a * n + b)
        else:
            binary.append((v, nt_id[body[0]], nt_id[body[1]]))

    # group binary rules by the child the popped fact may play
    right_lists: list[list[tuple[int, int]]] = [[] for _ in range(n_nt)]
    left_lists: list[list[tuple[int, int]]] = [[] for _ in range(n_nt)]
    for vp, u, w in binary:
        right_lists[w].append((vp, u))
        left_lists[u].append((vp, w))

    def csr(lists):
        start = np.zeros(n_nt + 1, dtype=np.int64)
        heads, partners = [], []
        for i, items in enumerate(lists):
            for vp, other in items:
                heads.append(vp)
                partners.append(other)
            start[i + 1] = len(heads)
        return (
            start,
            np.asarray(heads, dtype=np.int64),
            np.asarray(partners, dtype=np.int64),
        )

    right_start, right_vp, right_u = csr(right_lists)
    left_start, left_vp, left_w = csr(left_lists)

    words = (n + 63) // 64
    fwd = np.zeros((n_nt, n, words), dtype=np.uint64)
    rev = np.zeros((n_nt, n, words), dtype=np.uint64)
    seed_arr = np.fromiter(seeds, dtype=np.int64, count=len(seeds))
    seed_arr.sort()
    if seed_arr.size:
        v = seed_arr // nn
        r = seed_arr % nn
        a = r // n
        b = r % n
        np.bitwise_or.at(fwd, (v, a, b >> 6), np.uint64(1) << (b & 63).astype(np.uint64))
        np.bitwise_or.at(rev, (v, b, a >> 6), np.uint64(1) << (a & 63).astype(np.uint64))

    impl = _kernel_numba if kernel == "numba" else _kernel_numpy
    facts, probes = impl.solve_kernel(
        n_nt,
        n,
        words,
        fwd,
        rev,
        seed_arr,
        right_start,
        right_vp,
        right_u,
        left_start,
        left_vp,
        left_w,
        order_seed,
    )

    per_nt: dict[str, set[tuple[int, int]]] = {}
    for fact in facts.tolist():
        v, r = divmod(fact, nn)
        per_nt.setdefault(nts[v], set()).add(divmod(r, n))
    frozen = {v: frozenset(p) for v, p in per_nt.items()}
    return CfRelation(frozen, lg.graph.digest, g.digest, kernel, int(probes))


_cache: OrderedDict = OrderedDict()
_CACHE_CAP = 32


def solve_cached(
    g: RdfGraph, cfg: Cfg, kernel: str | None = None
) -> tuple[CfRelation, LabeledGraph]:
    """Normalize + convert + solve, memoized on (graph, grammar, kernel) digests."""
    kernel = resolve_kernel(kernel)
    key = (g.digest, cfg.digest, kernel)
    hit = _cache.get(key)
    if hit is not None:
        _cache.move_to_end(key)
        return hit
    lg = convert(g)
    rel = solve(lg, normalize(cfg), kernel=kernel)
    _cache[key] = (rel, lg)
    if len(_cache) > _CACHE_CAP:
        _cache.popitem(last=False)
    return rel, lg


def clear_cache():
    _cache.clear()
