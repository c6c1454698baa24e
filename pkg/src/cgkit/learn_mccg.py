"""Constraint-based learning of the blargest MCCG of a faithful oracle."""

from __future__ import annotations

from itertools import combinations
from typing import Iterable

from .graph import BIDIRECTED, UNDIRECTED, MixedGraph, is_mccg, mccg_violations
from .learn_amp import LearningError, MarkedGraph, SeparatorTable, _skeleton_search


def _c1_violated(h: MixedGraph, a: str, b: str) -> bool:
    # a <-> b violates C1 when either end is the middle of an induced x -- m -- y
    for m in (a, b):
        ne = sorted(h.neighbors(m))
        for x, y in combinations(ne, 2):
            if not h.adjacent(x, y):
                return True
    return False


def _c2_violated(h: MixedGraph, a: str, b: str, comp: dict) -> bool:
    return comp[a] == comp[b]


def fix_c1c2(h: MixedGraph) -> MixedGraph:
    """Turn violating bidirected edges into undirected ones until none is left.

    At each step the lexicographically first bidirected edge that violates
    C1 (checked first) or C2 is converted.
    """
    cur = h
    while True:
        comp = {}
        for i, k in enumerate(cur.undirected_components()):
            for v in k:
                comp[v] = i
        for a, tok, b in cur.edges:
            if tok != BIDIRECTED:
                continue
            if _c1_violated(cur, a, b) or _c2_violated(cur, a, b, comp):
                cur = cur.with_edges([(a, UNDIRECTED, b)])
                break
        else:
            return cur


def undirect_triples(h: MixedGraph, sep: SeparatorTable) -> MixedGraph:
    """Replace every induced ``a <-> b <-> c`` with ``b`` in ``S_ac`` by ``a -- b -- c``.

    All qualifying triples are collected first and converted together.
    """
    change = set()
    for b in h.nodes:
        sp = sorted(h.spouses(b))
        for a, c in combinations(sp, 2):
            if h.adjacent(a, c):
                continue
            s = sep.get_sep(a, c)
            if s is not None and b in s:
                change.add(tuple(sorted((a, b))))
                change.add(tuple(sorted((b, c))))
    return h.with_edges((a, UNDIRECTED, b) for a, b in sorted(change))


def learn_mccg_skeleton(oracle, nodes: Iterable[str]) -> tuple[MixedGraph, SeparatorTable]:
    h = MarkedGraph.complete(nodes)
    sep = _skeleton_search(h, oracle, lambda g, a: g.ad({a}), h.remove)
    return MixedGraph(h.nodes, [(a, BIDIRECTED, b) for a, b in h.pairs()]), sep


def learn_mccg(oracle, nodes: Iterable[str] | None = None) -> tuple[MixedGraph, SeparatorTable]:
    """Learn the MCCG with the most bidirected edges in the oracle's class.

    Raises
    ------
    LearningError
        If the result is not maximal, which only happens with an oracle no
        MCCG is faithful to.
    """
    nodes = oracle.nodes if nodes is None else tuple(sorted(nodes))
    h, sep = learn_mccg_skeleton(oracle, nodes)
    h = undirect_triples(h, sep)
    h = fix_c1c2(h)
    if not is_mccg(h):
        raise LearningError("learned graph is not maximal", h, mccg_violations(h), sep)
    return h, sep
