"""Triplex equivalence, feasible bidirecting and canonical class members."""

from __future__ import annotations

from itertools import combinations

from .graph import (
    BIDIRECTED,
    DIRECTED,
    UNDIRECTED,
    GraphError,
    MixedGraph,
    flags,
    is_chain_graph,
    is_mccg,
    triplexes,
)


def _kind(g: MixedGraph) -> str:
    if g.has_directed and g.has_bidirected:
        raise GraphError("graph mixes directed and bidirected edges")
    if g.has_bidirected:
        return "mccg"
    if g.has_directed:
        return "cg"
    return "any"


def triplex_equivalent(g: MixedGraph, h: MixedGraph) -> bool:
    """Same adjacencies and same triplexes."""
    if set(g.nodes) != set(h.nodes):
        raise GraphError("graphs are over different node sets")
    kinds = {_kind(g), _kind(h)} - {"any"}
    if len(kinds) > 1:
        raise GraphError("cannot compare a chain graph with a covariance-concentration graph")
    return g.skeleton() == h.skeleton() and triplexes(g) == triplexes(h)


def markov_equivalent_mccg(g: MixedGraph, h: MixedGraph) -> bool:
    """Markov equivalence of two MCCGs, decided through triplex equivalence."""
    if not (is_mccg(g) and is_mccg(h)):
        raise GraphError("both graphs must be maximal covariance-concentration graphs")
    return triplex_equivalent(g, h)


def feasible_bidirect(g: MixedGraph, component) -> MixedGraph:
    """Turn every undirected edge inside a complete undirected component into ``<->``."""
    k = frozenset(component)
    if k not in g.undirected_components():
        raise GraphError(f"{sorted(k)} is not an undirected connectivity component")
    if not g.is_complete(k):
        raise GraphError(f"{sorted(k)} is not complete")
    return g.with_edges((a, BIDIRECTED, b) for a, b in combinations(sorted(k), 2))


def blargest(g: MixedGraph) -> MixedGraph:
    """Bidirect complete undirected components until none is left."""
    if not is_mccg(g):
        raise GraphError("blargest needs a maximal covariance-concentration graph")
    cur = g
    while True:
        for k in cur.undirected_components():
            if len(k) >= 2 and cur.is_complete(k):
                cur = feasible_bidirect(cur, k)
                break
        else:
            return cur


def enumerate_triplex_class(g: MixedGraph, kind: str | None = None, bound: int = 5) -> list[MixedGraph]:
    """All chain graphs (or MCCGs) with the adjacencies and triplexes of ``g``.

    Edge types are assigned one skeleton edge at a time. A candidate triplex
    ``({a, c}, b)`` is checked as soon as both of its edges are fixed, which
    prunes most of the search. The class is returned sorted by edge list.
    """
    if len(g.nodes) > bound:
        raise GraphError(f"class enumeration is limited to {bound} nodes")
    if kind is None:
        kind = "mccg" if g.has_bidirected else "cg"
    if kind not in ("cg", "mccg"):
        raise GraphError(f"unknown graph kind {kind!r}")
    choices = (UNDIRECTED, DIRECTED, "<-") if kind == "cg" else (UNDIRECTED, BIDIRECTED)
    target = triplexes(g)
    pairs = sorted(tuple(sorted(e)) for e in g.skeleton())
    index = {p: i for i, p in enumerate(pairs)}
    # unshielded triples grouped by the position of their later edge
    checks: dict[int, list] = {}
    for b in g.nodes:
        adj = sorted(g.adjacents(b))
        for a, c in combinations(adj, 2):
            if g.adjacent(a, c):
                continue
            i, j = index[tuple(sorted((a, b)))], index[tuple(sorted((b, c)))]
            checks.setdefault(max(i, j), []).append((a, b, c, i, j, (frozenset((a, c)), b) in target))

    def into(tok_ab: str, first_is_b: bool) -> str:
        # mark at b for the edge stored as (lo, hi) with token tok_ab
        if tok_ab == UNDIRECTED:
            return "line"
        if tok_ab == BIDIRECTED:
            return "arrow"
        head_at_hi = tok_ab == DIRECTED
        at_b_is_hi = not first_is_b
        return "arrow" if head_at_hi == at_b_is_hi else "tail"

    assign: list[str] = []
    out = []

    def rec(i):
        if i == len(pairs):
            edges = [(lo, tok, hi) for (lo, hi), tok in zip(pairs, assign)]
            h = MixedGraph(g.nodes, edges)
            if kind == "cg" and not is_chain_graph(h):
                return
            if kind == "mccg" and not is_mccg(h):
                return
            out.append(h)
            return
        for tok in choices:
            assign.append(tok)
            ok = True
            for a, b, c, ia, ic, want in checks.get(i, ()):
                ma = into(assign[ia], pairs[ia][0] == b)
                mc = into(assign[ic], pairs[ic][0] == b)
                got = "tail" not in (ma, mc) and "arrow" in (ma, mc)
                if got != want:
                    ok = False
                    break
            if ok:
                rec(i + 1)
            assign.pop()

    rec(0)
    out.sort(key=lambda h: h.edges)
    return out


def is_deflagged(g: MixedGraph, bound: int = 5) -> bool:
    """Every flag of ``g`` appears in every triplex equivalent chain graph."""
    if g.has_bidirected or not is_chain_graph(g):
        raise GraphError("deflagged check needs a chain graph")
    mine = flags(g)
    if not mine:
        return True
    for h in enumerate_triplex_class(g, "cg", bound):
        if not mine <= flags(h):
            return False
    return True
