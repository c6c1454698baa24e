import random
from itertools import permutations

import networkx as nx
import pytest
from hypothesis import given

from cgkit import fixtures as F
from cgkit.enumeration import all_cgs, all_mccgs, graphs_up_to, node_names
from cgkit.graph import (
    GraphError,
    MixedGraph,
    flags,
    has_mixed_cycle,
    immoralities,
    is_chain_graph,
    is_forest,
    is_mccg,
    marginalize_mccg,
    mccg_violations,
    semidirected_cycle,
    triplexes,
)
from cgkit.separation import mccg_separated

from conftest import chain_graphs, mccgs

P = MixedGraph.parse


# construction and serialization -------------------------------------------


def test_parse_chains_and_tokens():
    g = P("A->B--C<->D, E")
    assert g.nodes == ("A", "B", "C", "D", "E")
    assert g.edges == [("A", "->", "B"), ("B", "--", "C"), ("C", "<->", "D")]
    assert g.edge("B", "A") == "<-"


def test_reverse_arrow_is_normalized():
    assert P("B<-A") == P("A->B")
    assert P("B<-A").edges == [("A", "->", "B")]


@pytest.mark.parametrize("bad", [
    lambda: MixedGraph(["A"], [("A", "--", "A")]),
    lambda: MixedGraph([], [("A", "--", "B"), ("B", "->", "A")]),
    lambda: MixedGraph([], [("A", "~", "B")]),
    lambda: MixedGraph([""]),
])
def test_invalid_graphs_rejected(bad):
    with pytest.raises(GraphError):
        bad()


def test_json_round_trip_is_byte_stable():
    g = P("C<->B, A->C, B--A")
    text = g.to_json()
    assert text == '{"nodes":["A","B","C"],"edges":[["A","--","B"],["A","->","C"],["B","<->","C"]]}'
    assert MixedGraph.from_json(text).to_json() == text


@pytest.mark.parametrize("text", [
    '{"nodes":["A"]}',
    '{"nodes":["A","B"],"edges":[["A","<-","B"]]}',
    '{"nodes":["A"],"edges":[["A","--","B"]]}',
    'not json',
])
def test_json_rejects_malformed(text):
    with pytest.raises(GraphError):
        MixedGraph.from_json(text)


@given(chain_graphs())
def test_json_round_trip_random(g):
    assert MixedGraph.from_json(g.to_json()) == g


def test_dot_export_mentions_every_edge():
    dot = P("A->B, B--C, C<->D").to_dot()
    assert dot.startswith("graph G {")
    assert dot.count("--") >= 3


# neighbourhoods -------------------------------------------------------------


def test_neighbourhoods_on_examples():
    assert P("A->B").neighbors({"B"}) == set()
    f = F.NESTED_AMP_F
    assert f.parents({"D"}) == {"A"}
    assert f.neighbors({"D"}) == {"C", "E"}
    g = P("A<->B, B--C")
    assert g.spouses({"B"}) == {"A"}
    assert g.adjacents({"B"}) == {"A", "C"}


def test_unknown_node_is_an_input_error():
    with pytest.raises(GraphError):
        P("A--B").neighbors({"Z"})


def test_descendants_examples():
    assert P("A->B--C").descendants({"A"}) == {"B", "C"}
    assert F.NESTED_AMP_F.descendants({"A"}) == {"C", "D", "E"}
    g = F.NESTED_AMP_F
    assert g.descendants(set(g.nodes)) == set()


def _brute_descendants(g, xs):
    out = set()
    frontier = [(v,) for v in xs]
    for _ in range(len(g.nodes)):
        nxt = []
        for route in frontier:
            for w, tok in g.incident(route[-1]).items():
                if tok in ("->", "--"):
                    nxt.append(route + (w,))
                    out.add(w)
        frontier = nxt
    return out - set(xs)


def test_descendants_match_route_enumeration():
    for g in graphs_up_to(4, "cg"):
        for v in g.nodes:
            assert g.descendants({v}) == _brute_descendants(g, {v})


def test_components_examples():
    g = P("A--B, C<->D")
    assert set(g.undirected_components()) == {frozenset("AB"), frozenset("C"), frozenset("D")}
    assert set(g.bidirected_components()) == {frozenset("A"), frozenset("B"), frozenset("CD")}
    assert set(F.TRIANGLE_PAIR_MCCG.undirected_components()) == {frozenset("ABC"), frozenset("D"), frozenset("E")}
    e = MixedGraph(["A", "B"])
    assert e.undirected_components() == e.bidirected_components() == [frozenset("A"), frozenset("B")]


@given(chain_graphs())
def test_component_membership_is_symmetric(g):
    for a in g.nodes:
        for b in g.component_of(a):
            assert a in g.component_of(b)


def test_induced_subgraph_of_non_maximal_ccg():
    h = F.NON_MAXIMAL_CCG.induced_subgraph(list("ABCD"))
    assert h == P("A--B, B--C, C--D, A<->D")
    assert F.NON_MAXIMAL_CCG.induced_subgraph(F.NON_MAXIMAL_CCG.nodes) == F.NON_MAXIMAL_CCG


# graph families -------------------------------------------------------------


def test_chain_graph_examples():
    assert not is_chain_graph(P("A->B, B--C, C--A"))
    assert is_chain_graph(P("A->B, C->B"))
    assert is_chain_graph(F.NESTED_AMP_H)
    with pytest.raises(GraphError):
        is_chain_graph(P("A<->B"))


def _brute_semidirected(g):
    # every descending closed route of length <= 2|V| through a directed edge
    n = len(g.nodes)
    for start in g.nodes:
        stack = [(start, False, 0)]
        while stack:
            v, directed, k = stack.pop()
            if k > 0 and v == start and directed:
                return True
            if k >= 2 * n:
                continue
            for w, tok in g.incident(v).items():
                if tok in ("->", "--"):
                    stack.append((w, directed or tok == "->", k + 1))
    return False


def test_chain_graph_matches_cycle_enumeration():
    for n in range(1, 4):
        for g in _raw_cg_candidates(n):
            assert is_chain_graph(g) == (not _brute_semidirected(g))


def _raw_cg_candidates(n):
    from cgkit.enumeration import _assignments
    return _assignments(node_names(n), (None, "--", "->", "<-"))


def test_semidirected_cycle_witness_is_a_cycle():
    for text in ("A->B, B--C, C--A", "A->B, B->C, C->A", "B->A, A--C, C--B"):
        g = P(text)
        cyc = semidirected_cycle(g)
        assert cyc[0] == cyc[-1]
        assert set(cyc) == {"A", "B", "C"}
        steps = [g.edge(a, b) for a, b in zip(cyc, cyc[1:])]
        assert all(t in ("->", "--") for t in steps) and "->" in steps
    assert semidirected_cycle(P("A->B, B--C, A->C")) is None


def test_mccg_examples():
    v = mccg_violations(F.NON_MAXIMAL_CCG)
    assert ("C2", ("A", "D")) in v
    assert not is_mccg(F.NON_MAXIMAL_CCG)
    assert is_mccg(F.TWO_PATHS_MCCG)
    v = mccg_violations(P("A--C, C--B, C<->D"))
    assert v and v[0][0] == "C1"
    with pytest.raises(GraphError):
        is_mccg(P("A->B"))


def _naive_is_mccg(g):
    und = nx.Graph()
    und.add_nodes_from(g.nodes)
    und.add_edges_from((a, b) for a, t, b in g.edges if t == "--")
    for c in g.nodes:
        if not g.spouses({c}):
            continue
        ne = list(und.neighbors(c))
        if any(not g.adjacent(a, b) for a in ne for b in ne if a < b):
            return False
    return not any(t == "<->" and nx.has_path(und, a, b) for a, t, b in g.edges)


def test_mccg_enumeration_matches_naive_filter():
    from cgkit.enumeration import all_ccgs
    for n in range(1, 5):
        expected = [g for g in all_ccgs(n) if _naive_is_mccg(g)]
        assert list(all_mccgs(n)) == expected
    assert len(expected) == 422


def test_triplex_examples():
    g = P("A->B, C->B")
    assert triplexes(g) == {(frozenset("AC"), "B")}
    assert immoralities(g) == triplexes(g)
    assert flags(g) == set()
    assert triplexes(P("A<->B, B--C")) == {(frozenset("AC"), "B")}
    assert triplexes(P("A--B, B--C, A--C")) == set()
    assert flags(P("A->B, B--C")) == {("A", "B", "C")}


@given(chain_graphs(max_nodes=5))
def test_triplexes_invariant_under_relabeling(g):
    names = list(g.nodes)
    perm = random.Random(len(names)).sample(names, len(names))
    mapping = dict(zip(names, perm))
    moved = {(frozenset(mapping[v] for v in pair), mapping[b]) for pair, b in triplexes(g)}
    assert triplexes(g.relabel(mapping)) == moved


def test_triplexes_invariant_under_all_permutations_small():
    for g in all_cgs(3):
        for perm in permutations(g.nodes):
            mapping = dict(zip(g.nodes, perm))
            moved = {(frozenset(mapping[v] for v in p), mapping[b]) for p, b in triplexes(g)}
            assert triplexes(g.relabel(mapping)) == moved


# marginalization ------------------------------------------------------------


def test_marginalize_examples():
    assert marginalize_mccg(P("A--B--C"), {"A", "C"}) == P("A--C")
    m = marginalize_mccg(P("A--B, B<->C"), {"A", "C"})
    assert m == MixedGraph(["A", "C"])
    g = F.TWO_PATHS_MCCG
    assert marginalize_mccg(g, g.nodes) == g


@given(mccgs(max_nodes=5))
def test_marginal_is_maximal_and_preserves_separations(g):
    from cgkit.verify import queries
    keep = [v for i, v in enumerate(g.nodes) if i % 2 == 0]
    m = marginalize_mccg(g, keep)
    assert is_mccg(m)
    if len(keep) >= 2:
        for x, y, z in queries(keep):
            assert mccg_separated(m, x, y, z) == mccg_separated(g, x, y, z)


def test_forest_and_mixed_cycle():
    assert is_forest(P("A--B, B<->C"))
    assert not is_forest(P("A--B, B--C, A--C"))
    assert has_mixed_cycle(F.TWO_PATHS_MCCG)
    assert not has_mixed_cycle(F.TRIANGLE_PAIR_MCCG)
