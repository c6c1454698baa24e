import random

import numpy as np
import pytest
from hypothesis import given, settings

from cgkit import fixtures as F
from cgkit.enumeration import graphs_up_to, random_cg
from cgkit.graph import GraphError, MixedGraph
from cgkit.oracle import (
    GaussianModel,
    ParameterizationError,
    exact_gaussian_oracle,
    faithfulness_violations,
    fisher_z_oracle,
    gen_gaussian,
    graph_oracle,
    partial_correlation,
)
from cgkit.verify import pair_queries

from conftest import chain_graphs, mccgs

P = MixedGraph.parse


def test_graph_oracle_examples():
    o = graph_oracle(P("A->B, C->B"))
    assert o.query("A", "C") and not o.query("A", "C", {"B"})
    o = graph_oracle(F.NESTED_AMP_F)
    assert o.query("A", "B", {"C", "D"})
    assert not o.query("A", "B", ["D", "E"])
    assert o.calls == 2
    with pytest.raises(GraphError):
        o.query("A", "Z")
    with pytest.raises(GraphError):
        graph_oracle(P("A->B, B--C, C--A"))
    with pytest.raises(GraphError):
        graph_oracle(F.NON_MAXIMAL_CCG)


def test_empty_graph_gives_diagonal_covariance():
    m = gen_gaussian(MixedGraph(list("ABC")), seed=3)
    assert np.count_nonzero(m.cov - np.diag(np.diag(m.cov))) == 0


def test_single_bidirected_edge():
    m = gen_gaussian(P("A<->B"), seed=0)
    assert m.names == ("A", "B")
    assert abs(m.cov[0, 1]) > 1e-3
    assert abs(partial_correlation(m.cov, 0, 1, [])) > 1e-3


def test_two_paths_partial_correlations():
    m = gen_gaussian(F.TWO_PATHS_MCCG, seed=1)
    b, c, a = m.index("BCA")
    assert abs(partial_correlation(m.cov, b, c, [a])) < 1e-9
    assert abs(partial_correlation(m.cov, b, c, [])) > 1e-6


def test_exact_oracle_matches_graph_on_two_paths():
    g = F.TWO_PATHS_MCCG
    ex = exact_gaussian_oracle(gen_gaussian(g, seed=11))
    go = graph_oracle(g)
    for a, b, s in pair_queries(g.nodes):
        assert ex.query(a, b, s) == go.query(a, b, s)


def test_exact_oracle_matches_graph_on_small_graphs():
    for kind in ("cg", "mccg"):
        for i, g in enumerate(graphs_up_to(3, kind)):
            ex = exact_gaussian_oracle(gen_gaussian(g, seed=i))
            go = graph_oracle(g, "amp" if kind == "cg" else "mccg")
            for a, b, s in pair_queries(g.nodes):
                assert ex.query(a, b, s) == go.query(a, b, s)


def test_exact_oracle_set_queries():
    g = F.TWO_PATHS_MCCG
    ex = exact_gaussian_oracle(gen_gaussian(g, seed=2))
    assert ex.independent({"B"}, {"C"}, {"A"})
    assert not ex.independent({"B", "D"}, {"C"}, {"A"})


def test_diagonal_and_infinite_tolerance():
    m = GaussianModel(("A", "B", "C"), np.diag([1.0, 2.0, 3.0]))
    ex = exact_gaussian_oracle(m)
    assert all(ex.query(a, b, s) for a, b, s in pair_queries(m.names))
    m = gen_gaussian(P("A--B, B--C, A--C"), seed=0)
    loose = exact_gaussian_oracle(m, tol=float("inf"))
    assert all(loose.query(a, b, s) for a, b, s in pair_queries(m.names))


@settings(max_examples=20)
@given(mccgs(min_nodes=2, max_nodes=5))
def test_exact_oracle_is_symmetric(g):
    ex = exact_gaussian_oracle(gen_gaussian(g, seed=0))
    for a, b, s in pair_queries(g.nodes):
        assert ex.query(a, b, s) == ex.query(b, a, s)


@settings(max_examples=15)
@given(chain_graphs(min_nodes=2, max_nodes=5))
def test_generated_models_are_faithful(g):
    m = gen_gaussian(g, seed=4)
    assert not faithfulness_violations(m, g)


def test_generation_is_deterministic_per_seed():
    g = F.NESTED_AMP_F
    a, b = gen_gaussian(g, seed=7), gen_gaussian(g, seed=7)
    assert np.array_equal(a.cov, b.cov)
    assert not np.array_equal(a.cov, gen_gaussian(g, seed=8).cov)
    assert np.array_equal(a.sample(5, seed=1), b.sample(5, seed=1))


def test_generation_errors():
    with pytest.raises(GraphError):
        gen_gaussian(F.NON_MAXIMAL_CCG, seed=0)
    with pytest.raises(GraphError):
        gen_gaussian(P("A->B, B--C, C--A"), seed=0)
    # a strength margin no draw can meet
    with pytest.raises(ParameterizationError):
        gen_gaussian(P("A--B"), seed=0, max_attempts=3, min_dependence=0.99)


def test_model_validation():
    with pytest.raises(ValueError):
        GaussianModel(("A", "B"), np.eye(3))
    with pytest.raises(ValueError):
        GaussianModel(("A", "B"), np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ValueError):
        GaussianModel(("A", "B"), np.array([[1.0, 1.0], [1.0, 1.0]]))
    m = GaussianModel(("A", "B"), np.eye(2))
    assert m.to_dict() == {"names": ["A", "B"], "matrix": [1.0, 0.0, 0.0, 1.0]}
    with pytest.raises(GraphError):
        m.index(["Z"])


# Fisher z ---------------------------------------------------------------------


def test_fisher_independent_columns():
    rng = np.random.default_rng(0)
    data = rng.standard_normal((100_000, 2))
    assert fisher_z_oracle(data, ["A", "B"], 0.01).query("A", "B")


def test_fisher_acceptance_rate_near_nominal():
    rng = np.random.default_rng(1)
    hits = sum(fisher_z_oracle(rng.standard_normal((2000, 2)), ["A", "B"], 0.01).query("A", "B")
               for _ in range(300))
    assert hits / 300 > 0.95


def test_fisher_perfect_correlation_is_dependent():
    x = np.arange(50, dtype=float)
    data = np.column_stack([x, 2 * x + 1])
    o = fisher_z_oracle(data, ["A", "B"])
    assert not o.query("A", "B")
    assert o.statistic("A", "B") == float("inf")


def test_fisher_preconditions():
    data = np.random.default_rng(0).standard_normal((4, 3))
    o = fisher_z_oracle(data, ["A", "B", "C"])
    with pytest.raises(ValueError):
        o.query("A", "B", {"C"})
    with pytest.raises(ValueError):
        fisher_z_oracle(data, ["A", "B"])
    with pytest.raises(ValueError):
        fisher_z_oracle(data, ["A", "B", "C"], alpha=0)
    with pytest.raises(GraphError):
        fisher_z_oracle(np.zeros((10, 1)) + np.arange(10)[:, None], ["A"]).query("A", "Z")


def test_fisher_disagreement_rate_on_five_node_graphs():
    rng = random.Random(3)
    total = wrong = 0
    for i in range(5):
        g = random_cg(5, rng)
        m = gen_gaussian(g, seed=i)
        fz = fisher_z_oracle(m.sample(100_000, seed=100 + i), m.names, 0.01)
        go = graph_oracle(g)
        for a, b, s in pair_queries(g.nodes):
            total += 1
            wrong += fz.query(a, b, s) != go.query(a, b, s)
            assert fz.query(a, b, s) == fz.query(b, a, s)
    assert wrong / total < 0.05
