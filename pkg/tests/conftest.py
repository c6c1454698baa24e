import random
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cgkit.enumeration import random_cg, random_mccg

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def chain_graphs(draw, min_nodes=1, max_nodes=6):
    n = draw(st.integers(min_nodes, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    p = draw(st.sampled_from([0.2, 0.5, 0.8]))
    return random_cg(n, random.Random(seed), p_edge=p)


@st.composite
def mccgs(draw, min_nodes=1, max_nodes=6):
    n = draw(st.integers(min_nodes, max_nodes))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_mccg(n, random.Random(seed))


@st.composite
def graph_and_query(draw, graphs):
    """A graph with at least two nodes plus disjoint X, Y (non-empty) and Z."""
    g = draw(graphs)
    nodes = list(g.nodes)
    labels = draw(st.lists(st.sampled_from([0, 1, 2, 3]), min_size=len(nodes), max_size=len(nodes)))
    labels[0], labels[1] = 1, 2
    order = draw(st.permutations(nodes))
    lab = dict(zip(order, labels))
    x = {v for v in nodes if lab[v] == 1}
    y = {v for v in nodes if lab[v] == 2}
    z = {v for v in nodes if lab[v] == 3}
    return g, x, y, z


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
