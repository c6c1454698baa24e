"""Separation criteria for AMP chain graphs, MCCGs and MAGs.

Each fast decider has a literal brute-force counterpart used as a test
oracle. The fast deciders search over ``(node, arrival)`` states, where the
arrival records the kind of edge end by which a route entered the node.
"""

from __future__ import annotations

from collections import deque
from enum import Enum

from .graph import (
    BIDIRECTED,
    DIRECTED,
    UNDIRECTED,
    GraphError,
    MixedGraph,
    is_chain_graph,
    is_mccg,
)


class Arrival(Enum):
    """Kind of edge end at the current node."""

    IN = "in"  # arrowhead at the node
    OUT = "out"  # tail of a directed edge at the node
    LINE = "line"  # undirected edge
    START = "start"


_HNT = {(Arrival.IN, Arrival.IN), (Arrival.IN, Arrival.LINE), (Arrival.LINE, Arrival.IN)}

# token read from the node towards the other end -> mark at the node
_MARK = {"--": Arrival.LINE, "->": Arrival.OUT, "<-": Arrival.IN, "<->": Arrival.IN}


def head_no_tail(a: Arrival, d: Arrival) -> bool:
    """True when the edge-end pair ``(a, d)`` at a node makes it head-no-tail."""
    return (a, d) in _HNT


def _query(g: MixedGraph, x, y, z) -> tuple[frozenset, frozenset, frozenset]:
    def as_set(s):
        if s is None:
            return frozenset()
        return frozenset([s]) if isinstance(s, str) else frozenset(s)

    xs, ys, zs = as_set(x), as_set(y), as_set(z)
    for n in xs | ys | zs:
        if n not in g:
            raise GraphError(f"unknown node {n!r}")
    if not xs or not ys:
        raise GraphError("X and Y must be non-empty")
    if xs & ys or xs & zs or ys & zs:
        raise GraphError("X, Y and Z must be pairwise disjoint")
    return xs, ys, zs


def _open_reach(g: MixedGraph, xs, ys, zs) -> bool:
    """True if some route from ``xs`` reaches ``ys`` with every transit permitted."""
    seen = set()
    queue = deque()
    for a in sorted(xs):
        for w, tok in g.incident(a).items():
            state = (w, _MARK[_REVERSE[tok]])
            if state not in seen:
                seen.add(state)
                queue.append(state)
    while queue:
        b, arr = queue.popleft()
        if b in ys:
            return True
        in_z = b in zs
        for c, tok in g.incident(b).items():
            if head_no_tail(arr, _MARK[tok]) != in_z:
                continue
            state = (c, _MARK[_REVERSE[tok]])
            if state not in seen:
                seen.add(state)
                queue.append(state)
    return False


_REVERSE = {"--": "--", "->": "<-", "<-": "->", "<->": "<->"}


def amp_separated(g: MixedGraph, x, y, z=()) -> bool:
    """Decide ``X _|_ Y | Z`` in an AMP chain graph.

    Parameters
    ----------
    g : MixedGraph
        A chain graph.
    x, y, z : str or iterable of str
        Pairwise disjoint node sets; ``x`` and ``y`` non-empty.

    Returns
    -------
    bool
        True iff no Z-open route joins a node of ``x`` and a node of ``y``.
    """
    xs, ys, zs = _query(g, x, y, z)
    if not is_chain_graph(g):
        raise GraphError("graph has a semidirected cycle")
    return not _open_reach(g, xs, ys, zs)


def mccg_separated(g: MixedGraph, x, y, z=()) -> bool:
    """Decide ``X _|_ Y | Z`` in a maximal covariance-concentration graph.

    A node is a triplex node of a path when both of its path-edge ends are
    arrowheads, or one is an arrowhead and the other an undirected line.
    Triplex nodes must be in ``z`` and all other interior nodes outside it.
    """
    xs, ys, zs = _query(g, x, y, z)
    if not is_mccg(g):
        raise GraphError("graph is not a maximal covariance-concentration graph")
    return not _open_reach(g, xs, ys, zs)


def separated(g: MixedGraph, x, y, z=(), kind: str | None = None) -> bool:
    """Dispatch on graph kind: ``amp`` for chain graphs, ``mccg`` otherwise."""
    if kind is None:
        kind = "amp" if not g.has_bidirected else "mccg"
    if kind == "amp":
        return amp_separated(g, x, y, z)
    if kind == "mccg":
        return mccg_separated(g, x, y, z)
    if kind == "mag":
        return mag_separated(g, x, y, z)
    raise GraphError(f"unknown separation kind {kind!r}")


# brute-force oracles ---------------------------------------------------------


def _is_hnt_literal(g: MixedGraph, a: str, b: str, c: str) -> bool:
    # a -> b <- c, a -> b -- c, a -- b <- c
    ab, cb = g.edge(a, b), g.edge(c, b)
    return (ab, cb) in {("->", "->"), ("->", "--"), ("--", "->")}


def brute_force_amp_separated(g: MixedGraph, x, y, z=(), max_len: int | None = None) -> bool:
    """Enumerate routes of at most ``max_len`` edges and test openness literally.

    ``max_len`` defaults to ``3 * |V|``; smaller values are rejected because
    shorter bounds can miss open routes.
    """
    xs, ys, zs = _query(g, x, y, z)
    n = len(g.nodes)
    if max_len is None:
        max_len = 3 * n
    if max_len < 3 * n:
        raise ValueError("max_len must be at least 3 * |V|")

    def ok(a, b, c):
        hnt = _is_hnt_literal(g, a, b, c)
        return (b in zs) if hnt else (b not in zs)

    # each stack item: the route so far; an interior node is checked once its
    # successor is known, so every prefix on the stack is open
    stack = [[a] for a in sorted(xs)]
    while stack:
        route = stack.pop()
        last = route[-1]
        if len(route) > 1 and last in ys:
            return False
        if len(route) - 1 >= max_len:
            continue
        for nxt in g.incident(last):
            if len(route) >= 2 and not ok(route[-2], last, nxt):
                continue
            stack.append(route + [nxt])
    return True


def _simple_paths(g: MixedGraph, a: str, b: str):
    """All simple paths from ``a`` to ``b`` as node lists, in lexicographic DFS order."""
    path = [a]
    on = {a}

    def rec(v):
        if v == b:
            yield list(path)
            return
        for w in g.incident(v):
            if w not in on:
                on.add(w)
                path.append(w)
                yield from rec(w)
                path.pop()
                on.discard(w)

    yield from rec(a)


def simple_paths(g: MixedGraph, a: str, b: str) -> list[list[str]]:
    return list(_simple_paths(g, a, b))


def ccg_triplex_node(g: MixedGraph, a: str, b: str, c: str) -> bool:
    """``b`` is a triplex node of the subpath ``a _ b _ c`` in a CCG."""
    ab, bc = g.edge(a, b), g.edge(b, c)
    return BIDIRECTED in (ab, bc)


def ccg_path_open(g: MixedGraph, path: list[str], z, spouse_exception: bool = True) -> bool:
    """Z-openness of a path in a covariance-concentration graph.

    With ``spouse_exception`` a non-triplex node in ``z`` is tolerated when
    it has a spouse (general definition); without it, the simplified
    definition that is valid for maximal graphs is used.
    """
    for i in range(1, len(path) - 1):
        b = path[i]
        if ccg_triplex_node(g, path[i - 1], b, path[i + 1]):
            if b not in z:
                return False
        elif b in z and not (spouse_exception and g.spouses(b)):
            return False
    return True


def brute_force_ccg_separated(g: MixedGraph, x, y, z=(), spouse_exception: bool = True) -> bool:
    """Path-enumeration separation for any covariance-concentration graph."""
    xs, ys, zs = _query(g, x, y, z)
    if g.has_directed:
        raise GraphError("covariance-concentration graphs have no directed edges")
    for a in sorted(xs):
        for b in sorted(ys):
            for p in _simple_paths(g, a, b):
                if ccg_path_open(g, p, zs, spouse_exception):
                    return False
    return True


# latent expansion -----------------------------------------------------------


def latent_name(a: str, b: str) -> str:
    a, b = sorted((a, b))
    return f"_L_{a}_{b}"


def latent_expand(g: MixedGraph) -> MixedGraph:
    """Replace every ``A <-> B`` with ``A <- L -> B`` for a fresh node ``L``."""
    if not is_mccg(g):
        raise GraphError("latent expansion needs a maximal covariance-concentration graph")
    edges = []
    latents = []
    for u, tok, v in g.edges:
        if tok == BIDIRECTED:
            lat = latent_name(u, v)
            if lat in g:
                raise GraphError(f"latent name {lat!r} collides with an existing node")
            latents.append(lat)
            edges += [(lat, DIRECTED, u), (lat, DIRECTED, v)]
        else:
            edges.append((u, tok, v))
    return MixedGraph(list(g.nodes) + latents, edges)


# MAG translation and separation ---------------------------------------------


def mag_translate(g: MixedGraph) -> MixedGraph:
    """Translate an MCCG into a Markov equivalent MAG.

    Every ``A <-> B -- C`` becomes ``A <-> B <- C``. All replacements of a
    round are applied together: an undirected edge gains an arrowhead at each
    end that has a spouse, so it turns into ``<->`` when both ends do. Rounds
    repeat until nothing changes, since new bidirected edges create new
    spouses.
    """
    if not is_mccg(g):
        raise GraphError("translation needs a maximal covariance-concentration graph")
    cur = g
    while True:
        changes = []
        for u, tok, v in cur.edges:
            if tok != UNDIRECTED:
                continue
            hu, hv = bool(cur.spouses(u)), bool(cur.spouses(v))
            if hu and hv:
                changes.append((u, BIDIRECTED, v))
            elif hu:
                changes.append((v, DIRECTED, u))
            elif hv:
                changes.append((u, DIRECTED, v))
        if not changes:
            return cur
        cur = cur.with_edges(changes)


def strict_ancestors(g: MixedGraph, z) -> set[str]:
    """Nodes outside ``z`` with a strictly directed route into ``z``."""
    zs = frozenset(z)
    seen = set(zs)
    queue = deque(sorted(zs))
    while queue:
        v = queue.popleft()
        for w, tok in g.incident(v).items():
            if tok == "<-" and w not in seen:
                seen.add(w)
                queue.append(w)
    return seen - zs


def mag_separated(g: MixedGraph, x, y, z=()) -> bool:
    """Path-enumeration separation in a MAG.

    Colliders (arrowheads at both path-edge ends) must lie in ``Z`` or among
    its strict ancestors; every other interior node must be outside ``Z``.
    """
    xs, ys, zs = _query(g, x, y, z)
    anc = zs | strict_ancestors(g, zs)

    def open_path(p):
        for i in range(1, len(p) - 1):
            b = p[i]
            collider = g.end_mark(b, p[i - 1]) == "arrow" and g.end_mark(b, p[i + 1]) == "arrow"
            if collider:
                if b not in anc:
                    return False
            elif b in zs:
                return False
        return True

    for a in sorted(xs):
        for b in sorted(ys):
            for p in _simple_paths(g, a, b):
                if open_path(p):
                    return False
    return True


# projections ----------------------------------------------------------------


def covariance_projection(g: MixedGraph) -> MixedGraph:
    """Bidirected graph joining every marginally dependent pair."""
    edges = []
    for i, a in enumerate(g.nodes):
        for b in g.nodes[i + 1 :]:
            if not mccg_separated(g, a, b, ()):
                edges.append((a, BIDIRECTED, b))
    return MixedGraph(g.nodes, edges)


def concentration_projection(g: MixedGraph) -> MixedGraph:
    """Undirected graph joining every pair dependent given all other nodes."""
    edges = []
    for i, a in enumerate(g.nodes):
        for b in g.nodes[i + 1 :]:
            rest = set(g.nodes) - {a, b}
            if not mccg_separated(g, a, b, rest):
                edges.append((a, UNDIRECTED, b))
    return MixedGraph(g.nodes, edges)
