"""Mixed graphs with undirected, directed and bidirected edges.

A :class:`MixedGraph` is simple (at most one edge per pair, no loops) and
immutable. Every query that iterates over nodes does so in lexicographic
order, so anything built on top of it is deterministic.
"""

from __future__ import annotations

import json
from collections import deque
from itertools import combinations
from typing import Iterable, Iterator

UNDIRECTED = "--"
DIRECTED = "->"
BIDIRECTED = "<->"
EDGE_TOKENS = (UNDIRECTED, DIRECTED, BIDIRECTED)

# end marks, as seen from the node the end is attached to
TAIL = "tail"
ARROW = "arrow"
LINE = "line"

_REVERSED = {"--": "--", "->": "<-", "<-": "->", "<->": "<->"}


class GraphError(ValueError):
    """Raised for malformed graphs and for queries about unknown nodes."""


def _key(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a < b else (b, a)


class MixedGraph:
    """Simple graph over named nodes whose edges are ``--``, ``->`` or ``<->``.

    Parameters
    ----------
    nodes : iterable of str
        Node names. Nodes mentioned only by ``edges`` are added as well.
    edges : iterable of (u, token, v)
        ``token`` is one of ``"--"``, ``"->"``, ``"<-"`` or ``"<->"``, read
        left to right, so ``("A", "->", "B")`` is ``A -> B``.
    """

    __slots__ = ("_nodes", "_edges", "_adj", "_hash")

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable[tuple[str, str, str]] = ()):
        node_set = set()
        for n in nodes:
            if not isinstance(n, str) or not n:
                raise GraphError(f"node names must be non-empty strings, got {n!r}")
            node_set.add(n)
        table: dict[tuple[str, str], str] = {}
        for u, tok, v in edges:
            if tok not in _REVERSED:
                raise GraphError(f"unknown edge token {tok!r}")
            for n in (u, v):
                if not isinstance(n, str) or not n:
                    raise GraphError(f"node names must be non-empty strings, got {n!r}")
            if u == v:
                raise GraphError(f"self-loop at {u}")
            node_set.update((u, v))
            k = _key(u, v)
            if k in table:
                raise GraphError(f"more than one edge between {k[0]} and {k[1]}")
            table[k] = tok if k == (u, v) else _REVERSED[tok]
        self._nodes = tuple(sorted(node_set))
        self._edges = table
        adj: dict[str, dict[str, str]] = {n: {} for n in self._nodes}
        for (a, b), tok in table.items():
            adj[a][b] = tok
            adj[b][a] = _REVERSED[tok]
        self._adj = {n: dict(sorted(d.items())) for n, d in adj.items()}
        self._hash = None

    # construction helpers -------------------------------------------------

    @classmethod
    def parse(cls, text: str, nodes: Iterable[str] = ()) -> "MixedGraph":
        """Build a graph from a compact string such as ``"A->B, B--C, C<->D"``.

        Chains are allowed: ``"A--B--C"`` is two edges.
        """
        edges = []
        for part in text.replace(";", ",").split(","):
            part = part.strip()
            if not part:
                continue
            tokens = _split_chain(part)
            for i in range(0, len(tokens) - 2, 2):
                edges.append((tokens[i], tokens[i + 1], tokens[i + 2]))
            if len(tokens) == 1:
                nodes = list(nodes) + tokens
        return cls(nodes, edges)

    def with_edges(self, edges: Iterable[tuple[str, str, str]]) -> "MixedGraph":
        """Return a copy with ``edges`` added (replacing any existing edge on the same pair)."""
        table = dict(self._edges)
        for u, tok, v in edges:
            if tok not in _REVERSED:
                raise GraphError(f"unknown edge token {tok!r}")
            k = _key(u, v)
            table[k] = tok if k == (u, v) else _REVERSED[tok]
        return MixedGraph(self._nodes, ((a, t, b) for (a, b), t in table.items()))

    def without_edges(self, pairs: Iterable[tuple[str, str]]) -> "MixedGraph":
        drop = {_key(a, b) for a, b in pairs}
        return MixedGraph(self._nodes, ((a, t, b) for (a, b), t in self._edges.items() if (a, b) not in drop))

    def relabel(self, mapping: dict[str, str]) -> "MixedGraph":
        return MixedGraph(
            (mapping.get(n, n) for n in self._nodes),
            ((mapping.get(a, a), t, mapping.get(b, b)) for (a, b), t in self._edges.items()),
        )

    # basic accessors ------------------------------------------------------

    @property
    def nodes(self) -> tuple[str, ...]:
        return self._nodes

    @property
    def edges(self) -> list[tuple[str, str, str]]:
        """Edges in canonical form, sorted.

        Undirected and bidirected edges are listed with the smaller name
        first; directed edges are always listed tail first.
        """
        out = []
        for (a, b), tok in self._edges.items():
            if tok == "<-":
                out.append((b, DIRECTED, a))
            else:
                out.append((a, tok, b))
        return sorted(out)

    def edge_map(self) -> dict[tuple[str, str], str]:
        return dict(self._edges)

    def __len__(self) -> int:
        return len(self._nodes)

    def __contains__(self, node) -> bool:
        return node in self._adj

    def __eq__(self, other) -> bool:
        if not isinstance(other, MixedGraph):
            return NotImplemented
        return self._nodes == other._nodes and self._edges == other._edges

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self._nodes, frozenset(self._edges.items())))
        return self._hash

    def __repr__(self) -> str:
        body = ", ".join(f"{u}{t}{v}" for u, t, v in self.edges)
        isolated = [n for n in self._nodes if not self._adj[n]]
        if isolated:
            body = ", ".join(filter(None, [body, *isolated]))
        return f"MixedGraph({body!r})"

    def edge(self, a: str, b: str) -> str | None:
        """Token of the edge between ``a`` and ``b`` read from ``a`` to ``b``."""
        self._check(a, b)
        return self._adj[a].get(b)

    def adjacent(self, a: str, b: str) -> bool:
        return b in self._adj[a]

    def incident(self, node: str) -> dict[str, str]:
        """Map from each adjacent node to the edge token read from ``node``."""
        return self._adj[node]

    def end_mark(self, at: str, other: str) -> str:
        """Mark of the end at ``at`` of the edge between ``at`` and ``other``.

        ``ARROW`` for an arrowhead (``other -> at`` or ``<->``), ``TAIL`` for
        the tail of a directed edge, ``LINE`` for undirected edges.
        """
        tok = self._adj[at][other]
        if tok == UNDIRECTED:
            return LINE
        if tok == DIRECTED:
            return TAIL
        return ARROW

    def _check(self, *nodes: str) -> None:
        for n in nodes:
            if n not in self._adj:
                raise GraphError(f"unknown node {n!r}")

    def _as_set(self, x) -> frozenset[str]:
        s = frozenset([x]) if isinstance(x, str) else frozenset(x)
        self._check(*s)
        return s

    @property
    def has_directed(self) -> bool:
        return any(t in ("->", "<-") for t in self._edges.values())

    @property
    def has_bidirected(self) -> bool:
        return any(t == BIDIRECTED for t in self._edges.values())

    @property
    def has_undirected(self) -> bool:
        return any(t == UNDIRECTED for t in self._edges.values())

    def skeleton(self) -> frozenset[frozenset[str]]:
        return frozenset(frozenset(k) for k in self._edges)

    # set-valued neighbourhood queries ------------------------------------

    def _collect(self, x, tokens: tuple[str, ...]) -> set[str]:
        xs = self._as_set(x)
        out = set()
        for v in xs:
            for w, tok in self._adj[v].items():
                if tok in tokens and w not in xs:
                    out.add(w)
        return out

    def parents(self, x) -> set[str]:
        # token read from v: "<-" means w -> v
        return self._collect(x, ("<-",))

    def children(self, x) -> set[str]:
        return self._collect(x, ("->",))

    def neighbors(self, x) -> set[str]:
        return self._collect(x, (UNDIRECTED,))

    def spouses(self, x) -> set[str]:
        return self._collect(x, (BIDIRECTED,))

    def adjacents(self, x) -> set[str]:
        return self._collect(x, ("--", "->", "<-", "<->"))

    def descendants(self, x) -> set[str]:
        """Nodes outside ``x`` reachable by a descending route (``->`` or ``--`` steps)."""
        xs = self._as_set(x)
        seen = set(xs)
        queue = deque(sorted(xs))
        while queue:
            v = queue.popleft()
            for w, tok in self._adj[v].items():
                if tok in ("->", "--") and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen - xs

    def ancestors(self, x) -> set[str]:
        """Strict ascendants: nodes outside ``x`` with a directed route into ``x``."""
        xs = self._as_set(x)
        seen = set(xs)
        queue = deque(sorted(xs))
        while queue:
            v = queue.popleft()
            for w, tok in self._adj[v].items():
                if tok == "<-" and w not in seen:
                    seen.add(w)
                    queue.append(w)
        return seen - xs

    # components -----------------------------------------------------------

    def _components(self, token: str) -> list[frozenset[str]]:
        seen: set[str] = set()
        comps = []
        for n in self._nodes:
            if n in seen:
                continue
            comp = {n}
            queue = deque([n])
            while queue:
                v = queue.popleft()
                for w, tok in self._adj[v].items():
                    if tok == token and w not in comp:
                        comp.add(w)
                        queue.append(w)
            seen |= comp
            comps.append(frozenset(comp))
        return comps

    def undirected_components(self) -> list[frozenset[str]]:
        """Undirected connectivity components, ordered by their smallest node."""
        return self._components(UNDIRECTED)

    def bidirected_components(self) -> list[frozenset[str]]:
        return self._components(BIDIRECTED)

    def component_of(self, node: str) -> frozenset[str]:
        """``co_G(node)``: the undirected connectivity component containing ``node``."""
        self._check(node)
        for comp in self.undirected_components():
            if node in comp:
                return comp
        raise AssertionError("unreachable")

    def is_complete(self, nodes: Iterable[str]) -> bool:
        """True when every pair in ``nodes`` is joined by an undirected edge."""
        return all(self._adj[a].get(b) == UNDIRECTED for a, b in combinations(sorted(nodes), 2))

    def induced_subgraph(self, x: Iterable[str]) -> "MixedGraph":
        xs = self._as_set(x)
        return MixedGraph(xs, ((a, t, b) for (a, b), t in self._edges.items() if a in xs and b in xs))

    # serialization --------------------------------------------------------

    def to_dict(self) -> dict:
        return {"nodes": list(self._nodes), "edges": [list(e) for e in self.edges]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict) -> "MixedGraph":
        if not isinstance(data, dict) or "nodes" not in data or "edges" not in data:
            raise GraphError("graph JSON needs 'nodes' and 'edges'")
        edges = []
        for e in data["edges"]:
            if not isinstance(e, (list, tuple)) or len(e) != 3:
                raise GraphError(f"malformed edge {e!r}")
            if e[1] not in EDGE_TOKENS:
                raise GraphError(f"edge token must be one of {EDGE_TOKENS}, got {e[1]!r}")
            edges.append(tuple(e))
        g = cls(data["nodes"], edges)
        if set(g.nodes) != set(data["nodes"]):
            raise GraphError("edge endpoints must be listed in 'nodes'")
        return g

    @classmethod
    def from_json(cls, text: str) -> "MixedGraph":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise GraphError(f"invalid JSON: {exc}") from None
        return cls.from_dict(data)

    def to_dot(self, name: str = "G") -> str:
        lines = [f"graph {name} {{"]
        for n in self._nodes:
            lines.append(f'  "{n}";')
        style = {
            UNDIRECTED: "dir=none",
            DIRECTED: "dir=forward",
            BIDIRECTED: "dir=both",
        }
        for u, t, v in self.edges:
            lines.append(f'  "{u}" -- "{v}" [{style[t]}];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _split_chain(part: str) -> list[str]:
    out = []
    i = 0
    buf = ""
    while i < len(part):
        for tok in ("<->", "--", "->", "<-"):
            if part.startswith(tok, i):
                out.extend([buf.strip(), tok])
                buf = ""
                i += len(tok)
                break
        else:
            buf += part[i]
            i += 1
    out.append(buf.strip())
    if any(not t for t in out[::2]):
        raise GraphError(f"cannot parse edge chain {part!r}")
    return out


# graph families -------------------------------------------------------------


def is_chain_graph(g: MixedGraph) -> bool:
    """True iff ``g`` has only ``--``/``->`` edges and no semidirected cycle.

    Raises :class:`GraphError` if ``g`` has a bidirected edge.
    """
    if g.has_bidirected:
        raise GraphError("chain graphs have no bidirected edges")
    return semidirected_cycle(g) is None


def semidirected_cycle(g: MixedGraph) -> list[str] | None:
    """A descending cycle through at least one directed edge, or None."""
    for u, tok, v in g.edges:
        if tok != DIRECTED:
            continue
        # search a descending route from v back to u
        prev = {v: None}
        queue = deque([v])
        while queue:
            w = queue.popleft()
            if w == u:
                back = []
                while w is not None:
                    back.append(w)
                    w = prev[w]
                # u -> v, then the descending route from v back to u
                return [u] + back[::-1]
            for x, t in g.incident(w).items():
                if t in ("->", "--") and x not in prev:
                    prev[x] = w
                    queue.append(x)
    return None


def mccg_violations(g: MixedGraph) -> list[tuple]:
    """List the ways ``g`` fails to be a maximal covariance-concentration graph.

    Entries are ``("C1", (a, c, b), d)`` for an induced ``a -- c -- b``
    whose middle node has the spouse ``d``, and ``("C2", (a, b))`` for a
    bidirected edge ``a <-> b`` closing a cycle with an undirected path.
    """
    if g.has_directed:
        raise GraphError("covariance-concentration graphs have no directed edges")
    out = []
    for c in g.nodes:
        sp = sorted(g.spouses(c))
        if not sp:
            continue
        ne = sorted(g.neighbors(c))
        for a, b in combinations(ne, 2):
            if not g.adjacent(a, b):
                for d in sp:
                    out.append(("C1", (a, c, b), d))
    comp = {}
    for i, k in enumerate(g.undirected_components()):
        for n in k:
            comp[n] = i
    for u, tok, v in g.edges:
        if tok == BIDIRECTED and comp[u] == comp[v]:
            out.append(("C2", (u, v)))
    return out


def is_mccg(g: MixedGraph) -> bool:
    return not mccg_violations(g)


def _triplex_centres(g: MixedGraph, allowed: tuple[str, str]) -> Iterator[tuple[str, str, str]]:
    for b in g.nodes:
        inc = g.incident(b)
        for a, c in combinations(inc, 2):
            if g.adjacent(a, c):
                continue
            yield a, b, c


def triplexes(g: MixedGraph) -> set[tuple[frozenset[str], str]]:
    """Triplexes ``({a, c}, b)`` of a chain graph or covariance-concentration graph.

    A triplex is an induced ``a _ b _ c`` with ``a, c`` non-adjacent where
    both edge ends at ``b`` are arrowheads or lines and at least one is an
    arrowhead. For chain graphs this is ``a->b<-c``, ``a->b--c`` and
    ``a--b<-c``; for covariance-concentration graphs ``a<->b<->c``,
    ``a<->b--c`` and ``a--b<->c``.
    """
    out = set()
    for a, b, c in _triplex_centres(g, ()):
        ma, mc = g.end_mark(b, a), g.end_mark(b, c)
        if TAIL in (ma, mc):
            continue
        if ARROW in (ma, mc):
            out.add((frozenset((a, c)), b))
    return out


def flags(g: MixedGraph) -> set[tuple[str, str, str]]:
    """Induced ``a -> b -- c`` subgraphs, as ``(a, b, c)``."""
    out = set()
    for a, b, c in _triplex_centres(g, ()):
        for x, y in ((a, c), (c, a)):
            if g.edge(x, b) == DIRECTED and g.edge(b, y) == UNDIRECTED:
                out.add((x, b, y))
    return out


def immoralities(g: MixedGraph) -> set[tuple[frozenset[str], str]]:
    """Induced ``a -> b <- c`` subgraphs, as ``({a, c}, b)``."""
    out = set()
    for a, b, c in _triplex_centres(g, ()):
        if g.edge(a, b) == DIRECTED and g.edge(c, b) == DIRECTED:
            out.add((frozenset((a, c)), b))
    return out


def marginalize_mccg(g: MixedGraph, keep: Iterable[str]) -> MixedGraph:
    """Marginal covariance-concentration graph over ``keep``.

    Start from the induced subgraph on ``keep`` and add ``a -- b`` whenever
    ``g`` has an undirected path from ``a`` to ``b`` whose interior nodes are
    all marginalized out.
    """
    if not is_mccg(g):
        raise GraphError("marginalize_mccg needs a maximal covariance-concentration graph")
    u = g._as_set(keep)
    base = g.induced_subgraph(u)
    extra = []
    for a in sorted(u):
        # undirected reachability through removed nodes only
        seen = {a}
        queue = deque([a])
        while queue:
            v = queue.popleft()
            for w, tok in g.incident(v).items():
                if tok != UNDIRECTED or w in seen:
                    continue
                seen.add(w)
                if w in u:
                    if w > a and not base.adjacent(a, w):
                        extra.append((a, UNDIRECTED, w))
                else:
                    queue.append(w)
    return base.with_edges(extra)


def has_mixed_cycle(g: MixedGraph) -> bool:
    """True iff some cycle of ``g`` uses both an undirected and a bidirected edge."""
    import networkx as nx

    skel = nx.Graph()
    skel.add_nodes_from(g.nodes)
    skel.add_edges_from((u, v) for u, _, v in g.edges)
    for block in nx.biconnected_component_edges(skel):
        block = list(block)
        if len(block) < 3:
            continue
        kinds = {g.edge(a, b) for a, b in block}
        if UNDIRECTED in kinds and BIDIRECTED in kinds:
            return True
    return False


def is_forest(g: MixedGraph) -> bool:
    """True iff the skeleton of ``g`` has no cycle."""
    parent = {n: n for n in g.nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, _, v in g.edges:
        ru, rv = find(u), find(v)
        if ru == rv:
            return False
        parent[ru] = rv
    return True
