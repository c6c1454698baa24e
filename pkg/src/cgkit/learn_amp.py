"""Constraint-based learning of AMP chain graphs.

The learner finds adjacencies with a PC-style search, then blocks edge ends
with four rules until nothing changes, and finally turns blocked edges into
directed or undirected edges.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Iterable

from .graph import DIRECTED, UNDIRECTED, MixedGraph, semidirected_cycle

CIRCLE = "o"
BLOCK = "|"


class SeparatorTable(dict):
    """Map from unordered node pairs to the separator that removed their edge."""

    def set(self, a: str, b: str, s: Iterable[str]) -> None:
        self[frozenset((a, b))] = frozenset(s)

    def get_sep(self, a: str, b: str) -> frozenset | None:
        return self.get(frozenset((a, b)))

    def to_json_dict(self) -> dict:
        out = {}
        for pair, s in self.items():
            a, b = sorted(pair)
            out[f"{a}|{b}"] = sorted(s)
        return dict(sorted(out.items()))


class MarkedGraph:
    """Undirected skeleton whose edge ends carry a circle or a block."""

    def __init__(self, nodes: Iterable[str], pairs: Iterable[tuple[str, str]] = ()):
        self.nodes = tuple(sorted(nodes))
        self.adj: dict[str, set[str]] = {v: set() for v in self.nodes}
        # marks[(a, b)] is the mark at a's end of the edge a - b
        self.marks: dict[tuple[str, str], str] = {}
        for a, b in pairs:
            self.add(a, b)

    @classmethod
    def complete(cls, nodes) -> "MarkedGraph":
        nodes = sorted(nodes)
        return cls(nodes, combinations(nodes, 2))

    def add(self, a: str, b: str) -> None:
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.marks[(a, b)] = CIRCLE
        self.marks[(b, a)] = CIRCLE

    def remove(self, a: str, b: str) -> None:
        self.adj[a].discard(b)
        self.adj[b].discard(a)
        self.marks.pop((a, b), None)
        self.marks.pop((b, a), None)

    def adjacent(self, a: str, b: str) -> bool:
        return b in self.adj[a]

    def ad(self, x: Iterable[str]) -> set[str]:
        xs = set(x)
        out = set()
        for v in xs:
            out |= self.adj[v]
        return out - xs

    def mark(self, at: str, other: str) -> str:
        return self.marks[(at, other)]

    def blocked(self, at: str, other: str) -> bool:
        return self.marks[(at, other)] == BLOCK

    def block(self, at: str, other: str) -> bool:
        """Place a block at ``at``'s end; report whether anything changed."""
        if self.marks[(at, other)] == BLOCK:
            return False
        self.marks[(at, other)] = BLOCK
        return True

    def pairs(self) -> list[tuple[str, str]]:
        return sorted((a, b) for (a, b) in self.marks if a < b)

    def copy(self) -> "MarkedGraph":
        h = MarkedGraph(self.nodes)
        h.adj = {v: set(s) for v, s in self.adj.items()}
        h.marks = dict(self.marks)
        return h

    def __repr__(self) -> str:
        body = ", ".join(f"{a}{self.mark(a, b)}-{self.mark(b, a)}{b}" for a, b in self.pairs())
        return f"MarkedGraph({body})"


# rules ---------------------------------------------------------------------


def _r1(h: MarkedGraph, sep: SeparatorTable, log) -> bool:
    changed = False
    for b in h.nodes:
        for a, c in combinations(sorted(h.adj[b]), 2):
            if h.adjacent(a, c):
                continue
            s = sep.get_sep(a, c)
            if s is not None and b not in s:
                for at, other in ((a, b), (c, b)):
                    if h.block(at, other):
                        changed = True
                        log.append(("R1", at, other))
    return changed


def _r2(h: MarkedGraph, sep: SeparatorTable, log) -> bool:
    changed = False
    for b in h.nodes:
        nb = sorted(h.adj[b])
        for a in nb:
            if not h.blocked(a, b):
                continue
            for c in nb:
                if c == a or h.adjacent(a, c):
                    continue
                s = sep.get_sep(a, c)
                if s is not None and b in s and h.block(b, c):
                    changed = True
                    log.append(("R2", b, c))
    return changed


def _chordless_chains(h: MarkedGraph, a: str, b: str):
    """Paths ``a = v1, ..., vk = b`` (k >= 3) with every edge blocked at its
    start that close a chordless cycle with the edge ``a - b``."""
    path = [a]

    def rec(v):
        for w in sorted(h.adj[v]):
            if w in path or not h.blocked(v, w):
                continue
            # no chord from w to any earlier path node except its predecessor,
            # and a may only touch w when w closes the cycle at b
            bad = False
            for u in path[:-1]:
                if h.adjacent(u, w) and not (u == a and w == b):
                    bad = True
                    break
            if bad:
                continue
            if w == b:
                if len(path) >= 2:
                    yield path + [w]
                continue
            path.append(w)
            yield from rec(w)
            path.pop()

    yield from rec(a)


def _r3(h: MarkedGraph, sep: SeparatorTable, log) -> bool:
    changed = False
    for a, b in h.pairs():
        for x, y in ((a, b), (b, a)):
            if h.blocked(x, y):
                continue
            for _ in _chordless_chains(h, x, y):
                h.block(x, y)
                changed = True
                log.append(("R3", x, y))
                break
    return changed


def _r4(h: MarkedGraph, sep: SeparatorTable, log) -> bool:
    changed = False
    for a in h.nodes:
        for b in sorted(h.adj[a]):
            if h.blocked(a, b):
                continue
            cands = sorted(v for v in h.adj[a] & h.adj[b] if h.blocked(v, b))
            for c, d in combinations(cands, 2):
                if h.adjacent(c, d):
                    continue
                s = sep.get_sep(c, d)
                if s is not None and a in s:
                    h.block(a, b)
                    changed = True
                    log.append(("R4", a, b))
                    break
    return changed


RULES: dict[str, Callable] = {"R1": _r1, "R2": _r2, "R3": _r3, "R4": _r4}


def apply_rules(h: MarkedGraph, sep: SeparatorTable, order: Iterable[str] = ("R1", "R2", "R3", "R4"),
                log: list | None = None, rules: dict | None = None) -> MarkedGraph:
    """Apply the blocking rules in passes until a full pass adds no block.

    The input graph is left untouched; a new marked graph is returned.
    ``log`` collects ``(rule, at, other)`` for every block placed.
    """
    rules = RULES if rules is None else rules
    h = h.copy()
    if log is None:
        log = []
    order = list(order)
    while True:
        changed = False
        for name in order:
            if rules[name](h, sep, log):
                changed = True
        if not changed:
            return h


def finalize(h: MarkedGraph) -> MixedGraph:
    """Edges blocked at exactly one end point away from the block; others stay undirected."""
    edges = []
    for a, b in h.pairs():
        ma, mb = h.mark(a, b), h.mark(b, a)
        if ma == BLOCK and mb == CIRCLE:
            edges.append((a, DIRECTED, b))
        elif mb == BLOCK and ma == CIRCLE:
            edges.append((b, DIRECTED, a))
        else:
            edges.append((a, UNDIRECTED, b))
    return MixedGraph(h.nodes, edges)


# skeleton ------------------------------------------------------------------


class LearningError(RuntimeError):
    """The learner produced a graph outside the target family.

    ``graph`` holds the offending output and ``diagnostics`` a description.
    """

    def __init__(self, message: str, graph: MixedGraph, diagnostics=None, separators=None):
        super().__init__(message)
        self.graph = graph
        self.diagnostics = diagnostics
        self.separators = separators


def _skeleton_search(h, oracle, pool_fn, remove) -> SeparatorTable:
    sep = SeparatorTable()
    nodes = h.nodes
    n = len(nodes)
    for l in range(0, max(n - 1, 0)):
        for a in nodes:
            for b in nodes:
                if a == b or not h.adjacent(a, b):
                    continue
                pool = sorted(pool_fn(h, a) - {a, b})
                if len(pool) < l:
                    continue
                for s in combinations(pool, l):
                    if oracle.query(a, b, s):
                        sep.set(a, b, s)
                        remove(a, b)
                        break
    return sep


def amp_pool(h: MarkedGraph, a: str) -> set[str]:
    first = h.ad({a})
    return first | h.ad(first)


def learn_amp_skeleton(oracle, nodes: Iterable[str]) -> tuple[MarkedGraph, SeparatorTable]:
    h = MarkedGraph.complete(nodes)
    sep = _skeleton_search(h, oracle, amp_pool, h.remove)
    return h, sep


@dataclass
class AmpResult:
    graph: MixedGraph
    separators: SeparatorTable
    marked: MarkedGraph
    log: list = field(default_factory=list)


def learn_amp(oracle, nodes: Iterable[str] | None = None, order=("R1", "R2", "R3", "R4"),
              rules: dict | None = None, detail: bool = False):
    """Learn an AMP chain graph from independence queries.

    Parameters
    ----------
    oracle
        Object with ``query(a, b, s) -> bool``.
    nodes : iterable of str, optional
        Variables; defaults to ``oracle.nodes``.

    Returns
    -------
    (MixedGraph, SeparatorTable), or an :class:`AmpResult` with ``detail``.

    Raises
    ------
    LearningError
        If the final graph has a semidirected cycle, which can only happen
        with an oracle that no chain graph is faithful to.
    """
    nodes = oracle.nodes if nodes is None else tuple(sorted(nodes))
    h, sep = learn_amp_skeleton(oracle, nodes)
    log: list = []
    h = apply_rules(h, sep, order, log, rules)
    g = finalize(h)
    cyc = semidirected_cycle(g)
    if cyc is not None:
        raise LearningError("learned graph has a semidirected cycle", g, {"cycle": cyc}, sep)
    if detail:
        return AmpResult(g, sep, h, log)
    return g, sep
