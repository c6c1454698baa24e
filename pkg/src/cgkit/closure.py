"""Finite independence models, separation bases and WTC graphoid closures.

Statements ``X _|_ Y | Z`` over a fixed node universe are packed into
integers: with nodes indexed in sorted order, ``X``, ``Y`` and ``Z`` become
bitmasks and the statement is ``x | y << n | z << 2n``. Models always hold
both orientations of every statement; canonical triples put the set with the
smallest node first.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .graph import GraphError, MixedGraph, is_chain_graph, is_mccg
from .separation import mag_separated

MAX_NODES = 7

Triple = tuple[frozenset, frozenset, frozenset]


class Codec:
    """Packing of ``(X, Y, Z)`` node-set triples into integers."""

    def __init__(self, nodes: Iterable[str]):
        self.nodes = tuple(sorted(nodes))
        self.n = len(self.nodes)
        self.index = {v: i for i, v in enumerate(self.nodes)}
        self.full = (1 << self.n) - 1
        # all non-empty submasks of every mask, smallest first
        self._subs = [self._submasks(m) for m in range(1 << self.n)]

    @staticmethod
    def _submasks(m: int) -> tuple[int, ...]:
        out = []
        s = m
        while s:
            out.append(s)
            s = (s - 1) & m
        return tuple(sorted(out))

    def subs(self, m: int) -> tuple[int, ...]:
        return self._subs[m]

    def mask(self, s) -> int:
        if isinstance(s, str):
            s = (s,)
        m = 0
        for v in s:
            try:
                m |= 1 << self.index[v]
            except KeyError:
                raise GraphError(f"unknown node {v!r}") from None
        return m

    def unmask(self, m: int) -> frozenset:
        return frozenset(self.nodes[i] for i in range(self.n) if m >> i & 1)

    def pack(self, x: int, y: int, z: int) -> int:
        n = self.n
        return x | (y << n) | (z << (2 * n))

    def unpack(self, code: int) -> tuple[int, int, int]:
        n, f = self.n, self.full
        return code & f, (code >> n) & f, code >> (2 * n)

    def encode(self, x, y, z=()) -> int:
        xm, ym, zm = self.mask(x), self.mask(y), self.mask(z)
        if not xm or not ym or xm & ym or xm & zm or ym & zm:
            raise GraphError("need non-empty, pairwise disjoint X and Y, and Z disjoint from both")
        return self.pack(xm, ym, zm)

    def decode(self, code: int) -> Triple:
        x, y, z = self.unpack(code)
        return self.unmask(x), self.unmask(y), self.unmask(z)

    def swap(self, code: int) -> int:
        x, y, z = self.unpack(code)
        return self.pack(y, x, z)

    def size(self) -> int:
        return 1 << (3 * self.n)

    def all_codes(self) -> Iterator[int]:
        """Every valid ordered statement over the universe."""
        f = self.full
        for x in range(1, f + 1):
            for y in self._subs[f & ~x]:
                rest = f & ~x & ~y
                yield self.pack(x, y, 0)
                for z in self._subs[rest]:
                    yield self.pack(x, y, z)

    def is_canonical(self, code: int) -> bool:
        x, y, _ = self.unpack(code)
        return (x & -x) < (y & -y)


def format_triple(t: Triple) -> str:
    return "|".join(",".join(sorted(s)) for s in t)


class IndependenceModel:
    """A set of statements ``X _|_ Y | Z`` over a fixed node universe.

    Membership is symmetric in ``X`` and ``Y``. Iteration yields canonical
    triples in a fixed order.
    """

    def __init__(self, nodes: Iterable[str], codes: Iterable[int] = (), codec: Codec | None = None):
        self.codec = codec if codec is not None else Codec(nodes)
        sym = set()
        for c in codes:
            sym.add(c)
            sym.add(self.codec.swap(c))
        self.codes = frozenset(sym)

    @classmethod
    def from_triples(cls, nodes, triples: Iterable) -> "IndependenceModel":
        codec = Codec(nodes)
        return cls(codec.nodes, (codec.encode(*t) for t in triples), codec)

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.codec.nodes

    def contains(self, x, y, z=()) -> bool:
        return self.codec.encode(x, y, z) in self.codes

    def __contains__(self, triple) -> bool:
        return self.contains(*triple)

    def __len__(self) -> int:
        return sum(1 for c in self.codes if self.codec.is_canonical(c))

    def triples(self) -> list[Triple]:
        out = [self.codec.decode(c) for c in self.codes if self.codec.is_canonical(c)]
        out.sort(key=lambda t: (len(t[2]), sorted(t[2]), len(t[0]), sorted(t[0]), len(t[1]), sorted(t[1])))
        return out

    def __iter__(self):
        return iter(self.triples())

    def __eq__(self, other) -> bool:
        if not isinstance(other, IndependenceModel):
            return NotImplemented
        return self.nodes == other.nodes and self.codes == other.codes

    def __le__(self, other: "IndependenceModel") -> bool:
        return self.nodes == other.nodes and self.codes <= other.codes

    def __hash__(self) -> int:
        return hash((self.nodes, self.codes))

    def __repr__(self) -> str:
        return f"IndependenceModel({len(self)} statements over {','.join(self.nodes)})"

    def lines(self) -> list[str]:
        return [format_triple(t) for t in self.triples()]

    def difference(self, other: "IndependenceModel") -> list[Triple]:
        return [self.codec.decode(c) for c in sorted(self.codes - other.codes) if self.codec.is_canonical(c)]


# models induced by graphs ---------------------------------------------------


def full_model(g: MixedGraph, kind: str | None = None) -> IndependenceModel:
    """Every separation statement of ``g`` under the chosen criterion.

    ``kind`` is ``"amp"``, ``"mccg"`` or ``"mag"``; by default chain graphs
    use ``amp`` and graphs with bidirected edges use ``mccg``.
    """
    if len(g.nodes) > MAX_NODES:
        raise GraphError(f"full_model supports at most {MAX_NODES} nodes")
    if kind is None:
        kind = "mccg" if g.has_bidirected else "amp"
    codec = Codec(g.nodes)
    codes = []
    f = codec.full
    if kind in ("amp", "mccg"):
        if kind == "amp" and not is_chain_graph(g):
            raise GraphError("graph has a semidirected cycle")
        if kind == "mccg" and not is_mccg(g):
            raise GraphError("graph is not a maximal covariance-concentration graph")
        # reachability from a singleton given z, combined over the nodes of x
        single = {}
        for i in range(codec.n):
            xi = 1 << i
            for z in (0,) + codec.subs(f & ~xi):
                single[xi, z] = _reach_single(g, codec, i, z)
        for x in range(1, f + 1):
            for z in (0,) + codec.subs(f & ~x):
                reach = 0
                m = x
                while m:
                    low = m & -m
                    reach |= single[low, z]
                    m ^= low
                reach &= ~x
                for y in codec.subs(f & ~x & ~z):
                    if not y & reach:
                        codes.append(codec.pack(x, y, z))
    elif kind == "mag":
        for c in codec.all_codes():
            if mag_separated(g, *codec.decode(c)):
                codes.append(c)
    else:
        raise GraphError(f"unknown separation kind {kind!r}")
    return IndependenceModel(codec.nodes, codes, codec)


def _reach_single(g: MixedGraph, codec: Codec, i: int, z: int) -> int:
    # routes may pass through other nodes of X; reaching one of them is
    # harmless because X and Y are disjoint
    from .separation import _MARK, _REVERSE, head_no_tail

    a = codec.nodes[i]
    zs = codec.unmask(z)
    seen = set()
    stack = []
    for w, tok in g.incident(a).items():
        s = (w, _MARK[_REVERSE[tok]])
        seen.add(s)
        stack.append(s)
    reach = 0
    while stack:
        b, arr = stack.pop()
        reach |= 1 << codec.index[b]
        in_z = b in zs
        for c, tok in g.incident(b).items():
            if head_no_tail(arr, _MARK[tok]) != in_z:
                continue
            s = (c, _MARK[_REVERSE[tok]])
            if s not in seen:
                seen.add(s)
                stack.append(s)
    return reach & ~z


# separation bases -----------------------------------------------------------


def local_separation_base(g: MixedGraph) -> set[Triple]:
    """``A _|_ B`` across undirected components, ``A _|_ B | ne(A)`` within one."""
    if not is_mccg(g):
        raise GraphError("local separation base needs a maximal covariance-concentration graph")
    comp = {}
    for k in g.undirected_components():
        for v in k:
            comp[v] = k
    out = set()
    for a in g.nodes:
        for b in g.nodes:
            if a == b or g.adjacent(a, b):
                continue
            z = frozenset() if comp[a] != comp[b] else frozenset(g.neighbors(a))
            # fold symmetric duplicates: the smaller node goes first
            lo, hi = sorted((a, b))
            out.add((frozenset([lo]), frozenset([hi]), z))
    return out


def check_partition(g: MixedGraph, partition) -> list[frozenset]:
    """Validate that ``partition`` covers the nodes and is consistent with ``g``."""
    parts = [frozenset(p) for p in partition]
    seen = set()
    for p in parts:
        if not p or p & seen:
            raise GraphError("partition blocks must be non-empty and disjoint")
        seen |= p
    if seen != set(g.nodes):
        raise GraphError("partition must cover exactly the graph's nodes")
    where = {v: i for i, p in enumerate(parts) for v in p}
    for u, tok, v in g.edges:
        same = where[u] == where[v]
        if tok == "--" and not same:
            raise GraphError(f"undirected edge {u}--{v} crosses partition blocks")
        if tok == "<->" and same:
            raise GraphError(f"bidirected edge {u}<->{v} lies inside a partition block")
    return parts


def pairwise_separation_base(g: MixedGraph, partition=None) -> set[Triple]:
    """``A _|_ B`` across blocks, ``A _|_ B | Q - {A, B}`` inside a block ``Q``.

    ``partition`` defaults to the undirected connectivity components.
    """
    if not is_mccg(g):
        raise GraphError("pairwise separation base needs a maximal covariance-concentration graph")
    parts = check_partition(g, g.undirected_components() if partition is None else partition)
    where = {v: p for p in parts for v in p}
    out = set()
    for a, b in combinations(g.nodes, 2):
        if g.adjacent(a, b):
            continue
        if where[a] != where[b]:
            out.add((frozenset([a]), frozenset([b]), frozenset()))
        else:
            out.add((frozenset([a]), frozenset([b]), where[a] - {a, b}))
    return out


# independence closure -------------------------------------------------------


class _Closure:
    """Worklist closure under the graphoid, composition and WT properties.

    Weak transitivity has a disjunctive consequent. Its instances whose
    consequent is not yet satisfied are collected; once the Horn rules reach
    a fixpoint, an unresolved instance is split into its two alternatives and
    the result is the intersection of the two branch closures. This is the
    set of statements that hold in every WTC graphoid containing the base.
    """

    def __init__(self, codec: Codec):
        self.c = codec
        self.branches = 0

    def run(self, base: Iterable[int]) -> set[int]:
        member = bytearray(self.c.size())
        pending: list[tuple[int, int]] = []
        self._saturate(member, list(base), pending)
        return self._resolve(member, pending)

    def _resolve(self, member: bytearray, pending: list) -> set[int]:
        for d1, d2 in pending:
            if not member[d1] and not member[d2]:
                self.branches += 1
                out = None
                for d in (d1, d2):
                    m = bytearray(member)
                    p = list(pending)
                    self._saturate(m, [d], p)
                    got = self._resolve(m, p)
                    out = got if out is None else out & got
                return out
        return {i for i, v in enumerate(member) if v}

    def _saturate(self, member: bytearray, new: list[int], pending: list) -> None:
        c = self.c
        n, f = c.n, c.full
        n2 = 2 * n
        subs = c._subs
        work = []

        def add(code):
            if not member[code]:
                member[code] = 1
                work.append(code)

        for code in new:
            add(code)
            add(c.swap(code))
        while work:
            code = work.pop()
            x = code & f
            y = (code >> n) & f
            z = code >> n2
            rest = f & ~(x | y | z)
            # symmetry
            add(y | (x << n) | (z << n2))
            for w in subs[y]:
                if w == y:
                    continue
                y1 = y & ~w
                # decomposition and weak union
                add(x | (y1 << n) | (z << n2))
                add(x | (y1 << n) | ((z | w) << n2))
            for w in subs[z]:
                z0 = z & ~w
                # contraction with this statement as X _|_ Y | Z0 u W
                if member[x | (w << n) | (z0 << n2)]:
                    add(x | ((y | w) << n) | (z0 << n2))
                # intersection with this statement as X _|_ Y | Z0 u W
                if member[x | (w << n) | ((z0 | y) << n2)]:
                    add(x | ((y | w) << n) | (z0 << n2))
            for w in subs[rest]:
                # contraction with this statement as X _|_ W | Z
                if member[x | (w << n) | ((z | y) << n2)]:
                    add(x | ((y | w) << n) | (z << n2))
                # composition
                if member[x | (w << n) | (z << n2)]:
                    add(x | ((y | w) << n) | (z << n2))
            # weak transitivity: X_|_Y|Z and X_|_Y|Z+K give X_|_K|Z or K_|_Y|Z
            m = rest
            while m:
                k = m & -m
                m ^= k
                if member[x | (y << n) | ((z | k) << n2)]:
                    pending.append((x | (k << n) | (z << n2), k | (y << n) | (z << n2)))
            m = z
            while m:
                k = m & -m
                m ^= k
                z0 = z & ~k
                if member[x | (y << n) | (z0 << n2)]:
                    pending.append((x | (k << n) | (z0 << n2), k | (y << n) | (z0 << n2)))


def wtc_closure(base: Iterable, nodes: Iterable[str], max_nodes: int = 6) -> IndependenceModel:
    """Least set containing ``base`` that is closed under the seven WTC properties.

    Parameters
    ----------
    base : iterable of (X, Y, Z)
        Statements as node-set triples.
    nodes : iterable of str
        The universe ``V``.
    """
    codec = Codec(nodes)
    if codec.n > max_nodes:
        raise GraphError(f"closure supports at most {max_nodes} nodes")
    codes = [codec.encode(*t) for t in base]
    closed = _Closure(codec).run(codes)
    return IndependenceModel(codec.nodes, closed, codec)


def wtc_closure_stats(base: Iterable, nodes: Iterable[str]) -> tuple[IndependenceModel, int]:
    """Like :func:`wtc_closure` but also return the number of case splits used."""
    codec = Codec(nodes)
    cl = _Closure(codec)
    closed = cl.run([codec.encode(*t) for t in base])
    return IndependenceModel(codec.nodes, closed, codec), cl.branches


def cl(g: MixedGraph) -> IndependenceModel:
    """Closure of the local separation base."""
    return wtc_closure(local_separation_base(g), g.nodes)


def cp(g: MixedGraph, partition=None) -> IndependenceModel:
    """Closure of the pairwise separation base relative to ``partition``."""
    return wtc_closure(pairwise_separation_base(g, partition), g.nodes)


# dependence closure ---------------------------------------------------------


def dependence_base(g: MixedGraph, use_neighbours: bool = False) -> set[Triple]:
    """Edge-wise dependences of an MCCG.

    ``A <-> B`` gives ``A ~ B``; ``A -- B`` gives ``A ~ B | K - {A, B}`` with
    ``K`` the undirected component, or ``A ~ B | ne(A) - B`` (and the same
    from ``B``'s side) when ``use_neighbours`` is set.
    """
    if not is_mccg(g):
        raise GraphError("dependence base needs a maximal covariance-concentration graph")
    out = set()
    for u, tok, v in g.edges:
        a, b = frozenset([u]), frozenset([v])
        if tok == "<->":
            out.add((a, b, frozenset()))
        elif use_neighbours:
            out.add((a, b, frozenset(g.neighbors(u) - {v})))
            out.add((b, a, frozenset(g.neighbors(v) - {u})))
        else:
            out.add((a, b, g.component_of(u) - {u, v}))
    return out


def wtc_dependence_closure(dep_base: Iterable, sep_model: IndependenceModel, max_nodes: int = 6) -> IndependenceModel:
    """Close a set of dependences under the nine contrapositive WTC rules.

    Independence antecedents are looked up in ``sep_model``. The result is
    returned as an :class:`IndependenceModel` whose statements are read as
    dependences.
    """
    codec = sep_model.codec
    if codec.n > max_nodes:
        raise GraphError(f"closure supports at most {max_nodes} nodes")
    n, f = codec.n, codec.full
    n2 = 2 * n
    subs = codec._subs
    ind = bytearray(codec.size())
    for code in sep_model.codes:
        ind[code] = 1
    dep = bytearray(codec.size())
    work = []

    def add(code):
        if not dep[code]:
            dep[code] = 1
            work.append(code)

    for t in dep_base:
        add(codec.encode(*t))
    while work:
        code = work.pop()
        x = code & f
        y = (code >> n) & f
        z = code >> n2
        rest = f & ~(x | y | z)
        # symmetry
        add(y | (x << n) | (z << n2))
        # decomposition: X~Y|Z gives X~Y+W|Z
        for w in subs[rest]:
            add(x | ((y | w) << n) | (z << n2))
        # weak union: X~Y|Z+W gives X~Y+W|Z
        for w in subs[z]:
            add(x | ((y | w) << n) | ((z & ~w) << n2))
        # rules whose dependent antecedent is X~Y1+W|Z
        for y1 in subs[y]:
            if y1 == y:
                continue
            w = y & ~y1
            # contraction1 and intersection share the antecedent X_|_Y1|Z+W
            if ind[x | (y1 << n) | ((z | w) << n2)]:
                add(x | (w << n) | (z << n2))
                add(x | (w << n) | ((z | y1) << n2))
            # contraction2: X_|_W|Z gives X~Y1|Z+W
            if ind[x | (w << n) | (z << n2)]:
                add(x | (y1 << n) | ((z | w) << n2))
            # composition: X_|_Y1|Z gives X~W|Z
            if ind[x | (y1 << n) | (z << n2)]:
                add(x | (w << n) | (z << n2))
        # weak transitivity with a single node K
        if y & (y - 1) == 0:
            # this statement is X~K|Z with K = y
            k = y
            for y2 in subs[f & ~(x | k | z)]:
                if dep[k | (y2 << n) | (z << n2)]:
                    if ind[x | (y2 << n) | (z << n2)]:
                        add(x | (y2 << n) | ((z | k) << n2))
                    if ind[x | (y2 << n) | ((z | k) << n2)]:
                        add(x | (y2 << n) | (z << n2))
        if x & (x - 1) == 0:
            # this statement is K~Y|Z with K = x
            k = x
            for x2 in subs[f & ~(k | y | z)]:
                if dep[x2 | (k << n) | (z << n2)]:
                    if ind[x2 | (y << n) | (z << n2)]:
                        add(x2 | (y << n) | ((z | k) << n2))
                    if ind[x2 | (y << n) | ((z | k) << n2)]:
                        add(x2 | (y << n) | (z << n2))
    return IndependenceModel(codec.nodes, [i for i, v in enumerate(dep) if v], codec)


# Markov conditions for chain graphs ----------------------------------------


def check_markov_c1c2(g: MixedGraph, oracle) -> dict[str, tuple[bool, bool]]:
    """Check the two node-wise Markov conditions of an AMP chain graph.

    For every node ``A``:

    * C1: ``A _|_ co(A) - A - ne(A) | pa(A u ne(A)) u ne(A)``
    * C2: ``A _|_ V - A - de(A) - pa(A) | pa(A)``

    ``oracle`` must offer ``independent(X, Y, Z)`` for node sets. A condition
    with an empty right-hand set holds vacuously.

    Returns
    -------
    dict
        Node name to the pair ``(C1 holds, C2 holds)``.
    """
    if not is_chain_graph(g):
        raise GraphError("Markov conditions are defined for chain graphs")
    out = {}
    for a in g.nodes:
        ne = g.neighbors(a)
        y1 = set(g.component_of(a)) - {a} - ne
        z1 = g.parents(ne | {a}) | ne
        ok1 = not y1 or oracle.independent({a}, y1, z1)
        pa = g.parents(a)
        y2 = set(g.nodes) - {a} - g.descendants(a) - pa
        ok2 = not y2 or oracle.independent({a}, y2, pa)
        out[a] = (ok1, ok2)
    return out
