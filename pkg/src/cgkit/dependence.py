"""Reading dependences off an MCCG through uniquely open paths."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .closure import Codec, dependence_base, full_model, wtc_dependence_closure
from .graph import GraphError, MixedGraph, has_mixed_cycle, is_forest, is_mccg
from .separation import _query, ccg_path_open, simple_paths


@dataclass(frozen=True)
class JoinWitness:
    a: str
    b: str
    path: tuple[str, ...]
    u: frozenset

    def describe(self) -> str:
        return f"path={','.join(self.path)} U={{{','.join(sorted(self.u))}}}"


def _check_graph(g: MixedGraph) -> None:
    if not is_mccg(g):
        raise GraphError("dependence reading needs a maximal covariance-concentration graph")
    if has_mixed_cycle(g):
        raise GraphError("graph has a cycle with both undirected and bidirected edges")


def canonical_u(g: MixedGraph, x, y, z, path) -> frozenset:
    """Conditioning set for a candidate path.

    It holds ``z`` plus every other node of ``x`` and ``y`` that lies on the
    path or has no spouse, with the path's two endpoints left out.
    """
    a, b = path[0], path[-1]
    on = set(path)
    extra = {c for c in (set(x) | set(y)) - {a, b} if c in on or not g.spouses(c)}
    return frozenset(z) | extra


def _open_count(paths, g, u, limit=2) -> int:
    k = 0
    for p in paths:
        if ccg_path_open(g, p, u):
            k += 1
            if k >= limit:
                break
    return k


def joined(g: MixedGraph, x, y, z=(), check: bool = True) -> tuple[bool, JoinWitness | None]:
    """Decide whether ``x`` is joined to ``y`` given ``z``.

    Some ``a`` in ``x`` and ``b`` in ``y`` must be linked by a path that is
    open given its canonical conditioning set ``U`` while no other path
    between them is open given ``U``. Openness uses the general
    covariance-concentration definition, where a non-triplex node in ``U``
    is allowed when it has a spouse.

    Returns
    -------
    (bool, JoinWitness or None)
        The witness is the first one in the order: ``(a, b)``
        lexicographic, then shorter paths, then lexicographic node sequence.
    """
    if check:
        _check_graph(g)
    xs, ys, zs = _query(g, x, y, z)
    outside = xs | ys
    for a in sorted(xs):
        for b in sorted(ys):
            paths = simple_paths(g, a, b)
            ordered = sorted(paths, key=lambda p: (len(p), p))
            for p in ordered:
                # endpoints are the only nodes of x and y on the witness
                if any(v in outside for v in p[1:-1]):
                    continue
                u = canonical_u(g, xs, ys, zs, p)
                if not ccg_path_open(g, p, u):
                    continue
                if _open_count(paths, g, u) == 1:
                    w = JoinWitness(a, b, tuple(p), u)
                    assert w.path[0] in xs and w.path[-1] in ys
                    return True, w
    return False, None


def joined_any_u(g: MixedGraph, x, y, z=()) -> bool:
    """Reference version that tries every admissible ``U`` and every path."""
    xs, ys, zs = _query(g, x, y, z)
    for a in sorted(xs):
        for b in sorted(ys):
            free = sorted((xs | ys) - {a, b})
            paths = simple_paths(g, a, b)
            for r in range(len(free) + 1):
                for extra in combinations(free, r):
                    u = zs | frozenset(extra)
                    if _open_count(paths, g, u) == 1:
                        return True
    return False


@dataclass
class DependenceReport:
    graph: MixedGraph
    n_checked: int = 0
    only_joined: list = field(default_factory=list)
    only_closure: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.only_joined and not self.only_closure


def verify_sound_complete(g: MixedGraph, bound: int = 5) -> DependenceReport:
    """Compare ``joined`` with the WTC dependence closure on every statement."""
    _check_graph(g)
    if len(g.nodes) > bound:
        raise GraphError(f"graph has more than {bound} nodes")
    sep = full_model(g, "mccg")
    closure = wtc_dependence_closure(dependence_base(g), sep)
    codec: Codec = sep.codec
    rep = DependenceReport(g)
    for code in codec.all_codes():
        if not codec.is_canonical(code):
            continue
        t = codec.decode(code)
        j, _ = joined(g, *t, check=False)
        c = code in closure.codes
        rep.n_checked += 1
        if j and not c:
            rep.only_joined.append(t)
        elif c and not j:
            rep.only_closure.append(t)
    return rep


def faithful_if_acyclic(g: MixedGraph) -> bool:
    """For a forest, check that every non-separation is a joined statement."""
    if not is_forest(g):
        raise GraphError("graph has a cycle")
    _check_graph(g)
    sep = full_model(g, "mccg")
    codec = sep.codec
    for code in codec.all_codes():
        if not codec.is_canonical(code):
            continue
        t = codec.decode(code)
        j, _ = joined(g, *t, check=False)
        if j == (code in sep.codes):
            return False
    return True
