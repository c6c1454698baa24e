"""Exhaustive and random generation of small chain graphs and MCCGs."""

from __future__ import annotations

import random
import string
from itertools import combinations, product
from typing import Iterator

from .graph import BIDIRECTED, DIRECTED, UNDIRECTED, MixedGraph, is_chain_graph, is_forest, is_mccg


def node_names(n: int) -> list[str]:
    if n > 26:
        return [f"V{i}" for i in range(n)]
    return list(string.ascii_uppercase[:n])


def _assignments(nodes, choices) -> Iterator[MixedGraph]:
    pairs = list(combinations(nodes, 2))
    for combo in product(range(len(choices)), repeat=len(pairs)):
        edges = []
        for (a, b), c in zip(pairs, combo):
            tok = choices[c]
            if tok is None:
                continue
            if tok == "<-":
                edges.append((b, DIRECTED, a))
            else:
                edges.append((a, tok, b))
        yield MixedGraph(nodes, edges)


def all_cgs(n: int) -> Iterator[MixedGraph]:
    """Every chain graph over the first ``n`` letters."""
    for g in _assignments(node_names(n), (None, UNDIRECTED, DIRECTED, "<-")):
        if is_chain_graph(g):
            yield g


def all_ccgs(n: int) -> Iterator[MixedGraph]:
    """Every covariance-concentration graph (maximal or not) over ``n`` nodes."""
    yield from _assignments(node_names(n), (None, UNDIRECTED, BIDIRECTED))


def all_mccgs(n: int) -> Iterator[MixedGraph]:
    for g in all_ccgs(n):
        if is_mccg(g):
            yield g


def graphs_up_to(n: int, kind: str) -> Iterator[MixedGraph]:
    """All graphs of ``kind`` (``"cg"`` or ``"mccg"``) over 1..n nodes."""
    gen = all_cgs if kind == "cg" else all_mccgs
    for k in range(1, n + 1):
        yield from gen(k)


def all_mccg_forests(n: int) -> Iterator[MixedGraph]:
    """MCCGs over ``n`` nodes whose skeleton has no cycle."""
    for g in all_mccgs(n):
        if is_forest(g):
            yield g


def random_cg(n: int, rng: random.Random, p_edge: float = 0.5, p_undirected: float = 0.4) -> MixedGraph:
    """Random chain graph drawn through a random ordered block partition.

    Nodes are shuffled and cut into consecutive blocks. Pairs inside a block
    may get an undirected edge; pairs across blocks may get a directed edge
    pointing to the later block. No semidirected cycle can arise.
    """
    nodes = node_names(n)
    order = nodes[:]
    rng.shuffle(order)
    block = {}
    b = 0
    for i, v in enumerate(order):
        if i and rng.random() > p_undirected:
            b += 1
        block[v] = b
    edges = []
    for a, c in combinations(order, 2):
        if rng.random() >= p_edge:
            continue
        if block[a] == block[c]:
            edges.append((a, UNDIRECTED, c))
        else:
            edges.append((a, DIRECTED, c))
    return MixedGraph(nodes, edges)


def random_mccg(n: int, rng: random.Random, p_edge: float = 0.5, p_bidirected: float = 0.5,
                max_tries: int = 100000) -> MixedGraph:
    """Random MCCG by rejection from independent edge draws."""
    nodes = node_names(n)
    pairs = list(combinations(nodes, 2))
    for _ in range(max_tries):
        edges = []
        for a, c in pairs:
            if rng.random() < p_edge:
                edges.append((a, BIDIRECTED if rng.random() < p_bidirected else UNDIRECTED, c))
        g = MixedGraph(nodes, edges)
        if is_mccg(g):
            return g
    raise RuntimeError("could not draw a maximal graph")


def random_graphs(kind: str, count: int, sizes=(5, 6), seed: int = 0) -> list[MixedGraph]:
    """``count`` seeded random graphs whose sizes cycle through ``sizes``."""
    rng = random.Random(seed)
    out = []
    for i in range(count):
        n = sizes[i % len(sizes)]
        out.append(random_cg(n, rng) if kind == "cg" else random_mccg(n, rng))
    return out

