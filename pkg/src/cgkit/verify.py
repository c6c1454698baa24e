"""Exhaustive property harness over all small graphs.

Each check enumerates every graph up to its own size limit (never above the
``bound`` passed to :func:`verify_all`) and records counterexamples. Checks
marked as warnings report order artifacts that do not affect correctness.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable

import networkx as nx

from .closure import Codec, cl, cp, check_partition, full_model, pairwise_separation_base, wtc_closure
from .dependence import joined, joined_any_u, verify_sound_complete, faithful_if_acyclic
from .enumeration import all_mccg_forests, all_mccgs, graphs_up_to, random_graphs
from .equivalence import blargest, enumerate_triplex_class, is_deflagged, triplex_equivalent
from .graph import MixedGraph, has_mixed_cycle, is_chain_graph, is_mccg, marginalize_mccg
from .learn_amp import RULES, LearningError, learn_amp
from .learn_mccg import fix_c1c2, learn_mccg, undirect_triples
from .oracle import ParameterizationError, exact_gaussian_oracle, gen_gaussian, graph_oracle
from .separation import (
    amp_separated,
    brute_force_amp_separated,
    latent_expand,
    mag_separated,
    mag_translate,
    mccg_separated,
)

MAX_EXAMPLES = 5


@dataclass
class CheckResult:
    name: str
    passed: bool = True
    n_cases: int = 0
    counterexamples: list = field(default_factory=list)
    seconds: float = 0.0
    warning: bool = False

    def fail(self, example) -> None:
        self.passed = False
        if len(self.counterexamples) < MAX_EXAMPLES:
            self.counterexamples.append(example)

    @property
    def status(self) -> str:
        if self.passed:
            return "PASS"
        return "WARN" if self.warning else "FAIL"


def queries(nodes):
    """All canonical triples (X, Y, Z) over ``nodes``."""
    codec = Codec(nodes)
    for code in codec.all_codes():
        if codec.is_canonical(code):
            yield codec.decode(code)


def pair_queries(nodes):
    nodes = sorted(nodes)
    for a, b in combinations(nodes, 2):
        rest = [v for v in nodes if v not in (a, b)]
        for r in range(len(rest) + 1):
            for s in combinations(rest, r):
                yield a, b, s


def _describe(g: MixedGraph) -> str:
    return ", ".join(f"{a}{t}{b}" for a, t, b in g.edges) or f"empty({','.join(g.nodes)})"


# individual checks ----------------------------------------------------------


def check_amp_brute_force(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "cg"):
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            if amp_separated(g, x, y, z) != brute_force_amp_separated(g, x, y, z):
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))


def check_dag_d_separation(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "cg"):
        if g.has_undirected:
            continue
        d = nx.DiGraph()
        d.add_nodes_from(g.nodes)
        d.add_edges_from((a, b) for a, _, b in g.edges)
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            if amp_separated(g, x, y, z) != nx.is_d_separator(d, set(x), set(y), set(z)):
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))


def check_undirected_cut(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        if g.has_bidirected:
            continue
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            u = nx.Graph()
            u.add_nodes_from(v for v in g.nodes if v not in z)
            u.add_edges_from((a, b) for a, _, b in g.edges if a not in z and b not in z)
            cut = not any(nx.has_path(u, a, b) for a in x for b in y)
            if amp_separated(g, x, y, z) != cut:
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))


def check_mccg_latent(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        h = latent_expand(g)
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            if mccg_separated(g, x, y, z) != amp_separated(h, x, y, z):
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))


def check_mag_translation(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        m = mag_translate(g)
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            if mccg_separated(g, x, y, z) != mag_separated(m, x, y, z):
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))


def check_monotone(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "cg"):
        base = full_model(g, "amp")
        for a, b in combinations(g.nodes, 2):
            if g.adjacent(a, b):
                continue
            for tok in ("--", "->", "<-"):
                h = g.with_edges([(a, tok, b)])
                if not is_chain_graph(h):
                    continue
                res.n_cases += 1
                if not full_model(h, "amp") <= base:
                    res.fail((_describe(g), f"{a}{tok}{b}"))


def check_amp_learner(res: CheckResult, n: int, amp_rules=None, random_count: int = 0, seed: int = 1, **_):
    graphs = list(graphs_up_to(min(n, 4), "cg"))
    if n >= 5:
        graphs += random_graphs("cg", random_count, sizes=(5, 6), seed=seed)
    for g in graphs:
        res.n_cases += 1
        try:
            out, _ = learn_amp(graph_oracle(g), rules=amp_rules)
        except LearningError as e:
            res.fail((_describe(g), str(e)))
            continue
        if not triplex_equivalent(out, g):
            res.fail((_describe(g), _describe(out)))
        elif len(g.nodes) <= 5 and not is_deflagged(out):
            res.fail((_describe(g), "not deflagged: " + _describe(out)))


def check_mccg_learner(res: CheckResult, n: int, random_count: int = 0, seed: int = 1, **_):
    graphs = list(graphs_up_to(min(n, 4), "mccg"))
    if n >= 5:
        graphs += random_graphs("mccg", random_count, sizes=(5, 6), seed=seed)
    for g in graphs:
        res.n_cases += 1
        try:
            out, sep = learn_mccg(graph_oracle(g))
        except LearningError as e:
            res.fail((_describe(g), str(e)))
            continue
        if out != blargest(g):
            res.fail((_describe(g), _describe(out)))
        elif fix_c1c2(undirect_triples(out, sep)) != out:
            res.fail((_describe(g), "second pass changed the output"))


def check_closure_theorem(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        res.n_cases += 1
        ig = full_model(g, "mccg")
        if cl(g) != ig:
            res.fail((_describe(g), "local"))
        elif cp(g) != ig:
            res.fail((_describe(g), "pairwise"))


def _partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for p in _partitions(rest):
        yield [[first]] + p
        for i in range(len(p)):
            yield p[:i] + [[first] + p[i]] + p[i + 1 :]


def check_pairwise_partitions(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        ig = None
        for part in _partitions(list(g.nodes)):
            try:
                check_partition(g, part)
            except ValueError:
                continue
            res.n_cases += 1
            if ig is None:
                ig = full_model(g, "mccg")
            if wtc_closure(pairwise_separation_base(g, part), g.nodes) != ig:
                res.fail((_describe(g), [sorted(b) for b in part]))


def check_dependence(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        if has_mixed_cycle(g):
            continue
        rep = verify_sound_complete(g, bound=max(n, 1))
        res.n_cases += rep.n_checked
        for t in rep.only_joined:
            res.fail((_describe(g), "joined only", [sorted(s) for s in t]))
        for t in rep.only_closure:
            res.fail((_describe(g), "closure only", [sorted(s) for s in t]))


def check_canonical_u(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        if has_mixed_cycle(g):
            continue
        for x, y, z in queries(g.nodes):
            res.n_cases += 1
            j, w = joined(g, x, y, z, check=False)
            if j != joined_any_u(g, x, y, z):
                res.fail((_describe(g), sorted(x), sorted(y), sorted(z)))
            if j:
                inner = set(w.path[1:-1])
                if inner & (set(x) | set(y)) or mccg_separated(g, x, y, z):
                    res.fail((_describe(g), "bad witness", w.describe()))


def check_forests(res: CheckResult, n: int, **_):
    for k in range(1, n + 1):
        for g in all_mccg_forests(k):
            res.n_cases += 1
            if not faithful_if_acyclic(g):
                res.fail(_describe(g))


def check_markov_equivalence(res: CheckResult, n: int, **_):
    for k in range(1, n + 1):
        by_skel: dict = {}
        for g in all_mccgs(k):
            by_skel.setdefault(g.skeleton(), []).append((g, full_model(g, "mccg")))
        for group in by_skel.values():
            for (g, mg), (h, mh) in combinations(group, 2):
                res.n_cases += 1
                if triplex_equivalent(g, h) != (mg == mh):
                    res.fail((_describe(g), _describe(h)))


def check_blargest(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        res.n_cases += 1
        b = blargest(g)
        cls = enumerate_triplex_class(g, "mccg")
        if b not in cls or not is_mccg(b):
            res.fail((_describe(g), "not in class"))
            continue
        nb = sum(t == "<->" for _, t, _ in b.edges)
        for h in cls:
            if blargest(h) != b or sum(t == "<->" for _, t, _ in h.edges) > nb:
                res.fail((_describe(g), _describe(h)))
                break


def check_marginalization(res: CheckResult, n: int, **_):
    for g in graphs_up_to(n, "mccg"):
        for r in range(1, len(g.nodes)):
            for keep in combinations(g.nodes, r):
                res.n_cases += 1
                m = marginalize_mccg(g, keep)
                if not is_mccg(m):
                    res.fail((_describe(g), keep, "not maximal"))
                    continue
                for x, y, z in queries(keep):
                    if mccg_separated(m, x, y, z) != mccg_separated(g, x, y, z):
                        res.fail((_describe(g), keep, sorted(x), sorted(y), sorted(z)))
                        break


def check_gaussian(res: CheckResult, n: int, seed: int = 1, **_):
    for kind in ("cg", "mccg"):
        for i, g in enumerate(graphs_up_to(n, kind)):
            if kind == "mccg" and not g.has_bidirected:
                continue
            res.n_cases += 1
            try:
                model = gen_gaussian(g, seed + i)
            except ParameterizationError as e:
                res.fail((_describe(g), str(e)))
                continue
            ex, go = exact_gaussian_oracle(model), graph_oracle(g)
            for a, b, s in pair_queries(g.nodes):
                if ex.query(a, b, s) != go.query(a, b, s):
                    res.fail((_describe(g), a, b, s))
                    break


def check_rule_order(res: CheckResult, n: int, amp_rules=None, **_):
    res.warning = True
    for g in graphs_up_to(n, "cg"):
        res.n_cases += 1
        try:
            fwd, _ = learn_amp(graph_oracle(g), rules=amp_rules)
            rev, _ = learn_amp(graph_oracle(g), order=("R4", "R3", "R2", "R1"), rules=amp_rules)
        except LearningError as e:
            res.fail((_describe(g), str(e)))
            continue
        if fwd != rev:
            res.fail((_describe(g), _describe(fwd), _describe(rev)))


# name -> (function, largest graph size the check enumerates)
CHECKS: dict[str, tuple[Callable, int]] = {
    "amp-brute-force": (check_amp_brute_force, 4),
    "dag-d-separation": (check_dag_d_separation, 4),
    "undirected-cut": (check_undirected_cut, 4),
    "mccg-latent": (check_mccg_latent, 4),
    "mag-translation": (check_mag_translation, 4),
    "monotone-edges": (check_monotone, 4),
    "amp-learner": (check_amp_learner, 5),
    "mccg-learner": (check_mccg_learner, 5),
    "closure-theorem": (check_closure_theorem, 5),
    "pairwise-partitions": (check_pairwise_partitions, 4),
    "dependence-criterion": (check_dependence, 4),
    "canonical-u": (check_canonical_u, 4),
    "forest-faithfulness": (check_forests, 5),
    "markov-equivalence": (check_markov_equivalence, 4),
    "blargest-class": (check_blargest, 4),
    "marginalization": (check_marginalization, 4),
    "gaussian-exact": (check_gaussian, 4),
    "rule-order": (check_rule_order, 4),
}


def verify_all(bound: int = 5, amp_rules: dict | None = None, checks=None, random_count: int = 200,
               seed: int = 1, progress: Callable[[CheckResult], None] | None = None) -> list[CheckResult]:
    """Run the property checks and return one result per check.

    Parameters
    ----------
    bound : int
        Largest graph size; each check also has its own cap (see ``CHECKS``).
    amp_rules : dict, optional
        Replacement for the AMP learner's rule table (used to test the harness).
    checks : iterable of str, optional
        Subset of check names to run, in ``CHECKS`` order.
    random_count : int
        Random 5 and 6 node graphs added to the learner checks when ``bound >= 5``.
    """
    if bound > 5:
        raise ValueError("verify_all is limited to graphs with at most 5 nodes")
    names = list(CHECKS) if checks is None else [c for c in CHECKS if c in set(checks)]
    unknown = set(checks or ()) - set(CHECKS)
    if unknown:
        raise ValueError(f"unknown checks: {sorted(unknown)}")
    out = []
    for name in names:
        fn, cap = CHECKS[name]
        res = CheckResult(name)
        t0 = time.perf_counter()
        fn(res, min(bound, cap), amp_rules=amp_rules, random_count=random_count, seed=seed)
        res.seconds = time.perf_counter() - t0
        out.append(res)
        if progress is not None:
            progress(res)
    return out


def format_table(results: list[CheckResult]) -> str:
    width = max([len(r.name) for r in results] + [5])
    lines = [f"{'check':<{width}}  status  cases"]
    for r in results:
        lines.append(f"{r.name:<{width}}  {r.status:<6}  {r.n_cases}")
        for ex in r.counterexamples:
            lines.append(f"{'':<{width}}    counterexample: {ex}")
    return "\n".join(lines)


def broken_rules() -> dict:
    """Rule table whose first rule never fires; the harness must catch it."""
    rules = dict(RULES)
    rules["R1"] = lambda h, sep, log: False
    return rules
