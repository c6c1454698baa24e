"""Independence oracles and Gaussian models faithful to a graph."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Protocol, Sequence

import numpy as np
from scipy.stats import norm

from .graph import DIRECTED, UNDIRECTED, GraphError, MixedGraph, is_chain_graph, is_mccg
from .separation import _open_reach, latent_expand


class OracleError(RuntimeError):
    """Raised when an oracle cannot answer, e.g. on a singular submatrix."""


class IndependenceOracle(Protocol):
    nodes: tuple[str, ...]
    concurrency_safe: bool

    def query(self, a: str, b: str, s: Iterable[str] = ()) -> bool: ...


def _as_set(s) -> frozenset:
    if s is None:
        return frozenset()
    return frozenset([s]) if isinstance(s, str) else frozenset(s)


class GraphOracle:
    """Answers queries by separation in a chain graph or MCCG."""

    concurrency_safe = True

    def __init__(self, g: MixedGraph, kind: str | None = None):
        if kind is None:
            kind = "mccg" if g.has_bidirected else "amp"
        if kind == "amp" and not is_chain_graph(g):
            raise GraphError("graph has a semidirected cycle")
        if kind == "mccg" and not is_mccg(g):
            raise GraphError("graph is not a maximal covariance-concentration graph")
        self.g = g
        self.kind = kind
        self.nodes = g.nodes
        self.calls = 0

    def independent(self, x, y, z=()) -> bool:
        xs, ys, zs = _as_set(x), _as_set(y), _as_set(z)
        for v in xs | ys | zs:
            if v not in self.g:
                raise GraphError(f"unknown node {v!r}")
        if xs & ys or xs & zs or ys & zs or not xs or not ys:
            raise GraphError("need non-empty disjoint X, Y and Z disjoint from both")
        self.calls += 1
        return not _open_reach(self.g, xs, ys, zs)

    def query(self, a: str, b: str, s: Iterable[str] = ()) -> bool:
        return self.independent({a}, {b}, s)


def graph_oracle(g: MixedGraph, kind: str | None = None) -> GraphOracle:
    return GraphOracle(g, kind)


# Gaussian models --------------------------------------------------------------


@dataclass(frozen=True)
class GaussianModel:
    """Zero-mean Gaussian given by its covariance over named variables."""

    names: tuple[str, ...]
    cov: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.cov, dtype=float)
        if c.shape != (len(self.names), len(self.names)):
            raise ValueError("covariance shape does not match the variable list")
        if not np.allclose(c, c.T, atol=1e-12, rtol=0):
            raise ValueError("covariance is not symmetric")
        if np.linalg.eigvalsh(c).min() <= 1e-9:
            raise ValueError("covariance is not positive definite")
        object.__setattr__(self, "cov", c)

    def index(self, names: Iterable[str]) -> list[int]:
        pos = {v: i for i, v in enumerate(self.names)}
        try:
            return [pos[v] for v in names]
        except KeyError as exc:
            raise GraphError(f"unknown variable {exc.args[0]!r}") from None

    def sample(self, n: int, seed: int) -> np.ndarray:
        rng = np.random.default_rng(seed)
        chol = np.linalg.cholesky(self.cov)
        return rng.standard_normal((n, len(self.names))) @ chol.T

    def to_dict(self) -> dict:
        return {"names": list(self.names), "matrix": [float(v) for v in self.cov.ravel()]}


def conditional_cov(cov: np.ndarray, keep: Sequence[int], given: Sequence[int]) -> np.ndarray:
    """Covariance of ``keep`` given ``given`` via the Schur complement."""
    keep = list(keep)
    given = list(given)
    a = cov[np.ix_(keep, keep)]
    if not given:
        return a
    b = cov[np.ix_(keep, given)]
    s = cov[np.ix_(given, given)]
    try:
        return a - b @ np.linalg.solve(s, b.T)
    except np.linalg.LinAlgError as exc:
        raise OracleError(f"singular conditioning set: {exc}") from None


def partial_correlation(cov: np.ndarray, i: int, j: int, s: Sequence[int]) -> float:
    c = conditional_cov(cov, [i, j], s)
    d = c[0, 0] * c[1, 1]
    if d <= 0:
        raise OracleError("non-positive conditional variance")
    return float(c[0, 1] / math.sqrt(d))


class ExactGaussianOracle:
    """Independence iff the partial correlation is below ``tol`` in magnitude."""

    concurrency_safe = True

    def __init__(self, model: GaussianModel, tol: float = 1e-9):
        self.model = model
        self.tol = tol
        self.nodes = model.names

    def query(self, a: str, b: str, s: Iterable[str] = ()) -> bool:
        i, j = self.model.index([a, b])
        rest = self.model.index(sorted(_as_set(s)))
        return abs(partial_correlation(self.model.cov, i, j, rest)) < self.tol

    def independent(self, x, y, z=()) -> bool:
        xi = self.model.index(sorted(_as_set(x)))
        yi = self.model.index(sorted(_as_set(y)))
        zi = self.model.index(sorted(_as_set(z)))
        c = conditional_cov(self.model.cov, xi + yi, zi)
        d = np.sqrt(np.diag(c))
        corr = c / np.outer(d, d)
        return bool(np.abs(corr[: len(xi), len(xi) :]).max() < self.tol)


def exact_gaussian_oracle(model: GaussianModel, tol: float = 1e-9) -> ExactGaussianOracle:
    return ExactGaussianOracle(model, tol)


class FisherZOracle:
    """Fisher z test of zero partial correlation on a data matrix.

    Parameters
    ----------
    data : ndarray of shape (n, p)
        Samples in rows.
    names : sequence of str
        Column names.
    alpha : float
        Significance level; the test accepts independence when
        ``sqrt(n - |S| - 3) * |atanh(r)|`` is at most the ``1 - alpha/2``
        normal quantile.
    """

    concurrency_safe = True

    def __init__(self, data: np.ndarray, names: Sequence[str], alpha: float = 0.01):
        data = np.asarray(data, dtype=float)
        if data.ndim != 2 or data.shape[1] != len(names):
            raise ValueError("data must be an n x p matrix matching the names")
        if not 0 < alpha < 1:
            raise ValueError("alpha must lie in (0, 1)")
        self.n = data.shape[0]
        self.nodes = tuple(names)
        self.alpha = alpha
        self.cov = np.cov(data, rowvar=False)
        self.crit = float(norm.ppf(1 - alpha / 2))
        self._pos = {v: i for i, v in enumerate(self.nodes)}

    def statistic(self, a: str, b: str, s: Iterable[str] = ()) -> float:
        s = sorted(_as_set(s))
        if self.n <= len(s) + 3:
            raise ValueError(f"need more than {len(s) + 3} samples for a conditioning set of size {len(s)}")
        try:
            idx = [self._pos[v] for v in [a, b, *s]]
        except KeyError as exc:
            raise GraphError(f"unknown variable {exc.args[0]!r}") from None
        try:
            r = partial_correlation(self.cov, idx[0], idx[1], idx[2:])
        except OracleError:
            return math.inf
        if abs(r) >= 1 - 1e-12:
            return math.inf
        return math.sqrt(self.n - len(s) - 3) * abs(math.atanh(r))

    def query(self, a: str, b: str, s: Iterable[str] = ()) -> bool:
        return self.statistic(a, b, s) <= self.crit


def fisher_z_oracle(data: np.ndarray, names: Sequence[str], alpha: float = 0.01) -> FisherZOracle:
    return FisherZOracle(data, names, alpha)


# parameterization -------------------------------------------------------------


def _chain_components_in_order(g: MixedGraph) -> list[list[str]]:
    comps = [sorted(k) for k in g.undirected_components()]
    where = {v: i for i, k in enumerate(comps) for v in k}
    indeg = [0] * len(comps)
    succ = [set() for _ in comps]
    for u, tok, v in g.edges:
        if tok == DIRECTED and v not in succ[where[u]]:
            succ[where[u]].add(where[v])
    for i in range(len(comps)):
        for j in succ[i]:
            indeg[j] += 1
    order = []
    ready = sorted(i for i in range(len(comps)) if indeg[i] == 0)
    while ready:
        i = ready.pop(0)
        order.append(comps[i])
        for j in sorted(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                ready.append(j)
        ready.sort()
    return order


def _draw_cg_cov(g: MixedGraph, rng: np.random.Generator) -> np.ndarray:
    """Covariance of a random AMP Gaussian model of the chain graph ``g``.

    Each variable is a linear function of its parents plus an error term;
    errors of different undirected components are independent and, inside a
    component, have a precision matrix supported on the undirected edges.
    """
    order = [v for comp in _chain_components_in_order(g) for v in comp]
    pos = {v: i for i, v in enumerate(order)}
    p = len(order)
    omega = np.zeros((p, p))
    beta = np.zeros((p, p))
    for u, tok, v in g.edges:
        i, j = pos[u], pos[v]
        if tok == UNDIRECTED:
            w = rng.uniform(0.1, 0.5) * rng.choice((-1.0, 1.0))
            omega[i, j] = omega[j, i] = w
        else:
            beta[j, i] = rng.uniform(0.2, 0.8) * rng.choice((-1.0, 1.0))
    for i in range(p):
        omega[i, i] = np.abs(omega[i]).sum() + rng.uniform(0.5, 1.5)
    inv = np.linalg.inv(np.eye(p) - beta)
    cov = inv @ np.linalg.inv(omega) @ inv.T
    cov = (cov + cov.T) / 2
    # back to the graph's own node order
    back = [pos[v] for v in g.nodes]
    return cov[np.ix_(back, back)]


def _all_separators(nodes, rng, exhaustive: bool, samples: int = 200):
    for a, b in combinations(nodes, 2):
        rest = [v for v in nodes if v not in (a, b)]
        if exhaustive:
            for r in range(len(rest) + 1):
                for s in combinations(rest, r):
                    yield a, b, s
        else:
            for _ in range(samples):
                mask = rng.random(len(rest)) < 0.5
                yield a, b, tuple(v for v, m in zip(rest, mask) if m)


def faithfulness_violations(model: GaussianModel, g: MixedGraph, tol: float = 1e-9,
                            rng: np.random.Generator | None = None, limit: int = 1,
                            min_dependence: float = 0.0) -> list:
    """Queries where zero partial correlation and separation disagree.

    With ``min_dependence`` > 0, a dependent query whose partial correlation
    is smaller than that in magnitude also counts as a violation.
    """
    go = GraphOracle(g)
    exhaustive = len(g.nodes) <= 8
    if rng is None:
        rng = np.random.default_rng(0)
    floor = max(tol, min_dependence)
    out = []
    for a, b, s in _all_separators(g.nodes, rng, exhaustive):
        i, j = model.index([a, b])
        rho = abs(partial_correlation(model.cov, i, j, model.index(s)))
        sep = go.query(a, b, s)
        if (rho < tol) != sep or (not sep and rho < floor):
            out.append((a, b, s))
            if len(out) >= limit:
                break
    return out


class ParameterizationError(RuntimeError):
    pass


def gen_gaussian(g: MixedGraph, seed: int, max_attempts: int = 100, tol: float = 1e-9,
                 min_dependence: float = 0.0) -> GaussianModel:
    """Random Gaussian model faithful to a chain graph or MCCG.

    MCCGs are first expanded with one latent parent per bidirected edge and
    the latents are marginalized out afterwards. Draws that produce an
    accidental zero or a missing zero are rejected and redrawn.

    Parameters
    ----------
    min_dependence : float
        Optional strength margin: also reject draws in which some dependent
        pair has a partial correlation below this value. The default 0 only
        rejects exact (below ``tol``) cancellations.
    """
    rng = np.random.default_rng(seed)
    if g.has_bidirected:
        if not is_mccg(g):
            raise GraphError("graph is not a maximal covariance-concentration graph")
        h = latent_expand(g)
    else:
        if not is_chain_graph(g):
            raise GraphError("graph has a semidirected cycle")
        h = g
    keep = [h.nodes.index(v) for v in g.nodes]
    for _ in range(max_attempts):
        cov = _draw_cg_cov(h, rng)[np.ix_(keep, keep)]
        try:
            model = GaussianModel(g.nodes, cov)
        except ValueError:
            continue
        if not faithfulness_violations(model, g, tol, rng, min_dependence=min_dependence):
            return model
    raise ParameterizationError(f"no faithful parameters found for {g!r} in {max_attempts} attempts")
