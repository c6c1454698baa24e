"""Command line entry point ``cgkit``.

Exit codes: 0 on success, 1 when an algorithm fails or a checked property
does not hold, 2 for usage and input errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from pathlib import Path

import numpy as np

from .closure import check_partition, cl, cp, wtc_closure, pairwise_separation_base
from .dependence import joined, verify_sound_complete
from .equivalence import blargest, triplex_equivalent
from .graph import GraphError, MixedGraph, is_chain_graph, is_mccg, marginalize_mccg, mccg_violations, semidirected_cycle
from .learn_amp import LearningError, learn_amp
from .learn_mccg import learn_mccg
from .oracle import ParameterizationError, fisher_z_oracle, gen_gaussian, graph_oracle
from .separation import (
    amp_separated,
    concentration_projection,
    covariance_projection,
    mag_separated,
    mag_translate,
    mccg_separated,
)
from .verify import CHECKS, format_table, verify_all


class InputError(Exception):
    pass


def _read_text(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(path: str) -> MixedGraph:
    return MixedGraph.from_json(_read_text(path))


def _nodes(text: str | None) -> list[str]:
    if not text:
        return []
    return [v.strip() for v in text.split(",") if v.strip()]


def _emit(text: str, out: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _emit_graph(g: MixedGraph, args) -> None:
    _emit(g.to_json(), getattr(args, "output", None))
    if getattr(args, "dot", None):
        Path(args.dot).write_text(g.to_dot() + "\n")


def read_csv(path: str) -> tuple[list[str], np.ndarray]:
    text = _read_text(path)
    rows = list(csv.reader(io.StringIO(text)))
    if not rows:
        raise InputError(f"{path} is empty")
    names = [c.strip() for c in rows[0]]
    try:
        data = np.array([[float(v) for v in r] for r in rows[1:] if r], dtype=float)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if data.ndim != 2 or data.shape[1] != len(names):
        raise InputError(f"{path}: rows do not match the header")
    return names, data


def write_csv(names, data: np.ndarray) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(names)
    for row in data:
        w.writerow([repr(float(v)) for v in row])
    return buf.getvalue()


def _oracle(args, kind: str):
    if bool(args.graph) == bool(args.data):
        raise InputError("give exactly one of --graph and --data")
    if args.graph:
        return graph_oracle(load_graph(args.graph), kind)
    names, data = read_csv(args.data)
    return fisher_z_oracle(data, names, args.alpha)


# commands -------------------------------------------------------------------


def cmd_validate(args) -> int:
    g = load_graph(args.graph)
    if g.has_directed and g.has_bidirected:
        print("INVALID mixes directed and bidirected edges")
        return 1
    if g.has_bidirected or args.kind == "mccg":
        bad = mccg_violations(g)
        if bad:
            print("INVALID not maximal: " + "; ".join(f"{c} {w}" for c, w, *_ in bad))
            return 1
        print("VALID mccg")
        return 0
    cyc = semidirected_cycle(g)
    if cyc is not None:
        print("INVALID semidirected cycle " + ",".join(cyc))
        return 1
    print("VALID cg")
    return 0


def cmd_sep(args) -> int:
    g = load_graph(args.graph)
    x, y, z = _nodes(args.x), _nodes(args.y), _nodes(args.z)
    fn = {"amp": amp_separated, "mccg": mccg_separated, "mag": mag_separated}[args.kind]
    if args.kind == "amp" and not is_chain_graph(g):
        raise GraphError("graph has a semidirected cycle")
    if args.kind == "mccg" and not is_mccg(g):
        raise GraphError("graph is not a maximal covariance-concentration graph")
    print("SEPARATED" if fn(g, x, y, z) else "CONNECTED")
    return 0


def _learn(args, fn, kind) -> int:
    oracle = _oracle(args, kind)
    try:
        g, sep = fn(oracle)
    except LearningError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"partial graph: {exc.graph.to_json()}", file=sys.stderr)
        print(f"diagnostics: {exc.diagnostics}", file=sys.stderr)
        return 1
    _emit_graph(g, args)
    if args.dump_seps:
        Path(args.dump_seps).write_text(json.dumps(sep.to_json_dict(), indent=1) + "\n")
    return 0


def cmd_learn_amp(args) -> int:
    return _learn(args, learn_amp, "amp")


def cmd_learn_mccg(args) -> int:
    return _learn(args, learn_mccg, "mccg")


def cmd_equiv(args) -> int:
    g, h = load_graph(args.first), load_graph(args.second)
    print("EQUIVALENT" if triplex_equivalent(g, h) else "NOT-EQUIVALENT")
    return 0


def cmd_blargest(args) -> int:
    _emit_graph(blargest(load_graph(args.graph)), args)
    return 0


def cmd_marginalize(args) -> int:
    _emit_graph(marginalize_mccg(load_graph(args.graph), _nodes(args.keep)), args)
    return 0


def cmd_project(args) -> int:
    g = load_graph(args.graph)
    if not is_mccg(g):
        raise GraphError("projections need a maximal covariance-concentration graph")
    fn = covariance_projection if args.kind == "covariance" else concentration_projection
    _emit_graph(fn(g), args)
    return 0


def cmd_mag_translate(args) -> int:
    _emit_graph(mag_translate(load_graph(args.graph)), args)
    return 0


def cmd_closure(args) -> int:
    g = load_graph(args.graph)
    if not is_mccg(g):
        raise GraphError("closure needs a maximal covariance-concentration graph")
    if args.base == "local":
        if args.partition:
            raise InputError("--partition only applies to the pairwise base")
        model = cl(g)
    elif args.partition:
        try:
            part = json.loads(_read_text(args.partition))
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid partition JSON: {exc}") from None
        check_partition(g, part)
        model = wtc_closure(pairwise_separation_base(g, part), g.nodes)
    else:
        model = cp(g)
    _emit("\n".join(model.lines()), args.output)
    return 0


def cmd_read_deps(args) -> int:
    g = load_graph(args.graph)
    ok, w = joined(g, _nodes(args.x), _nodes(args.y), _nodes(args.z))
    print(f"JOINED {w.describe()}" if ok else "NOT-JOINED")
    return 0


def cmd_verify_deps(args) -> int:
    g = load_graph(args.graph)
    rep = verify_sound_complete(g, args.bound)
    print(f"statements checked: {rep.n_checked}")
    for label, items in (("joined but not derived", rep.only_joined), ("derived but not joined", rep.only_closure)):
        for x, y, z in items:
            print(f"{label}: {','.join(sorted(x))}|{','.join(sorted(y))}|{','.join(sorted(z))}")
    print("OK" if rep.ok else "MISMATCH")
    return 0 if rep.ok else 1


def _model(args):
    g = load_graph(args.graph)
    try:
        return gen_gaussian(g, args.seed, min_dependence=args.min_dependence)
    except ParameterizationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return None


def cmd_gen(args) -> int:
    if args.n < 1:
        raise InputError("--n must be positive")
    model = _model(args)
    if model is None:
        return 1
    print(f"seed: {args.seed}", file=sys.stderr)
    _emit(write_csv(model.names, model.sample(args.n, args.seed)), args.output)
    return 0


def cmd_gen_cov(args) -> int:
    model = _model(args)
    if model is None:
        return 1
    data = {"seed": args.seed, **model.to_dict()}
    _emit(json.dumps(data), args.output)
    return 0


def cmd_verify_all(args) -> int:
    checks = _nodes(args.checks) or None
    print(f"bound: {args.bound}  seed: {args.seed}  random graphs: {args.random_count}")
    results = verify_all(args.bound, checks=checks, random_count=args.random_count, seed=args.seed)
    print(format_table(results))
    return 0 if all(r.passed or r.warning for r in results) else 1


# parser ---------------------------------------------------------------------


def _alpha(text: str) -> float:
    v = float(text)
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("alpha must lie in (0, 1)")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="cgkit", description="AMP chain graphs and maximal covariance-concentration graphs")
    sub = p.add_subparsers(dest="command", required=True)

    def graph_out(sp, positional=True):
        if positional:
            sp.add_argument("graph", help="graph JSON file")
        sp.add_argument("-o", "--output", help="write JSON here instead of stdout")
        sp.add_argument("--dot", help="also write a DOT rendering to this file")

    sp = sub.add_parser("validate", help="check that a graph is a chain graph or an MCCG")
    sp.add_argument("graph")
    sp.add_argument("--kind", choices=("cg", "mccg"))
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("sep", help="decide a separation statement")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--z", default="")
    sp.add_argument("--kind", choices=("amp", "mccg", "mag"), default="amp")
    sp.set_defaults(fn=cmd_sep)

    for name, fn in (("learn-amp", cmd_learn_amp), ("learn-mccg", cmd_learn_mccg)):
        sp = sub.add_parser(name, help="learn a graph from a true graph or from data")
        sp.add_argument("--graph", help="ground-truth graph used as an exact oracle")
        sp.add_argument("--data", help="CSV file with a header row of variable names")
        sp.add_argument("--alpha", type=_alpha, default=0.01)
        sp.add_argument("--dump-seps", help="write the separator table as JSON")
        graph_out(sp, positional=False)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("equiv", help="triplex equivalence of two graphs")
    sp.add_argument("first")
    sp.add_argument("second")
    sp.set_defaults(fn=cmd_equiv)

    sp = sub.add_parser("blargest", help="member of the class with the most bidirected edges")
    graph_out(sp)
    sp.set_defaults(fn=cmd_blargest)

    sp = sub.add_parser("marginalize", help="marginal MCCG over a subset of nodes")
    graph_out(sp)
    sp.add_argument("--keep", required=True, help="comma separated nodes to keep")
    sp.set_defaults(fn=cmd_marginalize)

    sp = sub.add_parser("project", help="covariance or concentration graph of an MCCG")
    graph_out(sp)
    sp.add_argument("--kind", choices=("covariance", "concentration"), required=True)
    sp.set_defaults(fn=cmd_project)

    sp = sub.add_parser("mag-translate", help="Markov equivalent MAG of an MCCG")
    graph_out(sp)
    sp.set_defaults(fn=cmd_mag_translate)

    sp = sub.add_parser("closure", help="WTC closure of a separation base")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--base", choices=("local", "pairwise"), default="local")
    sp.add_argument("--partition", help="JSON list of node lists for the pairwise base")
    sp.add_argument("-o", "--output")
    sp.set_defaults(fn=cmd_closure)

    sp = sub.add_parser("read-deps", help="decide whether X is joined to Y given Z")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y", required=True)
    sp.add_argument("--z", default="")
    sp.set_defaults(fn=cmd_read_deps)

    sp = sub.add_parser("verify-deps", help="compare joined statements with the dependence closure")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--bound", type=int, default=5)
    sp.set_defaults(fn=cmd_verify_deps)

    for name, fn in (("gen", cmd_gen), ("gen-cov", cmd_gen_cov)):
        sp = sub.add_parser(name, help="Gaussian data or covariance faithful to a graph")
        sp.add_argument("--graph", required=True)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--min-dependence", type=float, default=0.0,
                        help="reject draws with a dependent partial correlation below this")
        sp.add_argument("-o", "--output")
        if name == "gen":
            sp.add_argument("--n", type=int, default=1000)
        sp.set_defaults(fn=fn)

    sp = sub.add_parser("verify-all", help="run the exhaustive property checks")
    sp.add_argument("--bound", type=int, default=5, choices=range(1, 6))
    sp.add_argument("--checks", help=f"comma separated subset of: {','.join(CHECKS)}")
    sp.add_argument("--random-count", type=int, default=200)
    sp.add_argument("--seed", type=int, default=1)
    sp.set_defaults(fn=cmd_verify_all)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (InputError, GraphError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
