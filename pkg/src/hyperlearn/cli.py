"""Command-line interface: ``hyperlearn {gen,classify,learn,game,verify,bench}``."""

from __future__ import annotations

import argparse
import json
import random
import sys

from .bench import bench, write_csv
from .errors import BudgetExceededError, HyperlearnError, InconsistentOracleError
from .generators import (
    FAMILIES,
    family_bounded,
    family_hdkn,
    hard_gamma_instance,
    hyperpath_pn,
    random_orderly_hypertree,
    staircase,
    worst_prefix_order,
)
from .hypergraph import Hypergraph, load
from .offline import learn_dist1, learn_dist2, learn_offline
from .online import learn_online
from .oracle import (
    adversary_oracle_hkn,
    bounded_adversary_oracle,
    consistent_witness,
    exact_oracle,
    read_log,
    replay,
)
from .pathdepth import (
    RootedTree,
    exact_path_depth,
    greedy_min,
    largest_max,
    play_game,
    separator_bound,
    separator_min,
    worst_case_rounds,
)
from .predicates import claim7_check, structural_predicates
from .skeleton import build_skeleton, is_isomorphic

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONSISTENT, EXIT_BUDGET = 0, 1, 2, 3, 4


class UsageError(Exception):
    pass


def _emit(obj, out=None) -> None:
    text = json.dumps(obj, indent=2, default=str)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


# -- subcommands --------------------------------------------------------------------


def cmd_gen(a) -> int:
    f = a.family
    if f == "random":
        obj = random_orderly_hypertree(
            m=a.m, n=a.n, max_degree=a.delta, seed=a.seed,
            require_private=a.private, min_diameter=a.min_diameter,
        )
    elif f == "hdkn":
        obj = family_hdkn(a.delta, a.k, a.N)
    elif f == "bounded":
        obj = family_bounded(a.k, a.N, a.d)
    elif f == "pn":
        obj = hyperpath_pn(a.n or 8)
    elif f == "hgamma":
        obj = hard_gamma_instance(a.n or 10)
    else:
        obj = staircase(a.t, whiskers=f == "staircase2")
    _emit(obj.to_dict(), a.out)
    return EXIT_OK


def cmd_classify(a) -> int:
    h = load(a.target)
    report = structural_predicates(h).as_dict()
    report["claim7"] = claim7_check(h)
    _emit(report)
    return EXIT_OK


def _parse_order(text: str, h: Hypergraph | None, vertices):
    if text == "given":
        return list(vertices), h
    kind, _, arg = text.partition(":")
    if kind == "random":
        order = list(vertices)
        random.Random(int(arg or 0)).shuffle(order)
        return order, h
    if kind == "worst-prefix":
        if h is None:
            raise UsageError("worst-prefix order needs an exact target")
        padded, order = worst_prefix_order(h, int(arg))
        return order, padded
    raise UsageError(f"unknown order {text!r}; use given, random:SEED or worst-prefix:H")


def cmd_learn(a) -> int:
    target = load(a.target) if a.target else None
    if a.oracle == "exact":
        if target is None:
            raise UsageError("--oracle exact needs a target file")
        order, target = _parse_order(a.order, target, target.labels)
        oracle = exact_oracle(target, a.count_repeats)
    else:
        if a.oracle == "adversary":
            oracle = adversary_oracle_hkn(a.delta, a.k, a.N, a.count_repeats)
        else:
            oracle = bounded_adversary_oracle(a.k, a.N, a.d, a.count_repeats)
        order, _ = _parse_order(a.order, None, oracle.vertices)
    try:
        if a.mode == "online":
            res = learn_online(order, oracle, a.strategy)
        elif a.mode == "offline":
            res = learn_offline(order, oracle, a.strategy)
        elif a.mode == "dist1":
            res = learn_dist1(order, oracle)
        else:
            res = learn_dist2(order, oracle)
    finally:
        if a.json_logs:
            oracle.save_log(a.json_logs)
    reference = target if a.oracle == "exact" else consistent_witness(oracle)
    summary = {
        "mode": a.mode,
        "oracle": a.oracle,
        "queries": res.queries,
        "n": res.hypergraph.n,
        "m": res.hypergraph.m,
        "equal": res.hypergraph == reference,
    }
    if a.out:
        _emit(res.hypergraph.to_dict(), a.out)
    if a.trace and hasattr(res.trace[0], "to_dict"):
        with open(a.trace, "w") as fh:
            for i, rec in enumerate(res.trace, 1):
                fh.write(json.dumps({"index": i, **rec.to_dict()}) + "\n")
    _emit(summary)
    return EXIT_OK if summary["equal"] else EXIT_INCONSISTENT


def cmd_game(a) -> int:
    if a.tree:
        with open(a.tree) as fh:
            tree = RootedTree.from_dict(json.load(fh))
    else:
        tree = staircase(a.t, whiskers=a.whiskers)
    delta = max(tree.max_degree(), 2)
    leaves = len(tree.leaves())
    pi = separator_min() if a.min == "separator" else greedy_min()
    out = {"n": tree.n, "leaves": leaves, "delta": delta, "bound": separator_bound(delta, leaves)}
    if a.max == "largest":
        out["rounds"] = play_game(tree, pi, largest_max())
    else:
        out["rounds"] = worst_case_rounds(tree, pi)
    if a.exact:
        out["path_depth"] = exact_path_depth(tree)
    _emit(out)
    return EXIT_OK


def cmd_verify(a) -> int:
    if a.replay:
        h = load(a.target)
        bad = replay(read_log(a.replay), h)
        _emit({"records": len(read_log(a.replay)), "mismatches": len(bad)})
        return EXIT_OK if not bad else EXIT_INCONSISTENT
    if not a.other:
        raise UsageError("verify needs --replay LOG or a second hypergraph to compare")
    x, y = load(a.target), load(a.other)
    if a.isomorphic:
        same = is_isomorphic(build_skeleton(x), build_skeleton(y))
    else:
        same = x == y
    _emit({"check": "isomorphic" if a.isomorphic else "equal", "result": same})
    return EXIT_OK if same else EXIT_FAIL


def cmd_bench(a) -> int:
    rows = bench(a.sweep, workers=a.workers)
    write_csv(rows, a.out)
    return EXIT_OK


# -- parser ------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="hyperlearn", description="Reconstruct orderly hypertrees with distance oracles.")
    p.add_argument("--seed", type=int, default=0, help="seed for generators and random orders")
    p.add_argument("--json-logs", metavar="PATH", help="write the oracle query log as JSON lines")
    p.add_argument("--count-repeats", action="store_true", help="count repeated queries")
    # the same options are accepted after the subcommand name
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--json-logs", metavar="PATH", default=argparse.SUPPRESS)
    common.add_argument("--count-repeats", action="store_true", default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True)
    add = sub.add_parser

    def sub_parser(name, **kw):
        return add(name, parents=[common], **kw)

    sub.add_parser = sub_parser

    g = sub.add_parser("gen", help="generate an instance")
    g.add_argument("--family", choices=FAMILIES, default="random")
    g.add_argument("--m", type=int)
    g.add_argument("--n", type=int)
    g.add_argument("--delta", type=int, default=3)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--N", type=int, default=4)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--t", type=int, default=8)
    g.add_argument("--private", action="store_true")
    g.add_argument("--min-diameter", type=int, default=3)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("classify", help="print the structural report of a hypergraph")
    c.add_argument("target")
    c.set_defaults(func=cmd_classify)

    ln = sub.add_parser("learn", help="run a learner against an oracle")
    ln.add_argument("target", nargs="?")
    ln.add_argument("--mode", choices=("online", "offline", "dist1", "dist2"), default="offline")
    ln.add_argument("--strategy", choices=("separator", "greedy"), default="separator")
    ln.add_argument("--oracle", choices=("exact", "adversary", "bounded-adversary"), default="exact")
    ln.add_argument("--order", default="given")
    ln.add_argument("--delta", type=int, default=3)
    ln.add_argument("--k", type=int, default=2)
    ln.add_argument("--N", type=int, default=4)
    ln.add_argument("--d", type=int, default=2)
    ln.add_argument("--out", help="write the learned hypergraph JSON here")
    ln.add_argument("--trace", help="write per-insertion trace records as JSON lines")
    ln.set_defaults(func=cmd_learn)

    gm = sub.add_parser("game", help="play the path depth game")
    gm.add_argument("tree", nargs="?", help="rooted tree JSON (default: a staircase)")
    gm.add_argument("--t", type=int, default=8)
    gm.add_argument("--whiskers", action="store_true")
    gm.add_argument("--min", choices=("separator", "greedy"), default="separator")
    gm.add_argument("--max", choices=("largest", "exhaustive"), default="exhaustive")
    gm.add_argument("--exact", action="store_true", help="also solve the game exactly (small trees)")
    gm.set_defaults(func=cmd_game)

    v = sub.add_parser("verify", help="replay a query log or compare hypergraphs")
    v.add_argument("target")
    v.add_argument("other", nargs="?")
    v.add_argument("--replay", metavar="LOG")
    mode = v.add_mutually_exclusive_group()
    mode.add_argument("--equal", action="store_true")
    mode.add_argument("--isomorphic", action="store_true")
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="run a parameter sweep and write CSV")
    b.add_argument("--sweep", nargs="+", required=True, help="tokens like delta=2..6 m=5..200 learner=offline")
    b.add_argument("--workers", type=int, default=1)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    if a.command == "learn" and a.order == "random":
        a.order = f"random:{a.seed}"
    try:
        return a.func(a)
    except UsageError as exc:
        print(f"hyperlearn: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"hyperlearn: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InconsistentOracleError as exc:
        print(f"hyperlearn: inconsistent: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    except (HyperlearnError, ValueError, OSError) as exc:
        print(f"hyperlearn: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
