"""Benchmark sweeps: one CSV row per (instance, learner) cell."""

from __future__ import annotations

import csv
import itertools
import random
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

from .errors import HyperlearnError
from .generators import (
    family_bounded,
    family_hdkn,
    hyperpath_pn,
    random_orderly_hypertree,
    staircase,
    tree_hypergraph,
    worst_prefix_order,
)
from .hypergraph import Hypergraph
from .offline import learn_dist1, learn_dist2, learn_offline
from .online import learn_online
from .oracle import adversary_oracle_hkn, bounded_adversary_oracle, consistent_witness, exact_oracle
from .strategies import stage_of

COLUMNS = [
    "instance_id", "family", "seed", "n", "m", "delta", "diameter", "learner", "strategy",
    "queries", "bound", "ratio", "rounds_max", "splits_total", "wall_ms", "error",
]
LEARNERS = ("online", "offline", "dist1", "dist2")
DOUBLING = {"m", "n", "N", "t"}
INSTANCE_KEYS = ("delta", "m", "n", "k", "N", "d", "t", "h", "private")


def ceil_log(x: int, base: int) -> int:
    return stage_of(x, max(base, 2))


def sp_bound(n: int, m: int, delta: int) -> int:
    """``n * delta * ceil(log_delta m)`` with ``delta`` floored at 2."""
    delta = max(delta, 2)
    return n * delta * ceil_log(m, delta)


@dataclass(frozen=True)
class Cell:
    family: str
    params: tuple
    seed: int
    learner: str
    strategy: str
    oracle: str = "exact"

    @property
    def instance_id(self) -> str:
        return "-".join([self.family] + [f"{k}{v}" for k, v in self.params] + [f"s{self.seed}"])


def _expand_value(key: str, text: str) -> list:
    if ".." in text:
        lo, hi = (int(x) for x in text.split(".."))
        if lo > hi:
            raise ValueError(f"empty range {text!r} for {key}")
        if key in DOUBLING:
            out = []
            x = lo
            while x <= hi:
                out.append(x)
                x *= 2
            return out
        return list(range(lo, hi + 1))
    out = []
    for part in text.split(","):
        try:
            out.append(int(part))
        except ValueError:
            out.append(part)
    return out


def parse_sweep(tokens) -> dict[str, list]:
    """Parse ``key=a..b`` / ``key=a,b`` / ``key=v`` tokens.

    Integer ranges over ``m``, ``n``, ``N`` and ``t`` double; others step by one.
    """
    if isinstance(tokens, str):
        tokens = tokens.split()
    sweep: dict[str, list] = {}
    for tok in tokens:
        if "=" not in tok:
            raise ValueError(f"sweep token {tok!r} is not key=value")
        key, text = tok.split("=", 1)
        sweep[key] = _expand_value(key, text)
    return sweep


def expand(sweep: dict[str, list]) -> list[Cell]:
    families = sweep.get("family", ["random"])
    learners = sweep.get("learner", ["offline"])
    strategies = sweep.get("strategy", ["separator"])
    oracles = sweep.get("oracle", ["exact"])
    seeds = sweep.get("seeds", [3])[0]
    seed0 = sweep.get("seed", [0])[0]
    for name in learners:
        if name not in LEARNERS:
            raise ValueError(f"unknown learner {name!r}")
    keys = [k for k in INSTANCE_KEYS if k in sweep]
    cells = []
    for family in families:
        for combo in itertools.product(*(sweep[k] for k in keys)):
            params = tuple(zip(keys, combo))
            for s in range(seed0, seed0 + seeds):
                for learner, strategy, oracle in itertools.product(learners, strategies, oracles):
                    if learner.startswith("dist"):
                        strategy = "-"
                    cells.append(Cell(family, params, s, learner, strategy, oracle))
    return list(dict.fromkeys(cells))


def build_instance(family: str, params: dict, seed: int) -> tuple[Hypergraph, list | None]:
    """Target hypergraph and, for ``h=`` sweeps, a worst-prefix insertion order."""
    p = dict(params)
    if family == "random":
        h = random_orderly_hypertree(
            m=p.get("m"), n=p.get("n") if "m" not in p else None, max_degree=p.get("delta", 3),
            seed=seed, require_private=bool(p.get("private", 0)),
        )
    elif family == "pn":
        h = hyperpath_pn(p.get("n", 8))
    elif family == "hdkn":
        h = family_hdkn(p.get("delta", 3), p.get("k", 2), p.get("N", 4))
    elif family == "bounded":
        h = family_bounded(p.get("k", 2), p.get("N", 4), p.get("d", 2))
    elif family in ("staircase", "staircase2"):
        h = tree_hypergraph(staircase(p.get("t", 8), whiskers=family == "staircase2"))
    else:
        raise ValueError(f"family {family!r} cannot be benchmarked")
    order = None
    if "h" in p:
        h, order = worst_prefix_order(h, p["h"], seed)
    return h, order


def _oracle(cell: Cell, h: Hypergraph):
    p = dict(cell.params)
    if cell.oracle == "exact":
        return exact_oracle(h)
    if cell.oracle == "adversary":
        return adversary_oracle_hkn(p.get("delta", 3), p.get("k", 2), p.get("N", 4))
    if cell.oracle == "bounded-adversary":
        return bounded_adversary_oracle(p.get("k", 2), p.get("N", 4), p.get("d", 2))
    raise ValueError(f"unknown oracle {cell.oracle!r}")


def run_cell(cell: Cell) -> dict:
    row = {c: "" for c in COLUMNS}
    row.update(instance_id=cell.instance_id, family=cell.family, seed=cell.seed, learner=cell.learner, strategy=cell.strategy)
    start = time.perf_counter()
    oracle = None
    try:
        h, order = build_instance(cell.family, dict(cell.params), cell.seed)
        oracle = _oracle(cell, h)
        delta = max(h.max_edge_degree(), 2)
        row.update(n=h.n, m=h.m, delta=h.max_edge_degree(), diameter=h.diameter())
        if cell.learner in ("online", "offline"):
            if cell.learner == "online":
                if order is None:
                    order = list(h.labels)
                    random.Random(cell.seed).shuffle(order)
                res = learn_online(order, oracle, cell.strategy)
            else:
                res = learn_offline(h.labels, oracle, cell.strategy)
            bound = sp_bound(h.n, h.m, delta)
            row.update(
                rounds_max=max((r.rounds for r in res.trace), default=0),
                splits_total=sum(r.split for r in res.trace),
            )
        else:
            fn = learn_dist1 if cell.learner == "dist1" else learn_dist2
            res = fn(h.labels, oracle)
            bound = h.m * h.n
        target = h if cell.oracle == "exact" else consistent_witness(oracle)
        if res.hypergraph != target:
            raise HyperlearnError("learned hypergraph differs from the target")
        row.update(queries=res.queries, bound=bound, ratio=f"{res.queries / bound:.4f}" if bound else "")
    except (HyperlearnError, ValueError) as exc:
        row["error"] = f"{type(exc).__name__}: {exc}"
        if oracle is not None:
            row["queries"] = oracle.queries
    row["wall_ms"] = f"{(time.perf_counter() - start) * 1000:.1f}"
    return row


def bench(sweep, workers: int = 1) -> list[dict]:
    """Run every cell of ``sweep``; rows come back in cell order."""
    cells = expand(parse_sweep(sweep) if not isinstance(sweep, dict) else sweep)
    if workers <= 1:
        return [run_cell(c) for c in cells]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(run_cell, cells, chunksize=4))


def write_csv(rows: list[dict], out=None) -> None:
    fh = open(out, "w", newline="") if isinstance(out, str) else (out or sys.stdout)
    try:
        w = csv.DictWriter(fh, fieldnames=COLUMNS)
        w.writeheader()
        w.writerows(rows)
    finally:
        if isinstance(out, str):
            fh.close()
