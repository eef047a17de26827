"""Shared helpers for the test suite: enumerations and independent oracles."""

import itertools
from contextlib import contextmanager

import networkx as nx

from hyperlearn.hypergraph import Hypergraph

CRITERIA: list[str] = []


@contextmanager
def criterion(key: str, title: str):
    """Record one PASS/FAIL line; the body fills ``detail`` and asserts."""
    detail: dict = {}
    try:
        yield detail
    except BaseException as exc:
        prefix = f"{detail['text']}; " if detail.get("text") else ""
        line = f"CRITERION {key} FAIL  {title}: {prefix}{type(exc).__name__}: {exc}"
        CRITERIA.append(line)
        print(line)
        raise
    line = f"CRITERION {key} PASS  {title}: {detail.get('text', '')}"
    CRITERIA.append(line)
    print(line)


def all_hypergraphs(n: int, max_m: int):
    """Every non-nested family of at most ``max_m`` edges (size >= 2) over ``n`` labels."""
    pool = [frozenset(c) for k in range(2, n + 1) for c in itertools.combinations(range(n), k)]
    labels = [f"x{i}" for i in range(n)]
    for m in range(1, max_m + 1):
        for fam in itertools.combinations(pool, m):
            if any(a < b or b < a for a, b in itertools.combinations(fam, 2)):
                continue
            used = sorted(set().union(*fam))
            yield Hypergraph([labels[i] for i in used], [[labels[i] for i in sorted(e)] for e in fam])


def incidence_graph(h: Hypergraph) -> nx.Graph:
    g = nx.Graph()
    g.add_nodes_from(("v", v) for v in h.labels)
    for i in range(h.m):
        for v in h.edge_labels(i):
            g.add_edge(("e", i), ("v", v))
    return g


def nx_distance(h: Hypergraph, u, v) -> float:
    """Hypergraph distance as half the incidence-graph distance."""
    try:
        return nx.shortest_path_length(incidence_graph(h), ("v", u), ("v", v)) // 2
    except nx.NetworkXNoPath:
        return float("inf")


def prufer_trees(n: int):
    """All labelled trees on ``range(n)`` as adjacency dicts (Cayley enumeration)."""
    if n == 1:
        yield {0: set()}
        return
    if n == 2:
        yield {0: {1}, 1: {0}}
        return
    for seq in itertools.product(range(n), repeat=n - 2):
        g = nx.from_prufer_sequence(list(seq))
        yield {u: set(g[u]) for u in g}


def has_host_tree(h: Hypergraph) -> bool:
    """Brute force: some tree on V makes every edge induce a connected subtree."""
    index = {v: i for i, v in enumerate(h.labels)}
    edges = [[index[v] for v in h.edge_labels(i)] for i in range(h.m)]
    for adj in prufer_trees(h.n):
        ok = True
        for e in edges:
            s = set(e)
            seen = {e[0]}
            stack = [e[0]]
            while stack:
                for w in adj[stack.pop()]:
                    if w in s and w not in seen:
                        seen.add(w)
                        stack.append(w)
            if len(seen) != len(s):
                ok = False
                break
        if ok:
            return True
    return False
