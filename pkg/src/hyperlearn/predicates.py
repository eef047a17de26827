"""Acyclicity predicates for hypergraphs, each computed from its definition.

The checks are brute force and meant for desk-scale instances: beta
acyclicity enumerates edge subsets, the Helly check enumerates maximal
cliques of the line graph.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from itertools import combinations, permutations

from .errors import InstanceTooLargeError
from .hypergraph import Hypergraph

BETA_EDGE_CAP = 16
CLIQUE_CAP = 100_000


@dataclass(frozen=True)
class FaginReport:
    isAcyclic: bool
    isConformal: bool
    isAlpha: bool
    isBeta: bool
    isGamma: bool
    isBerge: bool
    isHelly: bool
    isLineGraphChordal: bool
    isHypertree: bool
    isOrderly: bool
    isConnected: bool

    def as_dict(self) -> dict:
        return asdict(self)


# -- graph helpers ------------------------------------------------------------


def maximal_cliques(adj: dict, cap: int = CLIQUE_CAP):
    """Bron-Kerbosch with pivoting; yields frozensets of vertices."""
    count = 0
    stack = [(set(), set(adj), set())]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            count += 1
            if count > cap:
                raise InstanceTooLargeError(f"more than {cap} maximal cliques")
            yield frozenset(r)
            continue
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in list(p - adj[pivot]):
            stack.append((r | {v}, p & adj[v], x & adj[v]))
            p = p - {v}
            x = x | {v}


def is_chordal(adj: dict) -> bool:
    """Repeatedly delete a simplicial vertex; chordal iff the graph empties."""
    live = {v: set(ns) for v, ns in adj.items()}
    while live:
        for v, ns in live.items():
            if all(b in live[a] for a, b in combinations(ns, 2)):
                break
        else:
            return False
        for u in live[v]:
            live[u].discard(v)
        del live[v]
    return True


def primal_graph(h: Hypergraph) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {v: set() for v in range(h.n)}
    for e in h.edges:
        for a, b in combinations(e, 2):
            adj[a].add(b)
            adj[b].add(a)
    return adj


# -- Fagin's definitions ------------------------------------------------------


def find_graph_cycle(h: Hypergraph):
    """Return vertices ``u1..ut`` (t >= 3) whose trace family is exactly a cycle.

    The trace family ``H[U]`` after removing duplicates must equal
    ``{{u1,u2},...,{ut,u1}}``; any other non-empty trace disqualifies ``U``.
    Returns ``None`` when no such set exists.
    """
    sets = h.edge_sets
    inc = h.incidence
    primal = primal_graph(h)

    def trace_ok(seq, pos, closing):
        # every edge meets the chosen vertices in nothing or in a consecutive pair
        chosen = set(seq)
        t = len(seq)
        for e in {ei for v in seq for ei in inc[v]}:
            tr = sets[e] & chosen
            if len(tr) == 1:
                (v,) = tr
                i = pos[v]
                # a singleton is only tolerable at the still-open ends
                if closing or (0 < i < t - 1):
                    return False
            elif len(tr) == 2:
                a, b = sorted(tr, key=pos.__getitem__)
                if pos[b] - pos[a] != 1 and not (pos[a] == 0 and pos[b] == t - 1):
                    return False
            elif len(tr) > 2:
                return False
        return True

    def covered(a, b, chosen):
        return any(sets[e] & chosen == {a, b} for e in inc[a] if b in sets[e])

    for start in range(h.n):
        stack = [[start]]
        while stack:
            seq = stack.pop()
            pos = {v: i for i, v in enumerate(seq)}
            last = seq[-1]
            if len(seq) >= 3 and start in primal[last]:
                chosen = set(seq)
                if trace_ok(seq, pos, True) and all(
                    covered(seq[i], seq[(i + 1) % len(seq)], chosen) for i in range(len(seq))
                ):
                    return [h.labels[v] for v in seq]
            for w in primal[last]:
                # canonical start: smallest index in the cycle
                if w in pos or w < start:
                    continue
                nseq = seq + [w]
                npos = dict(pos)
                npos[w] = len(seq)
                if trace_ok(nseq, npos, False):
                    stack.append(nseq)
    return None


def is_fagin_acyclic(h: Hypergraph) -> bool:
    return find_graph_cycle(h) is None


def is_conformal(h: Hypergraph) -> bool:
    """Every vertex set whose pairs are all covered lies inside some edge."""
    primal = primal_graph(h)
    sets = h.edge_sets
    for clique in maximal_cliques(primal):
        if len(clique) < 2:
            continue
        if not any(clique <= e for e in sets):
            return False
    return True


def is_alpha_acyclic(h: Hypergraph) -> bool:
    return is_fagin_acyclic(h) and is_conformal(h)


def is_beta_acyclic(h: Hypergraph, cap: int = BETA_EDGE_CAP) -> bool:
    """All edge subfamilies are alpha-acyclic (enumerated literally)."""
    if h.m > cap:
        raise InstanceTooLargeError(f"beta check enumerates 2^{h.m} subsets (cap m <= {cap})")
    for r in range(1, h.m + 1):
        for keep in combinations(range(h.m), r):
            if not is_alpha_acyclic(h.restrict_edges(keep)):
                return False
    return True


def has_triple_pattern(h: Hypergraph, pattern) -> bool:
    """Search ordered triples ``(x, y, z)`` whose traces contain ``pattern``.

    ``pattern`` is a list of role strings, e.g. ``["xy", "y", "xyz"]``.
    """
    for x, y, z in permutations(range(h.n), 3):
        role = {"x": x, "y": y, "z": z}
        traces = {frozenset(e & {x, y, z}) for e in h.edge_sets}
        if all(frozenset(role[c] for c in p) in traces for p in pattern):
            return True
    return False


def is_gamma_acyclic(h: Hypergraph, cap: int = BETA_EDGE_CAP) -> bool:
    return is_beta_acyclic(h, cap) and not has_triple_pattern(h, ["xy", "yz", "xyz"])


def is_berge_acyclic(h: Hypergraph) -> bool:
    """The vertex-edge incidence graph is a forest."""
    parent = list(range(h.n + h.m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for i, e in enumerate(h.edges):
        for v in e:
            a, b = find(v), find(h.n + i)
            if a == b:
                return False
            parent[a] = b
    return True


def is_helly(h: Hypergraph) -> bool:
    """Every pairwise-intersecting subfamily has a common vertex."""
    sets = h.edge_sets
    for clique in maximal_cliques(h.line_graph()):
        if not clique:
            continue
        common = frozenset.intersection(*(sets[i] for i in clique))
        if not common:
            return False
    return True


def is_line_graph_chordal(h: Hypergraph) -> bool:
    return is_chordal(h.line_graph())


def is_hypertree(h: Hypergraph) -> bool:
    """Edges are subtrees of some host tree: chordal line graph plus Helly."""
    return is_line_graph_chordal(h) and is_helly(h)


def is_orderly(h: Hypergraph) -> bool:
    sets = h.edge_sets
    for a, b in combinations(range(h.m), 2):
        s = sets[a] & sets[b]
        if not s:
            continue
        for e in sets:
            if e & s and not s <= e:
                return False
    return True


def claim7_check(h: Hypergraph, cap: int = BETA_EDGE_CAP) -> bool:
    """Beta acyclic and free of the ``{xy}, {y}, {xyz}`` trace pattern."""
    return is_beta_acyclic(h, cap) and not has_triple_pattern(h, ["xy", "y", "xyz"])


def structural_predicates(h: Hypergraph, beta_cap: int = BETA_EDGE_CAP) -> FaginReport:
    acyclic = is_fagin_acyclic(h)
    conformal = is_conformal(h)
    beta = is_beta_acyclic(h, beta_cap)
    gamma = beta and not has_triple_pattern(h, ["xy", "yz", "xyz"])
    chordal = is_line_graph_chordal(h)
    helly = is_helly(h)
    return FaginReport(
        isAcyclic=acyclic,
        isConformal=conformal,
        isAlpha=acyclic and conformal,
        isBeta=beta,
        isGamma=gamma,
        isBerge=is_berge_acyclic(h),
        isHelly=helly,
        isLineGraphChordal=chordal,
        isHypertree=chordal and helly,
        isOrderly=is_orderly(h),
        isConnected=h.is_connected(),
    )
