"""Skeleton graphs: the bipartite black/colored encoding of a hypergraph.

Black nodes stand for edges. Colored nodes carry vertex sets: the private
vertices of an edge (blue, degree one) or a pairwise edge intersection (red,
degree two or more). For an orderly hypertree the skeleton is a tree and the
colored sets partition the vertex set.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass
from itertools import combinations
from typing import Iterable

from .hypergraph import Hypergraph, label_key

BLACK = "black"
COLORED = "colored"


@dataclass(frozen=True)
class SkeletonNode:
    kind: str
    edge: int | None = None
    vertices: frozenset = frozenset()

    @property
    def is_black(self) -> bool:
        return self.kind == BLACK


class SkeletonTree:
    """Immutable bipartite skeleton. ``adj[i]`` holds the neighbours of node ``i``."""

    def __init__(self, nodes: Iterable[SkeletonNode], adjacency: Iterable[Iterable[int]], partition_ok: bool = True):
        self.nodes: tuple[SkeletonNode, ...] = tuple(nodes)
        self.adj: tuple[frozenset[int], ...] = tuple(frozenset(a) for a in adjacency)
        self.partition_ok = partition_ok
        if len(self.adj) != len(self.nodes):
            raise ValueError("adjacency must list every node")

    @classmethod
    def from_edges(cls, nodes, pairs, partition_ok=True):
        adj = [set() for _ in nodes]
        for a, b in pairs:
            adj[a].add(b)
            adj[b].add(a)
        return cls(nodes, adj, partition_ok)

    def __len__(self):
        return len(self.nodes)

    def degree(self, i: int) -> int:
        return len(self.adj[i])

    def color(self, i: int) -> str:
        """``blue`` for colored nodes of degree <= 1, ``red`` otherwise."""
        if self.nodes[i].is_black:
            return BLACK
        return "blue" if len(self.adj[i]) <= 1 else "red"

    def black_nodes(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if nd.is_black]

    def colored_nodes(self) -> list[int]:
        return [i for i, nd in enumerate(self.nodes) if not nd.is_black]

    def node_of(self) -> dict:
        """Map each vertex label to the colored node holding it."""
        out = {}
        for i, nd in enumerate(self.nodes):
            for v in nd.vertices:
                out[v] = i
        return out

    def pairs(self) -> list[tuple[int, int]]:
        return [(a, b) for a in range(len(self.adj)) for b in self.adj[a] if a < b]

    def is_bipartite(self) -> bool:
        return all(self.nodes[a].is_black != self.nodes[b].is_black for a, b in self.pairs())

    def is_tree(self) -> bool:
        if not self.nodes:
            return False
        if len(self.pairs()) != len(self.nodes) - 1:
            return False
        seen = {0}
        stack = [0]
        while stack:
            for w in self.adj[stack.pop()]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        return len(seen) == len(self.nodes)

    def path(self, a: int, b: int) -> list[int]:
        """Shortest node path from ``a`` to ``b``; the unique one in a tree."""
        prev = {a: None}
        queue = deque([a])
        while queue:
            u = queue.popleft()
            if u == b:
                break
            for w in self.adj[u]:
                if w not in prev:
                    prev[w] = u
                    queue.append(w)
        if b not in prev:
            raise ValueError(f"nodes {a} and {b} are not connected")
        out = [b]
        while out[-1] != a:
            out.append(prev[out[-1]])
        return out[::-1]

    def path_length(self, a: int, b: int) -> int:
        """Number of black nodes on the path joining ``a`` and ``b``."""
        return sum(1 for i in self.path(a, b) if self.nodes[i].is_black)

    # -- serialization -------------------------------------------------------

    def to_dict(self) -> dict:
        nodes = []
        for nd in self.nodes:
            if nd.is_black:
                nodes.append({"kind": BLACK, "edge": nd.edge})
            else:
                nodes.append({"kind": COLORED, "vertices": sorted((str(v) for v in nd.vertices), key=label_key)})
        return {"nodes": nodes, "adjacency": [list(p) for p in self.pairs()]}

    @classmethod
    def from_dict(cls, data: dict) -> "SkeletonTree":
        nodes = []
        for nd in data["nodes"]:
            if nd["kind"] == BLACK:
                nodes.append(SkeletonNode(BLACK, edge=nd.get("edge")))
            elif nd["kind"] == COLORED:
                nodes.append(SkeletonNode(COLORED, vertices=frozenset(nd["vertices"])))
            else:
                raise ValueError(f"unknown node kind {nd['kind']!r}")
        return cls.from_edges(nodes, [tuple(p) for p in data["adjacency"]])

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    def __repr__(self):
        return f"SkeletonTree(black={len(self.black_nodes())}, colored={len(self.colored_nodes())})"


def build_skeleton(h: Hypergraph) -> SkeletonTree:
    """Skeleton graph of ``h``.

    Works for any hypergraph; ``partition_ok`` reports whether the colored
    sets partition the vertex set, which holds exactly when ``h`` is orderly.
    """
    sets = h.edge_sets
    nodes: list[SkeletonNode] = [SkeletonNode(BLACK, edge=i) for i in range(h.m)]
    pairs: list[tuple[int, int]] = []
    for i in range(h.m):
        private = frozenset(h.labels[v] for v in h.edges[i] if len(h.incidence[v]) == 1)
        if private:
            nodes.append(SkeletonNode(COLORED, vertices=private))
            pairs.append((i, len(nodes) - 1))
    reds: dict[frozenset[int], None] = {}
    for a, b in combinations(range(h.m), 2):
        s = sets[a] & sets[b]
        if s:
            reds.setdefault(s)
    for s in reds:
        nodes.append(SkeletonNode(COLORED, vertices=frozenset(h.labels[v] for v in s)))
        me = len(nodes) - 1
        for i, e in enumerate(sets):
            if s <= e:
                pairs.append((i, me))
    seen: set = set()
    ok = True
    for nd in nodes:
        if nd.is_black:
            continue
        if nd.vertices & seen:
            ok = False
        seen |= nd.vertices
    if seen != set(h.labels):
        ok = False
    return SkeletonTree.from_edges(nodes, pairs, partition_ok=ok)


def hypergraph_from_skeleton(s: SkeletonTree) -> Hypergraph:
    """Invert :func:`build_skeleton`: each black node's edge is the union of its colored neighbours."""
    edges = []
    for i in s.black_nodes():
        members = set()
        for j in s.adj[i]:
            if not s.nodes[j].vertices:
                raise ValueError(f"colored node {j} is unoccupied; edge {i} is under-determined")
            members |= s.nodes[j].vertices
        edges.append(sorted(members, key=label_key))
    vertices = sorted({v for j in s.colored_nodes() for v in s.nodes[j].vertices}, key=label_key)
    return Hypergraph(vertices, edges)


def _check_orderly_hypertree(sk: SkeletonTree) -> None:
    if not (sk.partition_ok and sk.is_tree()):
        raise ValueError("target is not an orderly hypertree (skeleton is not a partitioning tree)")


def induced_sub_skeleton(h: Hypergraph, vertices: Iterable) -> SkeletonTree:
    """Sub-skeleton of ``h`` induced on a vertex subset.

    Colored nodes are intersected with the subset, then the smallest subtree
    containing every non-empty colored node is kept. Unoccupied colored nodes
    inside that subtree survive with an empty vertex set.
    """
    full = build_skeleton(h)
    _check_orderly_hypertree(full)
    u = set(vertices)
    if not u:
        raise ValueError("vertex subset must be non-empty")
    nodes = [
        nd if nd.is_black else SkeletonNode(nd.kind, vertices=nd.vertices & u)
        for nd in full.nodes
    ]
    adj = [set(a) for a in full.adj]
    alive = set(range(len(nodes)))
    leaves = [i for i in alive if len(adj[i]) <= 1]
    while leaves:
        i = leaves.pop()
        if i not in alive or len(adj[i]) > 1:
            continue
        if not nodes[i].is_black and nodes[i].vertices:
            continue
        alive.discard(i)
        for w in adj[i]:
            adj[w].discard(i)
            if len(adj[w]) <= 1:
                leaves.append(w)
        adj[i] = set()
    return _compact(nodes, adj, alive)


def _compact(nodes, adj, alive) -> SkeletonTree:
    order = sorted(alive)
    remap = {old: new for new, old in enumerate(order)}
    return SkeletonTree(
        [nodes[i] for i in order],
        [{remap[w] for w in adj[i] if w in remap} for i in order],
    )


def collapse_leaves(s: SkeletonTree) -> SkeletonTree:
    """Merge colored leaves that hang off the same black node.

    Distances between vertices cannot tell such leaves apart, so this is the
    finest structure a distance-query learner can pin down for a prefix.
    """
    nodes = list(s.nodes)
    adj = [set(a) for a in s.adj]
    alive = set(range(len(nodes)))
    for b in s.black_nodes():
        leaves = sorted(j for j in adj[b] if not nodes[j].is_black and len(adj[j]) == 1)
        if len(leaves) < 2:
            continue
        keep = leaves[0]
        merged = set(nodes[keep].vertices)
        for j in leaves[1:]:
            merged |= nodes[j].vertices
            adj[b].discard(j)
            adj[j] = set()
            alive.discard(j)
        nodes[keep] = SkeletonNode(nodes[keep].kind, vertices=frozenset(merged))
    return _compact(nodes, adj, alive)


# -- canonical forms -------------------------------------------------------------


def _centers(s: SkeletonTree) -> list[int]:
    deg = {i: len(s.adj[i]) for i in range(len(s.nodes))}
    remaining = len(deg)
    layer = [i for i, d in deg.items() if d <= 1]
    removed = set()
    while remaining > 2:
        nxt = []
        for i in layer:
            removed.add(i)
            remaining -= 1
            for w in s.adj[i]:
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return [i for i in range(len(s.nodes)) if i not in removed]


def _node_label(s: SkeletonTree, i: int, labeled: bool) -> str:
    nd = s.nodes[i]
    if nd.is_black:
        return "B"
    if labeled:
        return "C[" + ",".join(sorted((str(v) for v in nd.vertices), key=label_key)) + "]"
    return ("b" if len(s.adj[i]) <= 1 else "r") + str(len(nd.vertices))


def rooted_encoding(s: SkeletonTree, root: int, labeled: bool = False) -> str:
    """AHU string of the tree rooted at ``root``, children sorted by encoding."""
    parent = {root: None}
    order = [root]
    for u in order:
        for w in s.adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    enc: dict[int, str] = {}
    for u in reversed(order):
        kids = sorted(enc[w] for w in s.adj[u] if parent.get(w) == u and w != parent[u])
        enc[u] = _node_label(s, u, labeled) + "(" + "".join(kids) + ")"
    return enc[root]


def canonical_form(s: SkeletonTree, labeled: bool = False) -> str:
    """Centre-rooted canonical string; equal strings mean isomorphic skeletons.

    With ``labeled=False`` colored nodes are told apart only by colour and
    occupancy size. With ``labeled=True`` they carry their exact vertex sets.
    """
    if not s.is_tree():
        raise ValueError("canonical form is only defined for trees")
    return min(rooted_encoding(s, c, labeled) for c in _centers(s))


def is_isomorphic(a: SkeletonTree, b: SkeletonTree) -> bool:
    return canonical_form(a) == canonical_form(b)


def same_labeled(a: SkeletonTree, b: SkeletonTree) -> bool:
    return canonical_form(a, labeled=True) == canonical_form(b, labeled=True)
