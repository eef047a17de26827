"""The path depth game on rooted trees: exact solver, simulator and players.

In each round the minimizer deletes the edges of a path; the maximizer then
keeps one of the exposed rooted subtrees. The game ends at a single vertex.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Iterable, Sequence

from .errors import ContractError, InstanceTooLargeError
from .strategies import greedy_farthest_leaf, separator_leaf, stage_of

NODE_CAP = 64


@dataclass(frozen=True)
class RootedTree:
    """``parent[i]`` is the parent of node ``i``; the root has parent ``-1``.

    ``ids`` optionally names each node (e.g. by its index in a larger tree).
    """

    parent: tuple[int, ...]
    ids: tuple | None = None

    def __post_init__(self):
        roots = [i for i, p in enumerate(self.parent) if p < 0]
        if len(roots) != 1:
            raise ValueError(f"expected exactly one root, found {len(roots)}")
        seen = set()
        for i in range(len(self.parent)):
            path = set()
            u = i
            while u >= 0 and u not in seen:
                if u in path:
                    raise ValueError("parent links contain a cycle")
                path.add(u)
                u = self.parent[u]
            seen |= path

    @classmethod
    def from_children(cls, children: dict[int, Sequence[int]], root: int = 0) -> "RootedTree":
        nodes = set(children) | {c for cs in children.values() for c in cs} | {root}
        parent = [-1] * len(nodes)
        for u, cs in children.items():
            for c in cs:
                parent[c] = u
        return cls(tuple(parent))

    @property
    def n(self) -> int:
        return len(self.parent)

    @cached_property
    def root(self) -> int:
        return next(i for i, p in enumerate(self.parent) if p < 0)

    @cached_property
    def children(self) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {i: [] for i in range(self.n)}
        for i, p in enumerate(self.parent):
            if p >= 0:
                out[p].append(i)
        return out

    @cached_property
    def adjacency(self) -> dict[int, set[int]]:
        adj = {i: set(self.children[i]) for i in range(self.n)}
        for i, p in enumerate(self.parent):
            if p >= 0:
                adj[i].add(p)
        return adj

    def leaves(self) -> list[int]:
        """Childless nodes (the root counts only when it is alone)."""
        return [i for i in range(self.n) if not self.children[i]]

    def max_degree(self) -> int:
        return max((len(a) for a in self.adjacency.values()), default=0)

    def depth(self) -> int:
        best = 0
        stack = [(self.root, 0)]
        while stack:
            u, d = stack.pop()
            best = max(best, d)
            stack.extend((c, d + 1) for c in self.children[u])
        return best

    def path_to(self, v: int) -> list[int]:
        out = [v]
        while self.parent[out[-1]] >= 0:
            out.append(self.parent[out[-1]])
        return out[::-1]

    def ahu(self) -> str:
        enc: dict[int, str] = {}
        order = [self.root]
        for u in order:
            order.extend(self.children[u])
        for u in reversed(order):
            enc[u] = "(" + "".join(sorted(enc[c] for c in self.children[u])) + ")"
        return enc[self.root]

    def induced(self, nodes: Iterable[int]) -> "RootedTree":
        """Subtree on a connected node set, rooted at its node nearest the root."""
        keep = sorted(nodes)
        idx = {u: i for i, u in enumerate(keep)}
        parent = tuple(idx.get(self.parent[u], -1) for u in keep)
        ids = tuple(self.ids[u] for u in keep) if self.ids else tuple(keep)
        return RootedTree(parent, ids)

    def to_dict(self) -> dict:
        return {"parent": list(self.parent)}

    @classmethod
    def from_dict(cls, data: dict) -> "RootedTree":
        return cls(tuple(data["parent"]))

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))


# -- constructions --------------------------------------------------------------


def build_base_tree(delta: int, k: int) -> RootedTree:
    """Complete rooted tree of depth ``k`` with out-degree ``delta``."""
    if delta < 1 or k < 0:
        raise ValueError("need delta >= 1 and k >= 0")
    parent = [-1]
    level = [0]
    for _ in range(k):
        nxt = []
        for u in level:
            for _ in range(delta):
                parent.append(u)
                nxt.append(len(parent) - 1)
        level = nxt
    return RootedTree(tuple(parent))


def build_r(i: int, j: int, delta: int) -> RootedTree:
    """Root with ``2i + 1`` children, each the root of a copy of ``T_delta^j``."""
    if i < 0 or j < 0:
        raise ValueError("need i, j >= 0")
    sub = build_base_tree(delta, j)
    parent = [-1]
    for _ in range(2 * i + 1):
        off = len(parent)
        parent.extend(off + p if p >= 0 else 0 for p in sub.parent)
    return RootedTree(tuple(parent))


def random_tree(n: int, max_degree: int, rng) -> RootedTree:
    """Random recursive tree on ``n`` nodes with every degree at most ``max_degree``."""
    if max_degree < 2 and n > 2:
        raise ValueError("max_degree must be at least 2 for n > 2")
    parent = [-1]
    deg = [0]
    for v in range(1, n):
        open_ = [u for u in range(v) if deg[u] < max_degree]
        u = rng.choice(open_)
        parent.append(u)
        deg[u] += 1
        deg.append(1)
    return RootedTree(tuple(parent))


# -- game mechanics ----------------------------------------------------------------


def split(tree: RootedTree, path: Sequence[int]) -> list[RootedTree]:
    """Delete the edges of ``path`` and return the exposed rooted subtrees."""
    validate_path(tree, path)
    on_path = set(path)
    adj = tree.adjacency
    comps = []
    for p in path:
        comp = [p]
        stack = [w for w in adj[p] if w not in on_path]
        seen = set(stack) | {p}
        while stack:
            u = stack.pop()
            comp.append(u)
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        comps.append(tree.induced(comp))
    return comps


def validate_path(tree: RootedTree, path: Sequence[int]) -> None:
    if len(path) < 2:
        raise ContractError(f"path must delete at least one edge, got {list(path)}")
    if len(set(path)) != len(path):
        raise ContractError(f"path repeats a node: {list(path)}")
    for a, b in zip(path, path[1:]):
        if not (0 <= a < tree.n and 0 <= b < tree.n) or b not in tree.adjacency[a]:
            raise ContractError(f"nodes {a} and {b} are not adjacent")


MinPlayer = Callable[[RootedTree], Sequence[int]]
MaxPlayer = Callable[[RootedTree, list[RootedTree]], int]


def play_game(tree: RootedTree, pi_min: MinPlayer, pi_max: MaxPlayer, max_rounds: int = 10_000) -> int:
    """Simulate the game and return the number of rounds played."""
    rounds = 0
    while tree.n > 1:
        if rounds >= max_rounds:
            raise ContractError("game did not terminate")
        path = pi_min(tree)
        comps = split(tree, path)
        pick = pi_max(tree, comps)
        if not isinstance(pick, int) or not 0 <= pick < len(comps):
            raise ContractError(f"maximizer chose {pick!r}, not one of {len(comps)} subtrees")
        tree = comps[pick]
        rounds += 1
    return rounds


# -- minimizer players ------------------------------------------------------------


def separator_min(delta: int | None = None) -> MinPlayer:
    """Staged separator play; ``delta`` defaults to the max degree of the tree seen first."""
    fixed = {"b": delta}

    def play(tree: RootedTree) -> list[int]:
        if fixed["b"] is None:
            fixed["b"] = tree.max_degree()
        leaf = separator_leaf(tree.root, tree.children, fixed["b"])
        return tree.path_to(leaf)

    return play


def greedy_min() -> MinPlayer:
    """Always take the path to a deepest leaf."""

    def play(tree: RootedTree) -> list[int]:
        return tree.path_to(greedy_farthest_leaf(tree.root, tree.children))

    return play


def optimal_min(solver: "PathDepthSolver | None" = None) -> MinPlayer:
    """A minimizer achieving the exact game value."""
    solver = solver or PathDepthSolver()

    def play(tree: RootedTree) -> list[int]:
        return solver.best_path(tree)

    return play


# -- maximizer players ----------------------------------------------------------


def largest_max() -> MaxPlayer:
    """Keep the subtree with the most nodes."""
    return lambda tree, comps: max(range(len(comps)), key=lambda i: (comps[i].n, -i))


def exhaustive_max(pi_min: MinPlayer) -> MaxPlayer:
    """Maximizer that looks ahead against a deterministic minimizer.

    Subtrees are memoized by their node ids in the original tree, so the
    minimizer must be a function of the subtree it is shown.
    """
    memo: dict = {}

    def rounds(tree: RootedTree) -> int:
        key = tree.ids
        if key in memo:
            return memo[key]
        if tree.n == 1:
            memo[key] = 0
            return 0
        comps = split(tree, pi_min(tree))
        memo[key] = 1 + max(rounds(c) for c in comps)
        return memo[key]

    def play(tree: RootedTree, comps: list[RootedTree]) -> int:
        return max(range(len(comps)), key=lambda i: (rounds(comps[i]), -i))

    play.rounds = rounds
    return play


def worst_case_rounds(tree: RootedTree, pi_min: MinPlayer) -> int:
    """Rounds ``pi_min`` needs against the exhaustive maximizer."""
    if tree.ids is None:
        tree = RootedTree(tree.parent, tuple(range(tree.n)))
    return exhaustive_max(pi_min).rounds(tree)


# -- exact solver --------------------------------------------------------------------


class PathDepthSolver:
    """Exact minimax value with iterative deepening and a shared memo.

    The value does not depend on the root (paths are arbitrary and the
    maximizer picks among components), so subproblems are keyed by an
    unrooted canonical form. Two reductions keep the search small: only
    leaf-to-leaf paths are tried, since deleting more edges never helps the
    maximizer, and degree-2 vertices are suppressed, since a maximal path
    covers a whole chain of them or none of it.
    """

    def __init__(self, cap: int = NODE_CAP):
        self.cap = cap
        self.bounds: dict[str, tuple[int, float]] = {}
        self.moves: dict[str, list] = {}
        self.by_nodes: dict[frozenset, tuple] = {}

    def value(self, tree: RootedTree) -> int:
        adj = _smooth({u: set(ws) for u, ws in tree.adjacency.items()})
        if len(adj) > self.cap:
            raise InstanceTooLargeError(
                f"exact path depth needs at most {self.cap} branching nodes, got {len(adj)}"
            )
        self.by_nodes.clear()
        b = 0
        while not self._le(adj, b):
            b += 1
        return b

    def best_path(self, tree: RootedTree) -> list[int]:
        """A leaf-to-leaf path of ``tree`` that achieves the game value."""
        target = self.value(tree)
        adj = {u: set(ws) for u, ws in tree.adjacency.items()}
        for path, comps in _moves(adj):
            if all(self._le_sub(c, target - 1) for c in comps):
                return path
        raise AssertionError("solver found no path achieving its own value")

    def _le(self, adj: dict, b: int, key: str | None = None) -> bool:
        if len(adj) == 1:
            return b >= 0
        if b <= 0:
            return False
        if len(adj) == 2:
            return True
        key = key or _unrooted_key(adj)
        lo, hi = self.bounds.get(key, (1, float("inf")))
        if hi <= b:
            return True
        if lo > b:
            return False
        if key not in self.moves:
            self.moves[key] = [comps for _path, comps in _moves(adj)]
        moves = self.moves[key]
        for i, children in enumerate(moves):
            if all(self._le_sub(c, b - 1) for c in children):
                # try the winning move first next time
                moves.insert(0, moves.pop(i))
                self.bounds[key] = (lo, b)
                return True
            # the refuting component goes first for later probes of this move
            children.sort(key=lambda c: not self._known_gt(c, b - 1))
        self.bounds[key] = (b + 1, hi)
        return False

    def _known_gt(self, sub: "_Sub", b: int) -> bool:
        if sub.key is None:
            return sub.adj is not None and len(sub.adj) > 1 and b <= 0
        return self.bounds.get(sub.key, (1, 0))[0] > b

    def _le_sub(self, sub: "_Sub", b: int) -> bool:
        if sub.adj is None:
            # a component is fixed by its node set: the smoothed Steiner tree of it
            raw = _materialize(sub.raw)
            nodes = frozenset(raw)
            hit = self.by_nodes.get(nodes)
            if hit is None:
                adj = _smooth(raw)
                hit = (adj, _unrooted_key(adj) if len(adj) > 2 else None)
                self.by_nodes[nodes] = hit
            sub.adj, sub.key = hit
            sub.raw = None
        return self._le(sub.adj, b, sub.key)


class _Sub:
    """A component whose smoothing and key are computed on first use."""

    __slots__ = ("raw", "size", "adj", "key")

    def __init__(self, raw, size):
        self.raw = raw
        self.size = size
        self.adj = None
        self.key = None


def _smooth(adj: dict) -> dict:
    """Suppress degree-2 vertices in place (keeps at least one edge)."""
    stack = [u for u in adj if len(adj[u]) == 2]
    while stack and len(adj) > 2:
        u = stack.pop()
        if u not in adj or len(adj[u]) != 2:
            continue
        a, b = adj.pop(u)
        adj[a].discard(u)
        adj[b].discard(u)
        adj[a].add(b)
        adj[b].add(a)
    return adj


def _moves(adj: dict):
    """Leaf-to-leaf paths, most balanced first, with their nontrivial components.

    A component is the path node ``p`` plus its branches away from its path
    neighbours, so it is shared (as one :class:`_Sub`) by every path that
    meets ``p`` through the same neighbours.
    """
    leaves = sorted(u for u in adj if len(adj[u]) <= 1)
    shared: dict = {}
    moves = []
    for i, a in enumerate(leaves):
        parent = {a: None}
        order = [a]
        for u in order:
            for w in adj[u]:
                if w not in parent:
                    parent[w] = u
                    order.append(w)
        size = dict.fromkeys(order, 1)
        for u in reversed(order):
            if parent[u] is not None:
                size[parent[u]] += size[u]
        for b in leaves[i + 1:]:
            path = [b]
            comps = []
            nxt = None
            u = b
            while u is not None:
                sz = size[u] - (size[nxt] if nxt is not None else 0)
                if sz > 1:
                    desc = (u, frozenset(x for x in (parent[u], nxt) if x is not None))
                    sub = shared.get(desc)
                    if sub is None:
                        sub = shared[desc] = _Sub((adj, u, desc[1]), sz)
                    comps.append(sub)
                nxt, u = u, parent[u]
                if u is not None:
                    path.append(u)
            comps.sort(key=lambda c: c.size, reverse=True)
            moves.append((comps[0].size if comps else 1, path, comps))
    moves.sort(key=lambda t: t[0])
    for _, path, comps in moves:
        yield path, comps


def _materialize(raw) -> dict:
    adj, p, cut = raw
    out = {p: set()}
    stack = [p]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w in out or (u == p and w in cut):
                continue
            out[u].add(w)
            out[w] = {u}
            stack.append(w)
    return out


def _unrooted_key(adj: dict) -> str:
    deg = {u: len(ws) for u, ws in adj.items()}
    layer = [u for u in adj if deg[u] <= 1]
    remaining = len(adj)
    removed = set()
    while remaining > 2:
        nxt = []
        for u in layer:
            removed.add(u)
            remaining -= 1
            for w in adj[u]:
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return min(_rooted_key(adj, c) for c in adj if c not in removed)


def _rooted_key(adj: dict, root) -> str:
    parent = {root: None}
    order = [root]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    enc: dict = {}
    for u in reversed(order):
        enc[u] = "(" + "".join(sorted(enc[w] for w in adj[u] if parent.get(w) == u)) + ")"
    return enc[root]


def exact_path_depth(tree: RootedTree, cap: int = NODE_CAP, solver: PathDepthSolver | None = None) -> int:
    """Game value under optimal play by both sides."""
    solver = solver or PathDepthSolver(cap)
    solver.cap = cap
    return solver.value(tree)


def separator_bound(delta: int, leaves: int) -> int:
    """Stage bound ``2 * delta * ceil(log_delta leaves)``."""
    b = max(delta, 2)
    return 2 * b * stage_of(leaves, b)
