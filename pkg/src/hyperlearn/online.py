"""Online learner: reconstruct an orderly hypertree from shortest-path queries.

Vertices arrive one at a time. The learner keeps the sub-skeleton induced on
the vertices seen so far, with colored leaves under a common black node
merged (distances cannot separate them). Each arrival is located by a short
series of three-point queries against the current tree.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .errors import InconsistentOracleError, PreconditionError
from .hypergraph import UNREACHABLE, Hypergraph, label_key
from .oracle import DistanceOracle, OracleStats
from .skeleton import BLACK, COLORED, SkeletonNode, SkeletonTree, hypergraph_from_skeleton
from .strategies import STRATEGIES, greedy_farthest_leaf, separator_leaf


@dataclass
class InsertRecord:
    vertex: str
    phase: int
    queries: int
    rounds: int = 0
    k: int | None = None
    attach: str | None = None
    residual: int | None = None
    split: bool = False

    def to_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class LearnResult:
    hypergraph: Hypergraph
    skeleton: SkeletonTree
    queries: int
    stats: OracleStats
    strategy: str
    trace: list[InsertRecord] = field(default_factory=list)
    moves: dict = field(default_factory=dict)


class _Region:
    """Children mapping of the current search region: a subtree minus some root branches."""

    def __init__(self, children: dict, root: int, excluded: set):
        self.children = children
        self.root = root
        self.excluded = excluded

    def get(self, u, default=()):
        kids = self.children.get(u, default)
        if u == self.root and self.excluded:
            return [c for c in kids if c not in self.excluded]
        return kids

    def __getitem__(self, u):
        return self.get(u)


class _RegionCounts:
    """Leaf counts inside the region, read from the learner's subtree counts."""

    def __init__(self, region: _Region, leaves: dict):
        self.region = region
        self.leaves = leaves

    def __getitem__(self, u):
        if u == self.region.root:
            kids = self.region.get(u)
            return sum(self.leaves[c] for c in kids) if kids else 1
        return self.leaves[u]


class OnlineLearner:
    """Incremental learner state. Call :meth:`insert` once per vertex."""

    def __init__(self, oracle: DistanceOracle, strategy: str = "separator"):
        if strategy not in STRATEGIES:
            raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
        self.oracle = oracle
        self.strategy = strategy
        self.order: list = []
        self.phase = 1
        self.kind: dict[int, str] = {}
        self.members: dict[int, set] = {}
        self.adj: dict[int, set] = {}
        self.parent: dict[int, int | None] = {}
        self.children: dict[int, list] = {}
        self.bdepth: dict[int, int] = {}
        self.leaves: dict[int, int] = {}
        self.where: dict = {}
        self.root: int | None = None
        self.max_degree = 0
        self.trace: list[InsertRecord] = []
        self.moves: dict = {}
        self._next = 0

    # -- tree bookkeeping ------------------------------------------------------

    def _new(self, kind: str, parent: int | None, members=()) -> int:
        i = self._next
        self._next += 1
        self.kind[i] = kind
        self.adj[i] = set()
        self.children[i] = []
        self.parent[i] = parent
        if kind == COLORED:
            self.members[i] = set()
            for v in members:
                self._place(v, i)
        self.leaves[i] = 1
        if parent is None:
            self.bdepth[i] = int(kind == BLACK)
        else:
            self._link(parent, i)
            self.children[parent].append(i)
            self.bdepth[i] = self.bdepth[parent] + (kind == BLACK)
            if len(self.children[parent]) > 1:
                self._bump(parent, 1)
        return i

    def _bump(self, u: int | None, delta: int) -> None:
        while u is not None:
            self.leaves[u] += delta
            u = self.parent[u]

    def _link(self, a: int, b: int) -> None:
        self.adj[a].add(b)
        self.adj[b].add(a)
        self.max_degree = max(self.max_degree, len(self.adj[a]), len(self.adj[b]))

    def _place(self, v, node: int) -> None:
        old = self.where.get(v)
        if old is not None:
            self.members[old].discard(v)
            self.moves[v] = self.moves.get(v, 0) + 1
        self.members[node].add(v)
        self.where[v] = node

    def _delete_leaf(self, i: int) -> None:
        p = self.parent[i]
        self.adj[p].discard(i)
        self.children[p].remove(i)
        if self.children[p]:
            self._bump(p, -1)
        for table in (self.kind, self.adj, self.parent, self.children, self.bdepth, self.members, self.leaves):
            table.pop(i, None)

    def _chain(self, start: int, blacks: int, v) -> None:
        """Hang ``blacks`` black nodes below ``start``, unoccupied reds between, ``v`` at the end."""
        cur = start
        for i in range(blacks):
            cur = self._new(BLACK, cur)
            cur = self._new(COLORED, cur, [v] if i == blacks - 1 else ())

    def _reroot(self) -> None:
        self.root = self.where[self.order[0]]
        self.parent = {self.root: None}
        self.children = {i: [] for i in self.kind}
        self.bdepth = {self.root: 0}
        queue = [self.root]
        for u in queue:
            for w in sorted(self.adj[u]):
                if w not in self.parent:
                    self.parent[w] = u
                    self.children[u].append(w)
                    self.bdepth[w] = self.bdepth[u] + (self.kind[w] == BLACK)
                    queue.append(w)
        for u in reversed(queue):
            kids = self.children[u]
            self.leaves[u] = sum(self.leaves[c] for c in kids) if kids else 1

    def _leaf_neighbour(self, black: int) -> int | None:
        leaves = [j for j in self.adj[black] if len(self.adj[j]) == 1]
        return min(leaves) if leaves else None

    # -- queries ---------------------------------------------------------------

    def _sp(self, u, v) -> int:
        d = self.oracle.sp(u, v)
        if d == UNREACHABLE:
            raise InconsistentOracleError(f"d({u}, {v}) is unreachable; target must be connected")
        if not isinstance(d, int) or d < 1:
            raise InconsistentOracleError(f"d({u}, {v}) = {d!r} for distinct vertices")
        return d

    # -- insertion -------------------------------------------------------------

    def insert(self, v) -> InsertRecord:
        if v in self.where:
            raise ValueError(f"vertex {v!r} inserted twice")
        before = self.oracle.queries
        if not self.order:
            self.order.append(v)
            rec = InsertRecord(v, 1, 0)
        elif self.phase == 1:
            rec = self._insert_phase1(v)
        else:
            rec = self._insert_phase2(v)
        rec.queries = self.oracle.queries - before
        self.trace.append(rec)
        return rec

    def _insert_phase1(self, v) -> InsertRecord:
        dist = {u: self._sp(u, v) for u in self.order}
        self.order.append(v)
        r = max(dist.values())
        if r == 1:
            return InsertRecord(v, 1, 0)
        near = [u for u in self.order[:-1] if dist[u] == r - 1]
        far = [u for u in self.order[:-1] if dist[u] == r]
        if len(near) + len(far) != len(dist):
            raise InconsistentOracleError(f"vertices of one edge are at distances {sorted(set(dist.values()))} from {v}")
        # first node is created without a parent; the tree is re-rooted below
        if far:
            x = self._new(COLORED, None, far)
            beta = self._new(BLACK, x)
            y = self._new(COLORED, beta, near)
        else:
            y = self._new(COLORED, None, near)
        self._chain(y, r - 1, v)
        self.phase = 2
        self._reroot()
        return InsertRecord(v, 1, 0, attach="phase1", residual=r, split=bool(far and near))

    def _pick_leaf(self, region: _Region) -> int:
        if self.strategy == "separator":
            counts = _RegionCounts(region, self.leaves)
            return separator_leaf(region.root, region, max(self.max_degree, 2), counts=counts)
        kind = self.kind
        return greedy_farthest_leaf(region.root, region, weight=lambda u: kind[u] == BLACK)

    def _insert_phase2(self, v) -> InsertRecord:
        v1 = self.order[0]
        self.order.append(v)
        d1n = self._sp(v1, v)
        known = {v1: d1n}
        region = _Region(self.children, self.root, set())
        rec = InsertRecord(v, 2, 0)
        meet = residual = None
        first = True
        while region.get(region.root):
            rec.rounds += 1
            leaf = self._pick_leaf(region)
            vb = min(self.members[leaf], key=label_key)
            dbn = known[vb] = self._sp(vb, v)
            k = d1n + dbn - self.bdepth[leaf]
            if k < 0:
                raise InconsistentOracleError(f"negative tripod leg while placing {v}")
            want = COLORED if k % 2 == 0 else BLACK
            offset = d1n - k // 2
            path = [leaf]
            while path[-1] != region.root:
                path.append(self.parent[path[-1]])
            hits = [u for u in path if self.kind[u] == want and self.bdepth[u] == offset]
            if not hits:
                raise InconsistentOracleError(f"answers for {v} point outside the search region")
            meet = hits[0]
            residual = k // 2 if k % 2 == 0 else (k + 1) // 2
            rec.k = k
            if first and k == 1 and offset == 1 and len(self.adj[self.root]) >= 2:
                if self._in_root(v, meet, known):
                    meet, residual, rec.k = self.root, 0, 0
                    break
            first = False
            if meet == leaf:
                break
            toward = path[path.index(meet) - 1]
            if meet == region.root:
                region.excluded.add(toward)
            else:
                region = _Region(self.children, meet, {toward})
        if meet is None:
            raise InconsistentOracleError("empty search region")
        if self.kind[meet] == COLORED:
            rec.attach = "colored"
            rec.split = self._attach_colored(v, meet, residual, known)
        else:
            rec.attach = "black"
            rec.split = self._attach_black(v, meet, residual, known)
        rec.residual = residual
        return rec

    def _in_root(self, v, meet: int, known: dict) -> bool:
        """First-round check: does ``v`` sit in the root node itself?

        The tripod cannot tell the root apart from a new node under the first
        black, so probe a vertex reached through a different black.
        """
        other = min(c for c in self.children[self.root] if c != meet)
        u = other
        while self.children[u]:
            u = self.children[u][0]
        w = min(self.members[u], key=label_key)
        d = known[w] = self._sp(w, v)
        return d == self.bdepth[u]

    def _attach_colored(self, v, node: int, j: int, known: dict) -> bool:
        if j == 0:
            self._place(v, node)
            return False
        split = False
        if len(self.adj[node]) == 1:
            black = next(iter(self.adj[node]))
            dist = {w: known[w] if w in known else self._sp(w, v) for w in sorted(self.members[node], key=label_key)}
            if any(d not in (j, j + 1) for d in dist.values()):
                raise InconsistentOracleError(f"leaf members at distances {sorted(set(dist.values()))}, expected {j} or {j + 1}")
            far = [w for w, d in dist.items() if d == j + 1]
            if len(far) == len(dist):
                raise InconsistentOracleError(f"no member of the attachment node is at distance {j}")
            if far:
                self._new(COLORED, black, far)
                split = True
        self._chain(node, j, v)
        return split

    def _attach_black(self, v, node: int, j: int, known: dict) -> bool:
        u = self._leaf_neighbour(node)
        if j == 1:
            if u is None:
                self._new(COLORED, node, [v])
            else:
                self._place(v, u)
            return False
        y = self._new(COLORED, node)
        split = False
        if u is not None:
            dist = {w: known[w] if w in known else self._sp(w, v) for w in sorted(self.members[u], key=label_key)}
            if any(d not in (j - 1, j) for d in dist.values()):
                raise InconsistentOracleError(f"leaf members at distances {sorted(set(dist.values()))}, expected {j - 1} or {j}")
            near = [w for w, d in dist.items() if d == j - 1]
            for w in near:
                self._place(w, y)
            split = bool(near)
            if not self.members[u]:
                if u == self.root:
                    raise InconsistentOracleError("the first vertex cannot leave its node")
                self._delete_leaf(u)
        self._chain(y, j - 1, v)
        return split

    # -- export ----------------------------------------------------------------

    def skeleton(self) -> SkeletonTree:
        """Current sub-skeleton as an immutable :class:`SkeletonTree`."""
        if self.phase == 1:
            if len(self.order) <= 1:
                return SkeletonTree([SkeletonNode(COLORED, vertices=frozenset(self.order))], [[]])
            nodes = [SkeletonNode(COLORED, vertices=frozenset(self.order)), SkeletonNode(BLACK, edge=0)]
            return SkeletonTree(nodes, [[1], [0]])
        ids = sorted(self.kind)
        remap = {old: new for new, old in enumerate(ids)}
        nodes = []
        edge = 0
        for i in ids:
            if self.kind[i] == BLACK:
                nodes.append(SkeletonNode(BLACK, edge=edge))
                edge += 1
            else:
                nodes.append(SkeletonNode(COLORED, vertices=frozenset(self.members[i])))
        return SkeletonTree(nodes, [{remap[w] for w in self.adj[i]} for i in ids])


def learn_online(
    sequence: Sequence,
    oracle: DistanceOracle,
    strategy: str = "separator",
    on_insert: Callable[[int, OnlineLearner], None] | None = None,
) -> LearnResult:
    """Learn the orderly hypertree behind ``oracle`` by inserting ``sequence`` in order.

    ``on_insert(i, learner)`` runs after the ``i``-th insertion (1-based).
    Raises :class:`PreconditionError` when every pair is adjacent (a single
    edge), and :class:`InconsistentOracleError` when answers contradict the
    orderly-hypertree model.
    """
    seq = list(sequence)
    if len(set(seq)) != len(seq):
        raise ValueError("sequence repeats a vertex")
    if len(seq) < 2:
        raise PreconditionError("need at least two vertices")
    learner = OnlineLearner(oracle, strategy)
    for i, v in enumerate(seq, 1):
        learner.insert(v)
        if on_insert is not None:
            on_insert(i, learner)
    if learner.phase == 1:
        raise PreconditionError("every pair of vertices is adjacent; diameter < 3 precondition violated")
    sk = learner.skeleton()
    try:
        h = hypergraph_from_skeleton(sk)
    except ValueError as exc:
        raise InconsistentOracleError(f"learned skeleton is incomplete: {exc}") from None
    return LearnResult(h, sk, oracle.queries, oracle.stats, strategy, learner.trace, dict(learner.moves))


def learner_view(h: Hypergraph, prefix: Iterable) -> SkeletonTree:
    """The structure an exact learner should hold after seeing ``prefix``.

    This is the induced sub-skeleton with same-black colored leaves merged;
    a lone colored node with two or more vertices gets one black neighbour.
    """
    from .skeleton import collapse_leaves, induced_sub_skeleton

    sk = collapse_leaves(induced_sub_skeleton(h, prefix))
    if len(sk) == 1 and len(sk.nodes[0].vertices) >= 2:
        return SkeletonTree([sk.nodes[0], SkeletonNode(BLACK, edge=0)], [[1], [0]])
    return sk
