"""Offline learners: the SP-query learner and the two bounded-distance learners."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .errors import BudgetExceededError, InconsistentOracleError, PreconditionError
from .hypergraph import UNREACHABLE, Hypergraph, label_key
from .online import LearnResult, learn_online
from .oracle import Beyond, DistanceOracle, OracleStats

BUDGET_FACTOR = 8


def _canonical(vertices: Iterable) -> list:
    return sorted(vertices, key=label_key)


def learn_offline(vertices: Iterable, oracle: DistanceOracle, strategy: str = "separator") -> LearnResult:
    """Find a vertex beyond distance 1 from the first, then learn online.

    The remaining vertices follow in canonical order. Every scanned answer
    is reused by the online phase, so the scan costs nothing extra.
    """
    order = _canonical(vertices)
    if len(order) < 2:
        raise PreconditionError("need at least two vertices")
    v1 = order[0]
    far = None
    for v in order[1:]:
        d = oracle.sp(v1, v)
        if d == UNREACHABLE:
            raise InconsistentOracleError(f"d({v1}, {v}) is unreachable; target must be connected")
        if d > 1:
            far = v
            break
    if far is None:
        raise PreconditionError(f"every vertex is adjacent to {v1}; diameter < 3 precondition violated")
    rest = [v for v in order[1:] if v != far]
    return learn_online([v1, far] + rest, oracle, strategy)


# -- bounded-distance learners ------------------------------------------------------


@dataclass
class BoundedResult:
    hypergraph: Hypergraph
    queries: int
    stats: OracleStats
    stars: list[tuple] = field(default_factory=list)
    trace: list[dict] = field(default_factory=list)


class _Budget:
    """Wraps bounded queries with the ``8 * m_hat * n`` guard."""

    def __init__(self, oracle: DistanceOracle, d: int, n: int):
        self.oracle = oracle
        self.d = d
        self.n = n
        self.stars = 0
        self.edges = 0

    @property
    def budget(self) -> int:
        return BUDGET_FACTOR * max(1, self.stars, self.edges) * self.n

    def ask(self, u, v):
        ans = self.oracle.bounded(u, v, self.d)
        if self.oracle.queries > self.budget:
            raise BudgetExceededError(self.oracle.queries, self.budget)
        if isinstance(ans, Beyond):
            return ans
        if ans == UNREACHABLE or (u != v and ans < 1):
            raise InconsistentOracleError(f"bounded query on ({u}, {v}) answered {ans!r}")
        return ans


def _ball(g: _Budget, v, order) -> dict:
    return {w: g.ask(v, w) for w in order if w != v}


def _seed(i: int, balls: list[set], order_index: dict):
    """Lowest vertex of ball ``i`` that also lies in an earlier ball, else in a later one."""
    earlier = set().union(*balls[:i]) & balls[i] if i else set()
    pool = earlier or (set().union(*(b for j, b in enumerate(balls) if j != i)) & balls[i])
    if not pool:
        raise InconsistentOracleError(f"star {i} shares no vertex with another star")
    return min(pool, key=order_index.__getitem__)


def _extract_star(g: _Budget, ball: set, seed, order_index: dict) -> list[frozenset]:
    """Learn the edges of one hyperstar from within-ball adjacency rows."""
    members = sorted(ball, key=order_index.__getitem__)
    edges: list[frozenset] = []
    covered: set = set()
    u = seed
    while u is not None:
        e = frozenset([u] + [w for w in members if w != u and g.ask(u, w) == 1])
        if e in edges:
            raise InconsistentOracleError(f"edge {sorted(e, key=label_key)} learned twice")
        edges.append(e)
        g.edges += 1
        covered |= e
        u = next((w for w in members if w not in covered), None)
    return edges


def _assemble(order: list, edges: list[frozenset]) -> Hypergraph:
    uniq = list(dict.fromkeys(edges))
    covered = set().union(*uniq) if uniq else set()
    if covered != set(order):
        raise InconsistentOracleError("learned edges do not cover every vertex")
    try:
        return Hypergraph(order, [_canonical(e) for e in uniq]).check()
    except ValueError as exc:
        raise InconsistentOracleError(f"learned edge family is invalid: {exc}") from None


def learn_dist1(vertices: Iterable, oracle: DistanceOracle) -> BoundedResult:
    """Learner for orderly targets whose every edge has a private vertex.

    Step 1 covers ``V`` by radius-1 balls around pivots of lowest canonical
    index. Each ball is one hyperstar; its edges are then peeled off from
    adjacency rows, starting at a vertex shared with another ball.
    """
    order = _canonical(vertices)
    index = {v: i for i, v in enumerate(order)}
    g = _Budget(oracle, 1, len(order))
    remaining = set(order)
    pivots, balls, trace = [], [], []
    while remaining:
        v = min(remaining, key=index.__getitem__)
        g.stars += 1
        row = _ball(g, v, order)
        ball = {v} | {w for w, a in row.items() if a == 1}
        pivots.append(v)
        balls.append(ball)
        remaining -= ball
        trace.append({"step": "ball", "pivot": v, "size": len(ball), "queries": oracle.queries})
    if len(balls) == 1:
        raise PreconditionError("one ball covers every vertex; diameter < 3 precondition violated")
    edges = []
    for i, ball in enumerate(balls):
        seed = _seed(i, balls, index)
        star = _extract_star(g, ball, seed, index)
        edges += star
        trace.append({"step": "star", "pivot": pivots[i], "seed": seed, "edges": len(star), "queries": oracle.queries})
    h = _assemble(order, edges)
    missing = [i for i in range(h.m) if not any(len(h.incidence[v]) == 1 for v in h.edges[i])]
    if missing:
        raise InconsistentOracleError(
            f"learned edge {_canonical(h.edge_labels(missing[0]))} has no private vertex; the dist<=1 learner needs one per edge"
        )
    return BoundedResult(h, oracle.queries, oracle.stats, list(zip(pivots, map(len, balls))), trace)


def learn_dist2(vertices: Iterable, oracle: DistanceOracle) -> BoundedResult:
    """Learner for orderly hypertrees of diameter at least 3 using dist<=2 queries.

    Pivots are drawn from a frontier of vertices at distance 2 from earlier
    pivots, so each new star touches an earlier one. Star edges are peeled
    off as in :func:`learn_dist1`.
    """
    order = _canonical(vertices)
    index = {v: i for i, v in enumerate(order)}
    g = _Budget(oracle, 2, len(order))
    remaining = set(order)
    frontier = {order[0]}
    pivots, balls, trace = [], [], []
    while remaining:
        live = frontier & remaining
        if not live:
            raise InconsistentOracleError("frontier exhausted before every vertex was covered; target is disconnected")
        v = min(live, key=index.__getitem__)
        g.stars += 1
        row = _ball(g, v, order)
        ball = {v} | {w for w, a in row.items() if a == 1}
        remaining -= ball
        frontier.discard(v)
        frontier |= {w for w, a in row.items() if a == 2 and w in remaining}
        pivots.append(v)
        balls.append(ball)
        trace.append({"step": "ball", "pivot": v, "size": len(ball), "frontier": len(frontier), "queries": oracle.queries})
    if len(balls) == 1:
        raise PreconditionError("one ball covers every vertex; diameter < 3 precondition violated")
    edges = []
    for i, ball in enumerate(balls):
        seed = _seed(i, balls, index)
        star = _extract_star(g, ball, seed, index)
        edges += star
        trace.append({"step": "star", "pivot": pivots[i], "seed": seed, "edges": len(star), "queries": oracle.queries})
    h = _assemble(order, edges)
    return BoundedResult(h, oracle.queries, oracle.stats, list(zip(pivots, map(len, balls))), trace)
