"""Distance oracles with query accounting: exact, and the two lower-bound adversaries."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

from .errors import HyperlearnError, InconsistentOracleError
from .generators import addresses, chain_label, family_bounded, family_hdkn
from .hypergraph import UNREACHABLE, Hypergraph, label_key

SP = "sp"
BOUNDED = "bounded"


@dataclass(frozen=True)
class Beyond:
    """Answer of a bounded query whose true distance exceeds ``d``."""

    d: int

    def __str__(self):
        return f">{self.d}"


@dataclass(frozen=True)
class QueryRecord:
    seq: int
    kind: str
    u: object
    v: object
    answer: object
    d: int | None = None

    def to_dict(self) -> dict:
        ans = self.answer
        if isinstance(ans, Beyond):
            ans = str(ans)
        elif ans == UNREACHABLE:
            ans = "inf"
        out = {"seq": self.seq, "kind": self.kind, "u": self.u, "v": self.v, "answer": ans}
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_dict(cls, data: dict) -> "QueryRecord":
        ans = data["answer"]
        if isinstance(ans, str):
            ans = UNREACHABLE if ans == "inf" else Beyond(int(ans[1:]))
        return cls(data["seq"], data["kind"], data["u"], data["v"], ans, data.get("d"))


@dataclass
class OracleStats:
    distinct_queries: int = 0
    total_calls: int = 0
    per_vertex: dict = field(default_factory=dict)


class DistanceOracle:
    """Base oracle: caching, logging and counting around ``_sp``/``_bounded``.

    By default a repeated query is answered from the cache and counted once.
    With ``count_repeats`` every call counts.
    """

    def __init__(self, vertices: Iterable, count_repeats: bool = False):
        self.vertices = tuple(vertices)
        self._known = set(self.vertices)
        self.count_repeats = count_repeats
        self.stats = OracleStats()
        self.log: list[QueryRecord] = []
        self._cache: dict = {}

    @property
    def queries(self) -> int:
        return self.stats.total_calls if self.count_repeats else self.stats.distinct_queries

    def _check(self, *vs):
        for v in vs:
            if v not in self._known:
                raise KeyError(f"unknown vertex {v!r}")

    def _ask(self, kind, u, v, d, compute):
        self._check(u, v)
        if u == v:
            self.stats.total_calls += 1
            return 0
        key = (kind, d, frozenset((u, v)))
        self.stats.total_calls += 1
        fresh = key not in self._cache
        if fresh:
            self._cache[key] = compute()
            self.stats.distinct_queries += 1
        if fresh or self.count_repeats:
            for w in (u, v):
                self.stats.per_vertex[w] = self.stats.per_vertex.get(w, 0) + 1
        ans = self._cache[key]
        self.log.append(QueryRecord(len(self.log) + 1, kind, u, v, ans, d))
        return ans

    def sp(self, u, v):
        """Shortest-path distance between ``u`` and ``v``."""
        return self._ask(SP, u, v, None, lambda: self._sp(u, v))

    def bounded(self, u, v, d: int):
        """Distance if at most ``d``, otherwise ``Beyond(d)``."""
        if d < 1:
            raise ValueError("threshold d must be at least 1")
        return self._ask(BOUNDED, u, v, d, lambda: self._bounded(u, v, d))

    def _sp(self, u, v):
        raise NotImplementedError

    def _bounded(self, u, v, d):
        x = self._sp(u, v)
        return x if x <= d else Beyond(d)

    def save_log(self, path) -> None:
        write_log(self.log, path)


class ExactOracle(DistanceOracle):
    """Answers from a concrete target hypergraph."""

    def __init__(self, h: Hypergraph, count_repeats: bool = False):
        super().__init__(h.labels, count_repeats)
        self.target = h
        self._rows: dict = {}

    def _sp(self, u, v):
        if v in self._rows:
            return self._rows[v][u]
        if u not in self._rows:
            self._rows[u] = self.target.distances_from(u)
        return self._rows[u][v]


def exact_oracle(h: Hypergraph, count_repeats: bool = False) -> ExactOracle:
    return ExactOracle(h, count_repeats)


# -- log I/O and replay ---------------------------------------------------------------


def write_log(records: Iterable[QueryRecord], path) -> None:
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r.to_dict()) + "\n")


def read_log(path) -> list[QueryRecord]:
    with open(path) as fh:
        return [QueryRecord.from_dict(json.loads(line)) for line in fh if line.strip()]


def expected_answer(h: Hypergraph, rec: QueryRecord, rows: dict | None = None):
    rows = {} if rows is None else rows
    if rec.u not in rows:
        rows[rec.u] = h.distances_from(rec.u)
    x = rows[rec.u][rec.v]
    if rec.kind == BOUNDED:
        return x if x <= rec.d else Beyond(rec.d)
    return x


def replay(records: Iterable[QueryRecord], h: Hypergraph) -> list[tuple[QueryRecord, object]]:
    """Re-answer every record against ``h``; returns ``(record, expected)`` mismatches."""
    rows: dict = {}
    bad = []
    for rec in records:
        want = expected_answer(h, rec, rows)
        if want != rec.answer:
            bad.append((rec, want))
    return bad


# -- the H(Delta, k, N) adversary ---------------------------------------------------------


class AdversaryInvariantError(HyperlearnError):
    """The adversary reached a state its invariant rules out (a bug)."""


class HkNAdversary(DistanceOracle):
    """Adaptive SP oracle over the family built on the complete base tree.

    Each extra vertex ``v`` sits at an address ``a`` (a base-tree node it is
    known to descend from). Queries that involve ``v`` and something below
    ``a`` are counted; the ``(delta-1)``-th such query moves ``v`` one level
    down to the lowest child still open to it before the query is answered.
    Answers never commit ``v`` below its address.
    """

    def __init__(self, delta: int, k: int, n_extra: int, count_repeats: bool = False):
        if delta < 2 or k < 1 or n_extra < 0:
            raise ValueError("need delta >= 2, k >= 1, N >= 0")
        self.delta, self.k, self.n_extra = delta, k, n_extra
        base = family_hdkn(delta, k, 0)
        super().__init__(list(base.labels) + [f"v{i}" for i in range(1, n_extra + 1)], count_repeats)
        self.base = base
        self.z_addr = {}
        for level in range(k + 1):
            for a in addresses(delta, level):
                self.z_addr["z" + "-".join(map(str, a))] = a
        self._zrows: dict = {}
        self.extra = [f"v{i}" for i in range(1, n_extra + 1)]
        self.address = {v: () for v in self.extra}
        self.counted = dict.fromkeys(self.extra, 0)
        self.participation = dict.fromkeys(self.extra, 0)
        self.excluded: dict = {v: set() for v in self.extra}
        self.differ: dict = {v: set() for v in self.extra}

    # structure helpers
    def _zdist(self, a, c) -> int:
        p = 0
        while p < min(len(a), len(c)) and a[p] == c[p]:
            p += 1
        return len(a) + len(c) - 2 * p

    def _leaf_to_z(self, leaf, c) -> int:
        return 1 + min(self._zdist(leaf[:-1], c), self._zdist(leaf, c))

    def _below(self, a, c) -> bool:
        """``c`` is a proper descendant of ``a``."""
        return len(c) > len(a) and c[: len(a)] == a

    def _resolved(self, v) -> bool:
        return len(self.address[v]) == self.k

    # the adversary
    def _sp(self, u, v):
        zu, zv = u in self.z_addr, v in self.z_addr
        if zu and zv:
            return self._zdist(self.z_addr[u], self.z_addr[v])
        if zv or zu:
            x, z = (u, v) if zv else (v, u)
            return self._vertex_z(x, self.z_addr[z])
        return self._vertex_vertex(u, v)

    def _count(self, v, relevant: bool):
        """Count a query for ``v``; promote first when it is the (delta-1)-th."""
        self.participation[v] += 1
        if not relevant or self._resolved(v):
            return
        if self.counted[v] + 1 >= self.delta - 1:
            self._promote(v)
        else:
            self.counted[v] += 1

    def _promote(self, v):
        a = self.address[v]
        blocked = set(self.excluded[v])
        for w in self.differ[v]:
            aw = self.address[w]
            if len(aw) > len(a) and aw[: len(a)] == a:
                blocked.add(aw[len(a)])
        free = [c for c in range(1, self.delta + 1) if c not in blocked]
        if not free:
            raise AdversaryInvariantError(f"{v} has no open child at {a}")
        child = free[0]
        for w in self.differ[v]:
            self.differ[w].discard(v)
            if self.address[w] == a:
                self.excluded[w].add(child)
        self.address[v] = a + (child,)
        self.counted[v] = 0
        self.excluded[v] = set()
        self.differ[v] = set()

    def _vertex_z(self, v, c):
        a = self.address[v]
        self._count(v, self._below(a, c))
        a = self.address[v]
        if self._resolved(v):
            return self._leaf_to_z(a, c)
        if self._below(a, c):
            self.excluded[v].add(c[len(a)])
        return self.k - len(a) + self._zdist(a, c)

    def _vertex_vertex(self, v, w):
        # a promotion of one endpoint can make the query relevant to the other
        pending = {v: w, w: v}
        changed = True
        while changed:
            changed = False
            for x, y in list(pending.items()):
                ax, ay = self.address[x], self.address[y]
                if ay[: len(ax)] == ax:
                    del pending[x]
                    self._count(x, True)
                    changed = True
        for x in pending:
            self._count(x, False)
        av, aw = self.address[v], self.address[w]
        p = 0
        while p < min(len(av), len(aw)) and av[p] == aw[p]:
            p += 1
        if av == aw:
            if len(av) == self.k:
                return 1
            self.differ[v].add(w)
            self.differ[w].add(v)
        elif p == len(av):
            self.excluded[v].add(aw[p])
        elif p == len(aw):
            self.excluded[w].add(av[p])
        return 2 * (self.k - p)

    def check_invariant(self) -> None:
        for v in self.extra:
            level = len(self.address[v])
            if level < self.k and not self.counted[v] < self.delta - 1:
                raise AdversaryInvariantError(f"{v}: {self.counted[v]} counted queries at level {level}")
            if self.participation[v] < (self.delta - 1) * level:
                raise AdversaryInvariantError(f"{v}: level {level} after {self.participation[v]} queries")

    def placement(self) -> dict:
        """Complete every address to a leaf consistently with all answers so far."""
        place = {v: a for v, a in self.address.items() if len(a) == self.k}
        for v in self.extra:
            if v in place:
                continue
            a = self.address[v]
            blocked = set(self.excluded[v])
            for w in self.differ[v]:
                pw = place.get(w)
                if pw is not None:
                    blocked.add(pw[len(a)])
                elif len(self.address[w]) > len(a):
                    blocked.add(self.address[w][len(a)])
            free = [c for c in range(1, self.delta + 1) if c not in blocked]
            if not free:
                raise AdversaryInvariantError(f"no consistent leaf for {v}")
            place[v] = a + (free[0],) + (1,) * (self.k - len(a) - 1)
        return place

    def witness(self) -> Hypergraph:
        return family_hdkn(self.delta, self.k, self.n_extra, self.placement())

    def resolved_count(self) -> int:
        return sum(1 for v in self.extra if self._resolved(v))


def adversary_oracle_hkn(delta: int, k: int, n_extra: int, count_repeats: bool = False) -> HkNAdversary:
    return HkNAdversary(delta, k, n_extra, count_repeats)


# -- the bounded-distance adversary ---------------------------------------------------------


class BoundedAdversary(DistanceOracle):
    """Adaptive bounded-distance oracle over the binary family with leaf chains.

    Extra vertices are grouped by union-find (answer 1 between two of them
    merges their groups); each group keeps the set of leaves it may still
    sit under, and ``>d`` between groups records that they differ. A query
    is answered ``>d`` whenever the constraints stay satisfiable, so a group
    is confirmed at a leaf only when no other leaf is left.
    """

    def __init__(self, k: int, n_extra: int, d: int, count_repeats: bool = False):
        if k < 1 or d < 1 or n_extra < 0:
            raise ValueError("need k >= 1, d >= 1, N >= 0")
        self.k, self.n_extra, self.d = k, n_extra, d
        base = family_bounded(k, 0, d)
        super().__init__(list(base.labels) + [f"v{i}" for i in range(1, n_extra + 1)], count_repeats)
        self.base = base
        self.leaves = addresses(2, k)
        self._rows: dict = {}
        self.extra = [f"v{i}" for i in range(1, n_extra + 1)]
        self._parent = {v: v for v in self.extra}
        self.cand = {v: set(self.leaves) for v in self.extra}
        self.apart: dict = {v: set() for v in self.extra}

    def _sp(self, u, v):
        raise NotImplementedError("this adversary answers bounded queries only")

    def _find(self, v):
        while self._parent[v] != v:
            self._parent[v] = self._parent[self._parent[v]]
            v = self._parent[v]
        return v

    def _base_row(self, x) -> dict:
        if x not in self._rows:
            self._rows[x] = self.base.distances_from(x)
        return self._rows[x]

    def _leaf_answer(self, leaf, x):
        """Distance from an extra vertex placed at ``leaf`` to base vertex ``x``, thresholded."""
        edge = [chain_label(leaf, self.d - 1), f"p{'-'.join(map(str, leaf))}c{self.d}", chain_label(leaf, self.d)]
        dist = 1 + min(self._base_row(u)[x] for u in edge)
        return dist if dist <= self.d else Beyond(self.d)

    def _bounded(self, u, v, d):
        if d != self.d:
            raise ValueError(f"this adversary answers threshold {self.d} only, got {d}")
        eu, ev = u in self._parent, v in self._parent
        if not eu and not ev:
            x = self._base_row(u)[v]
            return x if x <= d else Beyond(d)
        if eu and ev:
            return self._vertex_vertex(u, v)
        x, y = (u, v) if eu else (v, u)
        return self._vertex_base(x, y)

    def _vertex_base(self, v, x):
        g = self._find(v)
        classes: dict = {}
        for leaf in sorted(self.cand[g]):
            classes.setdefault(self._leaf_answer(leaf, x), set()).add(leaf)
        far = Beyond(self.d)
        order = ([far] if far in classes else []) + sorted(
            (a for a in classes if a != far), key=lambda a: (-len(classes[a]), a)
        )
        for ans in order:
            old = self.cand[g]
            self.cand[g] = classes[ans]
            if self._feasible() is not None:
                return ans
            self.cand[g] = old
        raise InconsistentOracleError("bounded adversary lost consistency")

    def _vertex_vertex(self, v, w):
        g, h = self._find(v), self._find(w)
        if g == h:
            return 1
        if h not in self.apart[g]:
            self.apart[g].add(h)
            self.apart[h].add(g)
            if self._feasible() is not None:
                return Beyond(self.d)
            self.apart[g].discard(h)
            self.apart[h].discard(g)
        else:
            return Beyond(self.d)
        # merge: the two groups share a leaf
        self._parent[h] = g
        self.cand[g] &= self.cand.pop(h)
        for x in self.apart.pop(h):
            self.apart[x].discard(h)
            self.apart[x].add(g)
            self.apart[g].add(x)
        if self._feasible() is None:
            raise InconsistentOracleError("bounded adversary lost consistency")
        return 1

    def _feasible(self) -> dict | None:
        """A leaf for every group respecting candidate sets and differ edges, or None."""
        groups = sorted(self.cand, key=label_key)
        assign: dict = {}

        def pick(remaining):
            if not remaining:
                return True
            g = min(remaining, key=lambda x: len(self.cand[x]))
            rest = [x for x in remaining if x != g]
            taken = {assign[x] for x in self.apart[g] if x in assign}
            for leaf in sorted(self.cand[g] - taken):
                assign[g] = leaf
                if pick(rest):
                    return True
                del assign[g]
            return False

        return dict(assign) if pick(groups) else None

    def placement(self) -> dict:
        assign = self._feasible()
        if assign is None:
            raise AdversaryInvariantError("no consistent placement")
        return {v: assign[self._find(v)] for v in self.extra}

    def witness(self) -> Hypergraph:
        return family_bounded(self.k, self.n_extra, self.d, self.placement())

    def confirmed_count(self) -> int:
        return sum(1 for v in self.extra if len(self.cand[self._find(v)]) == 1)


def bounded_adversary_oracle(k: int, n_extra: int, d: int, count_repeats: bool = False) -> BoundedAdversary:
    return BoundedAdversary(k, n_extra, d, count_repeats)


def consistent_witness(adversary) -> Hypergraph:
    """A family member consistent with every answer the adversary has given."""
    h = adversary.witness()
    bad = replay(adversary.log, h)
    if bad:
        rec, want = bad[0]
        raise AdversaryInvariantError(f"witness disagrees on query {rec.seq}: logged {rec.answer}, true {want}")
    return h

