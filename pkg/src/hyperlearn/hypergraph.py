"""Hypergraph representation, validation, distances and JSON I/O.

Vertices are addressed by external labels (usually strings) and stored as
dense integer indices internally. Edges are kept as sorted index tuples so
that equality and hashing are canonical.
"""

from __future__ import annotations

import json
import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import Hashable, Iterable

from .errors import ValidationError

#: Distance between vertices in different connected components.
UNREACHABLE = math.inf

Label = Hashable


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple[tuple[str, object], ...] = ()

    @property
    def ok(self) -> bool:
        return not self.violations


class Hypergraph:
    """An immutable hypergraph ``(V, E)`` with stable edge indices."""

    def __init__(self, vertices: Iterable[Label], edges: Iterable[Iterable[Label]]):
        labels = tuple(vertices)
        index = {}
        for i, v in enumerate(labels):
            index.setdefault(v, i)
        self.labels: tuple[Label, ...] = labels
        self._index: dict[Label, int] = index
        self._unknown: list[Label] = []
        rows = []
        for e in edges:
            row = set()
            for v in e:
                if v in index:
                    row.add(index[v])
                else:
                    self._unknown.append(v)
            rows.append(tuple(sorted(row)))
        self.edges: tuple[tuple[int, ...], ...] = tuple(rows)

    @classmethod
    def from_edges(cls, edges: Iterable[Iterable[Label]], vertices: Iterable[Label] | None = None):
        """Build from an edge list; vertices default to the sorted union of edges."""
        edges = [list(e) for e in edges]
        if vertices is None:
            vertices = sorted({v for e in edges for v in e}, key=label_key)
        return cls(vertices, edges)

    # -- sizes and lookups -------------------------------------------------

    @property
    def n(self) -> int:
        return len(self.labels)

    @property
    def m(self) -> int:
        return len(self.edges)

    def index(self, v: Label) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise KeyError(f"unknown vertex {v!r}") from None

    def edge_labels(self, i: int) -> frozenset:
        return frozenset(self.labels[j] for j in self.edges[i])

    @cached_property
    def edge_sets(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(e) for e in self.edges)

    @cached_property
    def incidence(self) -> tuple[tuple[int, ...], ...]:
        """``incidence[v]`` lists the edge indices containing vertex ``v``."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for i, e in enumerate(self.edges):
            for v in e:
                inc[v].append(i)
        return tuple(tuple(x) for x in inc)

    def edge_family(self) -> frozenset[frozenset]:
        """Edge set as a set of label sets; the equality used for reconstruction."""
        return frozenset(self.edge_labels(i) for i in range(self.m))

    def same_edges(self, other: "Hypergraph") -> bool:
        return self.edge_family() == other.edge_family()

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return set(self.labels) == set(other.labels) and self.same_edges(other)

    def __hash__(self):
        return hash((frozenset(self.labels), self.edge_family()))

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m})"

    # -- validation --------------------------------------------------------

    def validate(self) -> ValidationReport:
        """Report every violated invariant; never raises."""
        violations: list[tuple[str, object]] = []
        seen_labels = set()
        for v in self.labels:
            if v in seen_labels:
                violations.append(("duplicate-vertex", v))
            seen_labels.add(v)
        for v in self._unknown:
            violations.append(("unknown-vertex", v))
        for i, e in enumerate(self.edges):
            if len(e) < 2:
                violations.append(("edge-size", i))
        seen: dict[tuple[int, ...], int] = {}
        for i, e in enumerate(self.edges):
            if e in seen:
                violations.append(("duplicate-edge", (seen[e], i)))
            else:
                seen[e] = i
        sets = self.edge_sets
        for i, a in enumerate(sets):
            for j, b in enumerate(sets):
                if i != j and a < b:
                    violations.append(("nested-edge", (i, j)))
        return ValidationReport(tuple(violations))

    def check(self) -> "Hypergraph":
        report = self.validate()
        if not report.ok:
            raise ValidationError(report)
        return self

    # -- distances ---------------------------------------------------------

    def _bfs(self, s: int) -> list[float]:
        dist: list[float] = [UNREACHABLE] * self.n
        dist[s] = 0
        used = [False] * self.m
        queue = deque([s])
        inc, edges = self.incidence, self.edges
        while queue:
            u = queue.popleft()
            du = dist[u] + 1
            for ei in inc[u]:
                if used[ei]:
                    continue
                used[ei] = True
                for w in edges[ei]:
                    if dist[w] == UNREACHABLE:
                        dist[w] = du
                        queue.append(w)
        return dist

    def distances_from(self, u: Label) -> dict[Label, float]:
        row = self._bfs(self.index(u))
        return {self.labels[i]: d for i, d in enumerate(row)}

    def distance(self, u: Label, v: Label) -> float:
        """Number of edges on a shortest alternating path; ``UNREACHABLE`` if none."""
        iu, iv = self.index(u), self.index(v)
        if iu == iv:
            return 0
        return self._bfs(iu)[iv]

    def all_pairs_distances(self) -> list[list[float]]:
        return [self._bfs(i) for i in range(self.n)]

    def is_connected(self) -> bool:
        if self.n == 0:
            return True
        return all(d != UNREACHABLE for d in self._bfs(0))

    def eccentricity(self, v: Label) -> float:
        return max(self._bfs(self.index(v)))

    def diameter(self) -> int:
        best = 0
        for i in range(self.n):
            e = max(self._bfs(i))
            if e == UNREACHABLE:
                raise ValueError("diameter of a disconnected hypergraph is undefined")
            best = max(best, e)
        return best

    def diameter_at_least(self, k: int) -> bool:
        """Whether some pair lies at distance >= ``k``; stops at the first witness."""
        for i in range(self.n):
            e = max(self._bfs(i))
            if e == UNREACHABLE:
                raise ValueError("diameter of a disconnected hypergraph is undefined")
            if e >= k:
                return True
        return k <= 0

    # -- local structure ---------------------------------------------------

    def private_vertices(self, i: int) -> frozenset:
        return frozenset(self.labels[v] for v in self.edges[i] if len(self.incidence[v]) == 1)

    def edge_degree(self, i: int) -> int:
        mine = self.edge_sets[i]
        return sum(1 for j, e in enumerate(self.edge_sets) if j != i and e & mine)

    def max_edge_degree(self) -> int:
        return max((self.edge_degree(i) for i in range(self.m)), default=0)

    def line_graph(self) -> dict[int, set[int]]:
        """Adjacency on edge indices; two edges are adjacent iff they intersect."""
        adj: dict[int, set[int]] = {i: set() for i in range(self.m)}
        for v in range(self.n):
            inc = self.incidence[v]
            for a in inc:
                adj[a].update(b for b in inc if b != a)
        return adj

    def induced(self, vertices: Iterable[Label]) -> frozenset[frozenset]:
        """The trace family ``{e & U} - {{}}`` on vertex set ``U`` (as labels)."""
        u = {self.index(v) for v in vertices}
        out = set()
        for e in self.edge_sets:
            t = e & u
            if t:
                out.add(frozenset(self.labels[i] for i in t))
        return frozenset(out)

    def restrict_edges(self, keep: Iterable[int]) -> "Hypergraph":
        keep = list(keep)
        return Hypergraph(self.labels, [[self.labels[v] for v in self.edges[i]] for i in keep])

    # -- I/O ----------------------------------------------------------------

    def to_dict(self) -> dict:
        edges = sorted(sorted((str(self.labels[v]) for v in e), key=label_key) for e in self.edges)
        return {"vertices": [str(v) for v in self.labels], "edges": edges}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"))

    @classmethod
    def from_dict(cls, data: dict, validate: bool = True) -> "Hypergraph":
        h = cls(data["vertices"], data["edges"])
        if validate:
            h.check()
        return h

    @classmethod
    def from_json(cls, text: str, validate: bool = True) -> "Hypergraph":
        return cls.from_dict(json.loads(text), validate=validate)


def label_key(v):
    """Sort key putting numeric suffixes in numeric order (v2 < v10)."""
    s = str(v)
    head = s.rstrip("0123456789")
    tail = s[len(head):]
    return (head, int(tail) if tail else -1, s)


def load(path) -> Hypergraph:
    with open(path) as fh:
        return Hypergraph.from_json(fh.read())


def dump(h: Hypergraph, path) -> None:
    with open(path, "w") as fh:
        json.dump(h.to_dict(), fh, indent=1)
        fh.write("\n")
