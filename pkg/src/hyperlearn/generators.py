"""Seeded instance generators: random orderly hypertrees and the special families."""

from __future__ import annotations

import itertools
import random
from typing import Mapping, Sequence

from .hypergraph import Hypergraph, label_key
from .pathdepth import RootedTree

FAMILIES = ("random", "hdkn", "bounded", "pn", "hgamma", "staircase", "staircase2")


class GenerationError(ValueError):
    """Generator parameters are infeasible or rejection sampling gave up."""


# -- random orderly hypertrees ------------------------------------------------------


def _geometric(rng: random.Random, p: float, cap: int) -> int:
    k = 1
    while k < cap and rng.random() >= p:
        k += 1
    return k


def _grow_skeleton(rng: random.Random, m: int, delta: int, join_p: float):
    """Black nodes joined through red nodes, with every edge degree at most ``delta``.

    Returns ``reds`` (list of black-index lists). Edge degree of a black node is
    the sum over its red neighbours of (red degree - 1).
    """
    ed = [0]
    reds: list[list[int]] = []

    def leaves_room(bumped, new_deg):
        # keep a free slot for the edges still to come
        return new_deg < delta or any(ed[b] + (b in bumped) < delta for b in range(len(ed)))

    for i in range(1, m):
        last = i == m - 1
        joins = [
            r for r, bs in enumerate(reds)
            if len(bs) <= delta and all(ed[b] < delta for b in bs) and (last or leaves_room(set(bs), len(bs)))
        ]
        opens = [b for b in range(i) if ed[b] < delta and (last or leaves_room({b}, 1))]
        if joins and (not opens or rng.random() < join_p):
            r = rng.choice(joins)
            for b in reds[r]:
                ed[b] += 1
            ed.append(len(reds[r]))
            reds[r].append(i)
        elif opens:
            b = rng.choice(opens)
            ed[b] += 1
            ed.append(1)
            reds.append([b, i])
        else:
            raise GenerationError(f"cannot attach edge {i} with max degree {delta}")
    return reds


def random_orderly_hypertree(
    m: int | None = None,
    n: int | None = None,
    max_degree: int = 3,
    seed: int = 0,
    require_private: bool = False,
    min_diameter: int = 3,
    occupancy_p: float = 0.5,
    occupancy_cap: int = 4,
    join_p: float = 0.25,
    max_tries: int = 200,
) -> Hypergraph:
    """Skeleton-first random orderly hypertree.

    A random black/red tree is grown with edge degrees bounded by
    ``max_degree``, blue leaves are added (always when ``require_private``,
    otherwise wherever non-nesting needs one and with probability 1/2
    elsewhere), and colored nodes receive geometric occupancies. Draws whose
    diameter is below ``min_diameter`` are rejected.
    """
    if m is None and n is None:
        raise GenerationError("give m or n")
    if m is not None and m < 1:
        raise GenerationError("m must be positive")
    if max_degree < 1:
        raise GenerationError("max_degree must be positive")
    if min_diameter >= 3 and m is not None and m < 3:
        raise GenerationError(f"no hypertree with m={m} edges has diameter >= {min_diameter} (need m >= 3)")
    if max_degree == 1 and (m or 3) > 2:
        raise GenerationError("max_degree 1 only allows m <= 2")
    rng = random.Random(seed)
    for _ in range(max_tries):
        mm = m if m is not None else max(3 if min_diameter >= 3 else 1, round(n / 2.5))
        h = _draw(rng, mm, n, max_degree, require_private, occupancy_p, occupancy_cap, join_p)
        if h is not None and (min_diameter <= 1 or h.diameter_at_least(min_diameter)):
            return h
    raise GenerationError(
        f"no instance after {max_tries} tries (m={m}, n={n}, max_degree={max_degree}, "
        f"require_private={require_private}, min_diameter={min_diameter}, seed={seed})"
    )


def _draw(rng, m, n, delta, require_private, p, cap, join_p):
    reds = _grow_skeleton(rng, m, delta, join_p)
    red_count = [0] * m
    for bs in reds:
        for b in bs:
            red_count[b] += 1
    blues = [b for b in range(m) if require_private or red_count[b] < 2 or rng.random() < 0.5]
    colored: list[tuple[str, object]] = [("red", bs) for bs in reds] + [("blue", b) for b in blues]
    if n is None:
        sizes = [_geometric(rng, p, cap) for _ in colored]
    else:
        if len(colored) > n:
            return None
        sizes = [1] * len(colored)
        for _ in range(n - len(colored)):
            sizes[rng.randrange(len(colored))] += 1
    if m == 1:
        sizes[-1] = max(sizes[-1], 2)
    total = sum(sizes)
    labels = [f"v{i}" for i in range(1, total + 1)]
    rng.shuffle(labels)
    it = iter(labels)
    members: list[set] = [set() for _ in range(m)]
    for (kind, ref), size in zip(colored, sizes):
        chunk = [next(it) for _ in range(size)]
        for b in ref if kind == "red" else [ref]:
            members[b].update(chunk)
    vertices = sorted(labels, key=label_key)
    return Hypergraph(vertices, [sorted(e, key=label_key) for e in members])


# -- the adversary families ----------------------------------------------------------


def addr(prefix: str, a: Sequence[int]) -> str:
    return prefix + "-".join(map(str, a))


def addresses(delta: int, level: int):
    return list(itertools.product(range(1, delta + 1), repeat=level))


def _check_partition(partition, delta, k, n_vertices):
    if partition is None:
        return {}
    if isinstance(partition, Mapping):
        items = dict(partition)
    else:
        items = {f"v{i + 1}": tuple(a) for i, a in enumerate(partition)}
    for v, a in items.items():
        a = tuple(a)
        if len(a) != k or any(not 1 <= x <= delta for x in a):
            raise GenerationError(f"vertex {v} placed at {a}, not an address in {{1..{delta}}}^{k}")
        items[v] = a
    extra = set(items) - {f"v{i}" for i in range(1, n_vertices + 1)}
    if extra:
        raise GenerationError(f"partition names unknown vertices {sorted(extra)}")
    return items


def family_hdkn(delta: int, k: int, n_extra: int, partition=None) -> Hypergraph:
    """Base tree with out-degree ``delta`` and depth ``k``; ``v1..vN`` join leaf edges.

    ``partition`` maps each ``v`` label to a leaf address (tuple over
    ``1..delta`` of length ``k``), or is a list of addresses for ``v1..vN``.
    Unplaced vertices default to the all-ones leaf.
    """
    if delta < 2 or k < 1 or n_extra < 0:
        raise GenerationError("need delta >= 2, k >= 1, N >= 0")
    place = _check_partition(partition, delta, k, n_extra)
    groups: dict[tuple, list[str]] = {}
    for i in range(1, n_extra + 1):
        v = f"v{i}"
        groups.setdefault(place.get(v, (1,) * k), []).append(v)
    vertices = []
    edges = []
    for level in range(k + 1):
        for a in addresses(delta, level):
            vertices.append(addr("z", a))
            if level:
                e = [addr("z", a[:-1]), addr("z", a)]
                if level == k:
                    e += groups.get(a, [])
                edges.append(e)
    vertices += [f"v{i}" for i in range(1, n_extra + 1)]
    return Hypergraph(vertices, edges)


def family_bounded(k: int, n_extra: int, d: int, partition=None) -> Hypergraph:
    """Binary base tree with a private vertex per edge and a chain of ``d`` edges per leaf.

    The last chain edge at leaf ``a`` also holds the ``v`` vertices placed at ``a``.
    """
    if k < 1 or d < 1 or n_extra < 0:
        raise GenerationError("need k >= 1, d >= 1, N >= 0")
    place = _check_partition(partition, 2, k, n_extra)
    groups: dict[tuple, list[str]] = {}
    for i in range(1, n_extra + 1):
        v = f"v{i}"
        groups.setdefault(place.get(v, (1,) * k), []).append(v)
    vertices, edges = [], []
    for level in range(k + 1):
        for a in addresses(2, level):
            vertices.append(addr("z", a))
            if level:
                vertices.append(addr("p", a))
                edges.append([addr("z", a[:-1]), addr("p", a), addr("z", a)])
    for a in addresses(2, k):
        prev = addr("z", a)
        for j in range(1, d + 1):
            cur, priv = chain_label(a, j), addr("p", a) + f"c{j}"
            vertices += [priv, cur]
            e = [prev, priv, cur]
            if j == d:
                e += groups.get(a, [])
            edges.append(e)
            prev = cur
    vertices += [f"v{i}" for i in range(1, n_extra + 1)]
    return Hypergraph(vertices, edges)


def chain_label(a: Sequence[int], j: int) -> str:
    """Label of chain vertex ``j`` below leaf ``a`` (``j = 0`` is the leaf itself)."""
    return addr("z", a) + (f"c{j}" if j else "")


def hyperpath_pn(n: int) -> Hypergraph:
    """Two edges of size n/2 bridged by a 2-edge with no private vertex."""
    if n < 4 or n % 2:
        raise GenerationError(f"n must be even and at least 4, got {n}")
    half = n // 2
    a = [f"a{i}" for i in range(1, half + 1)]
    b = [f"b{i}" for i in range(1, half + 1)]
    return Hypergraph(a + b, [a, ["a1", "b1"], b])


def hard_gamma_instance(n: int) -> Hypergraph:
    """Four-edge gamma-acyclic hypertree that is not orderly.

    ``e1 = {x, y}``, ``e2 = {c, x, w}``, and ``e3``, ``e4`` share ``c`` plus a
    cluster of ``n - 6`` vertices, each with one private vertex.
    """
    if n < 7:
        raise GenerationError(f"n must be at least 7, got {n}")
    cluster = [f"k{i}" for i in range(1, n - 5)]
    return Hypergraph(
        ["x", "y", "c", "w", "p3", "p4"] + cluster,
        [["x", "y"], ["c", "x", "w"], cluster + ["c", "p3"], cluster + ["c", "p4"]],
    )


# -- staircase trees ------------------------------------------------------------------


def staircase(t: int, whiskers: bool = False) -> RootedTree:
    """Spine ``u0..ut`` rooted at ``u0`` with a pendant path at each ``u_i`` (i >= 1).

    The pendant at ``u_i`` has ``2(t - i) + 1`` nodes, so pendant leaves get
    strictly shallower along the spine and a deepest-leaf player removes one
    pendant per round. One extra leaf hangs off ``u_{t//2}``. With
    ``whiskers`` every inner pendant node also gets a leaf, giving
    ``Theta(t^2)`` leaves.
    """
    if t < 2:
        raise GenerationError("staircase needs t >= 2")
    parent = [-1]
    spine = [0]
    for _ in range(t):
        parent.append(spine[-1])
        spine.append(len(parent) - 1)
    for i in range(1, t + 1):
        prev = spine[i]
        length = 2 * (t - i) + 1
        for j in range(length):
            parent.append(prev)
            prev = len(parent) - 1
            if whiskers and j < length - 1:
                parent.append(prev)
    parent.append(spine[t // 2])
    return RootedTree(tuple(parent))


def staircase2(t: int) -> RootedTree:
    return staircase(t, whiskers=True)


# -- derived instances --------------------------------------------------------------


def pad_edge(h: Hypergraph, size: int, prefix: str = "w") -> tuple[Hypergraph, list[str]]:
    """Grow the largest edge to ``size`` vertices with fresh private vertices.

    Returns the new hypergraph and ``size`` vertices of that edge (pairwise
    adjacent), so a learner shown them first pays for every pair.
    """
    i = max(range(h.m), key=lambda j: (len(h.edges[j]), -j))
    extra = [f"{prefix}{j}" for j in range(1, max(0, size - len(h.edges[i])) + 1)]
    clash = set(extra) & set(h.labels)
    if clash:
        raise GenerationError(f"padding labels clash with {sorted(clash)}")
    edges = [sorted(h.edge_labels(j), key=label_key) for j in range(h.m)]
    edges[i] += extra
    big = sorted(h.edge_labels(i), key=label_key) + extra
    return Hypergraph(list(h.labels) + extra, edges), big[:size]


def worst_prefix_order(h: Hypergraph, size: int, seed: int = 0) -> tuple[Hypergraph, list[str]]:
    """Padded target plus an order that lists ``size`` vertices of one edge first."""
    padded, head = pad_edge(h, size)
    rest = [v for v in padded.labels if v not in set(head)]
    random.Random(seed).shuffle(rest)
    return padded, head + rest


def tree_hypergraph(tree: RootedTree) -> Hypergraph:
    """One edge ``{parent, child, private}`` per tree edge; an orderly hypertree."""
    labels = [f"t{i}" for i in range(tree.n)]
    edges = []
    for child, par in enumerate(tree.parent):
        if par >= 0:
            p = f"q{child}"
            labels.append(p)
            edges.append([f"t{par}", f"t{child}", p])
    return Hypergraph(labels, edges)
