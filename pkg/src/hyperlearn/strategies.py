"""Path-selection strategies shared by the online learner and the path depth game.

Each strategy looks at a rooted tree given as ``root`` plus a ``children``
mapping and returns a leaf. The chosen path is the unique root-to-leaf path.
"""

from __future__ import annotations

from typing import Callable, Hashable, Mapping, Sequence

Node = Hashable
Children = Mapping[Node, Sequence[Node]]


def _postorder(root: Node, children: Children) -> list[Node]:
    order = [root]
    for u in order:
        order.extend(children.get(u, ()))
    return order[::-1]


def leaf_counts(root: Node, children: Children) -> dict:
    counts: dict = {}
    for u in _postorder(root, children):
        kids = children.get(u, ())
        counts[u] = sum(counts[c] for c in kids) if kids else 1
    return counts


def _descend(start: Node, children: Children, counts: dict, order_key) -> Node:
    """Follow the child with the most leaves until a leaf is reached."""
    u = start
    while children.get(u):
        u = min(children[u], key=lambda c: (-counts[c], order_key(c)))
    return u


def stage_of(leaves: int, base: int) -> int:
    """Smallest ``i`` with ``leaves <= base**i``."""
    i, cap = 0, 1
    while leaves > cap:
        i += 1
        cap *= base
    return i


def separator_leaf(root: Node, children: Children, base: int, order_key=lambda x: x, counts=None) -> Node:
    """Stage-based choice that splits off heavy subtrees.

    At stage ``i`` a vertex is heavy when it roots more than ``base**(i-1)``
    leaves. If the root has a heavy child, walk down heavy children to a
    fringe-heavy vertex and continue to a leaf. Otherwise peel the edge to
    the root's largest child. ``counts`` may supply precomputed leaf counts.
    """
    base = max(base, 2)
    if counts is None:
        counts = leaf_counts(root, children)
    i = stage_of(counts[root], base)
    if i == 0:
        return _descend(root, children, counts, order_key)
    light = base ** (i - 1)
    u = root
    while True:
        heavy = [c for c in children.get(u, ()) if counts[c] > light]
        if not heavy:
            break
        u = min(heavy, key=lambda c: (-counts[c], order_key(c)))
    return _descend(u, children, counts, order_key)


def greedy_farthest_leaf(
    root: Node,
    children: Children,
    weight: Callable[[Node], int] = lambda _: 1,
    order_key=lambda x: x,
) -> Node:
    """Leaf at maximum weighted depth; ties go to the smallest ``order_key``."""
    depth = {root: 0}
    best = None
    stack = [root]
    while stack:
        u = stack.pop()
        kids = children.get(u, ())
        if not kids:
            key = (-depth[u], order_key(u))
            if best is None or key < best[0]:
                best = (key, u)
            continue
        for c in kids:
            depth[c] = depth[u] + weight(c)
            stack.append(c)
    return best[1]


STRATEGIES = ("separator", "greedy")
