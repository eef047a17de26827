import random

import pytest

from hyperlearn.pathdepth import RootedTree, random_tree
from hyperlearn.strategies import greedy_farthest_leaf, leaf_counts, separator_leaf, stage_of


def brute_leaves(tree: RootedTree, u: int) -> int:
    kids = tree.children.get(u, [])
    return 1 if not kids else sum(brute_leaves(tree, c) for c in kids)


@pytest.mark.parametrize("leaves, base, stage", [(1, 2, 0), (2, 2, 1), (3, 2, 2), (4, 2, 2), (9, 3, 2), (10, 3, 3)])
def test_stage_of(leaves, base, stage):
    assert stage_of(leaves, base) == stage


@pytest.mark.parametrize("seed", range(10))
def test_leaf_counts(seed):
    tree = random_tree(30, 4, random.Random(seed))
    counts = leaf_counts(tree.root, tree.children)
    assert all(counts[u] == brute_leaves(tree, u) for u in range(tree.n))


def test_path_region_same_leaf():
    children = {0: [1], 1: [2], 2: [3]}
    assert separator_leaf(0, children, 2) == greedy_farthest_leaf(0, children) == 3


def test_greedy_is_deepest_with_ties_by_key():
    children = {0: [1, 2], 1: [3], 2: [4]}
    assert greedy_farthest_leaf(0, children) == 3
    assert greedy_farthest_leaf(0, children, order_key=lambda x: -x) == 4
    assert greedy_farthest_leaf(0, children, weight=lambda u: 5 if u == 2 else 1) == 4


def test_separator_descends_heavy_side():
    # root with a heavy branch of 4 leaves and a light branch of one
    children = {0: [1, 2], 1: [3, 4, 5, 6]}
    assert separator_leaf(0, children, 2) in {3, 4, 5, 6}


@pytest.mark.parametrize("seed", range(10))
def test_strategies_return_leaves(seed):
    tree = random_tree(40, 5, random.Random(seed))
    kids = tree.children
    for pick in (separator_leaf(tree.root, kids, 5), greedy_farthest_leaf(tree.root, kids)):
        assert not kids.get(pick)
