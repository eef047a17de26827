import itertools
import random

import pytest

from hyperlearn.generators import (
    GenerationError,
    chain_label,
    family_bounded,
    family_hdkn,
    hard_gamma_instance,
    hyperpath_pn,
    pad_edge,
    random_orderly_hypertree,
    staircase,
    staircase2,
    tree_hypergraph,
    worst_prefix_order,
)
from hyperlearn.predicates import is_hypertree, is_orderly, structural_predicates
from hyperlearn.skeleton import build_skeleton


def orderly_tree(h) -> bool:
    return h.validate().ok and h.is_connected() and is_orderly(h) and is_hypertree(h)


@pytest.mark.parametrize("seed", range(40))
def test_random_instances_in_class(seed):
    rng = random.Random(seed)
    delta = rng.randint(2, 6)
    h = random_orderly_hypertree(m=rng.randint(3, 40), max_degree=delta, seed=seed)
    assert orderly_tree(h)
    assert h.max_edge_degree() <= delta
    assert h.diameter() >= 3


def test_seed_determinism():
    assert random_orderly_hypertree(m=12, seed=5) == random_orderly_hypertree(m=12, seed=5)


@pytest.mark.parametrize("seed", range(10))
def test_require_private(seed):
    h = random_orderly_hypertree(m=10, seed=seed, require_private=True)
    assert all(h.private_vertices(i) for i in range(h.m))


@pytest.mark.parametrize("n", [10, 25, 60])
def test_vertex_count_target(n):
    assert random_orderly_hypertree(n=n, seed=1).n == n


@pytest.mark.parametrize("kwargs", [{"m": 2}, {"m": 0}, {}, {"m": 5, "max_degree": 1}])
def test_infeasible_parameters(kwargs):
    with pytest.raises(GenerationError):
        random_orderly_hypertree(**kwargs)


@pytest.mark.parametrize("delta, k, n_extra", [(2, 1, 0), (3, 2, 5), (3, 3, 7)])
def test_hdkn_shape(delta, k, n_extra):
    h = family_hdkn(delta, k, n_extra)
    base_nodes = sum(delta**i for i in range(k + 1))
    assert h.n == base_nodes + n_extra
    assert h.m == base_nodes - 1
    assert orderly_tree(h)


def test_hdkn_partition_places_vertices():
    h = family_hdkn(3, 2, 3, partition=[(1, 2), (3, 3), (1, 2)])
    assert h.distance("v1", "z1-2") == 1
    assert h.distance("v1", "v3") == 1
    assert h.distance("v1", "v2") == 4
    with pytest.raises(GenerationError):
        family_hdkn(3, 2, 1, partition=[(4, 1)])


@pytest.mark.parametrize("k, d", [(1, 1), (2, 2), (3, 3)])
def test_bounded_family(k, d):
    h = family_bounded(k, 4, d)
    assert orderly_tree(h)
    leaf = (1,) * k
    for j in range(d):
        assert h.distance("v1", chain_label(leaf, j)) == d - j
    assert h.distance("v1", chain_label(leaf, d)) == 1


def test_pn_and_hgamma():
    h = hyperpath_pn(8)
    assert (h.n, h.m) == (8, 3)
    assert not any(h.private_vertices(1))
    r = structural_predicates(hard_gamma_instance(10))
    assert r.isGamma and not r.isOrderly
    with pytest.raises(GenerationError):
        hyperpath_pn(7)
    with pytest.raises(GenerationError):
        hard_gamma_instance(6)


@pytest.mark.parametrize("t, leaves", [(8, 65), (16, 257), (32, 1025)])
def test_staircase2_leaves(t, leaves):
    tree = staircase2(t)
    assert len(tree.leaves()) == leaves
    assert tree.max_degree() <= 4


def test_staircase_pendant_depths_strict():
    tree = staircase(6)
    depth = {}
    for v in range(tree.n):
        depth[v] = 0 if tree.parent[v] < 0 else depth[tree.parent[v]] + 1
    ds = sorted((depth[v] for v in tree.leaves()), reverse=True)
    assert ds[0] > ds[1]


@pytest.mark.parametrize("seed", range(5))
def test_padding_and_worst_prefix(seed):
    h = random_orderly_hypertree(m=6, seed=seed)
    padded, head = pad_edge(h, 12)
    assert orderly_tree(padded)
    assert padded.max_edge_degree() == h.max_edge_degree()
    assert len(head) == 12
    assert all(padded.distance(a, b) == 1 for a, b in itertools.combinations(head, 2))
    padded2, order = worst_prefix_order(h, 12, seed)
    assert order[:12] == head and sorted(order) == sorted(padded2.labels)


def test_tree_hypergraph_in_class():
    h = tree_hypergraph(staircase(5))
    assert orderly_tree(h)
    assert build_skeleton(h).is_tree()
