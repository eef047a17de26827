import random

import pytest

from hyperlearn.generators import hard_gamma_instance, random_orderly_hypertree
from hyperlearn.hypergraph import Hypergraph
from hyperlearn.predicates import is_hypertree, is_orderly
from hyperlearn.skeleton import (
    SkeletonTree,
    build_skeleton,
    canonical_form,
    collapse_leaves,
    hypergraph_from_skeleton,
    induced_sub_skeleton,
    is_isomorphic,
)

from support import all_hypergraphs


def shape(sk):
    return sorted((sk.color(i), tuple(sorted(sk.nodes[i].vertices))) for i in range(len(sk)))


def test_two_edge_example():
    h = Hypergraph(["a", "p", "q"], [["a", "p"], ["a", "q"]])
    sk = build_skeleton(h)
    assert sk.is_tree() and sk.is_bipartite() and sk.partition_ok
    assert shape(sk) == [("black", ()), ("black", ()), ("blue", ("p",)), ("blue", ("q",)), ("red", ("a",))]
    assert hypergraph_from_skeleton(sk) == h


def test_single_edge():
    h = Hypergraph(["a", "b"], [["a", "b"]])
    sk = build_skeleton(h)
    assert shape(sk) == [("black", ()), ("blue", ("a", "b"))]
    assert hypergraph_from_skeleton(sk) == h


def test_hard_gamma_partition_flag():
    assert not build_skeleton(hard_gamma_instance(10)).partition_ok


def test_unoccupied_node_rejected():
    h = random_orderly_hypertree(m=5, seed=1)
    sk = build_skeleton(h)
    data = sk.to_dict()
    j = next(i for i, nd in enumerate(data["nodes"]) if nd["kind"] == "colored")
    data["nodes"][j]["vertices"] = []
    with pytest.raises(ValueError):
        hypergraph_from_skeleton(SkeletonTree.from_dict(data))


@pytest.mark.parametrize("seed", range(30))
def test_skeleton_laws(seed):
    h = random_orderly_hypertree(m=random.Random(seed).randint(3, 25), max_degree=4, seed=seed)
    sk = build_skeleton(h)
    assert sk.is_tree() and sk.partition_ok
    assert hypergraph_from_skeleton(sk) == h
    where = sk.node_of()
    rng = random.Random(seed)
    for _ in range(30):
        u, v = rng.sample(h.labels, 2)
        want = 1 if where[u] == where[v] else sk.path_length(where[u], where[v])
        assert want == h.distance(u, v)
    again = SkeletonTree.from_dict(sk.to_dict())
    assert sorted(again.pairs()) == sorted(sk.pairs()) and again.nodes == sk.nodes


@pytest.mark.parametrize("seed", range(10))
def test_partition_parts_are_distance_twins(seed):
    h = random_orderly_hypertree(m=8, seed=seed)
    sk = build_skeleton(h)
    rows = {v: h.distances_from(v) for v in h.labels}
    for i in sk.colored_nodes():
        part = sorted(sk.nodes[i].vertices)
        for x in h.labels:
            if x not in part:
                assert len({rows[v][x] for v in part}) == 1


def test_claim11_exhaustive():
    for h in all_hypergraphs(4, 4):
        sk = build_skeleton(h)
        orderly_tree = is_orderly(h) and is_hypertree(h) and h.is_connected()
        assert orderly_tree == (sk.is_tree() and sk.partition_ok)
        assert orderly_tree == (is_hypertree(h) and h.is_connected() and sk.partition_ok)


def test_induced_two_privates_at_distance_two():
    h = Hypergraph(["p", "a", "q"], [["p", "a"], ["a", "q"]])
    sub = induced_sub_skeleton(h, ["p", "q"])
    assert shape(sub) == [("black", ()), ("black", ()), ("blue", ("p",)), ("blue", ("q",)), ("red", ())]
    assert sub.path_length(*[i for i in range(len(sub)) if sub.nodes[i].vertices]) == 2


def test_induced_single_vertex():
    h = random_orderly_hypertree(m=5, seed=2)
    sub = induced_sub_skeleton(h, [h.labels[0]])
    assert len(sub) == 1


@pytest.mark.parametrize("seed", range(8))
def test_induced_full_set_is_skeleton(seed):
    h = random_orderly_hypertree(m=10, seed=seed)
    assert canonical_form(induced_sub_skeleton(h, h.labels), True) == canonical_form(build_skeleton(h), True)


def test_induced_rejects_non_orderly():
    with pytest.raises(ValueError):
        induced_sub_skeleton(hard_gamma_instance(8), ["x"])


@pytest.mark.parametrize("seed", range(8))
def test_induced_prefixes_grow(seed):
    h = random_orderly_hypertree(m=8, seed=seed)
    order = list(h.labels)
    random.Random(seed).shuffle(order)
    prev = None
    for i in range(1, len(order) + 1):
        sub = induced_sub_skeleton(h, order[:i])
        assert all(sub.nodes[j].vertices for j in range(len(sub)) if not sub.nodes[j].is_black and sub.degree(j) <= 1)
        if prev is not None:
            assert len(sub) >= len(prev)
        prev = sub


def test_collapse_merges_same_black_leaves():
    h = Hypergraph(["a", "p", "q", "r"], [["a", "p", "q"], ["a", "r"]])
    sub = collapse_leaves(induced_sub_skeleton(h, ["p", "a", "r"]))
    assert len(sub) == 5
    h2 = Hypergraph(["a", "b", "c", "p"], [["a", "b", "p"], ["b", "c"]])
    sub2 = collapse_leaves(induced_sub_skeleton(h2, ["a", "p", "c"]))
    assert sorted(len(sub2.nodes[i].vertices) for i in sub2.colored_nodes()) == [0, 1, 2]


@pytest.mark.parametrize("seed", range(10))
def test_isomorphic_under_relabeling(seed):
    h = random_orderly_hypertree(m=9, seed=seed)
    rng = random.Random(seed)
    names = list(h.labels)
    rng.shuffle(names)
    ren = dict(zip(h.labels, names))
    g = Hypergraph([ren[v] for v in h.labels], [[ren[v] for v in h.edge_labels(i)] for i in range(h.m)])
    assert is_isomorphic(build_skeleton(h), build_skeleton(g))


def test_not_isomorphic_example():
    a = Hypergraph(["a", "b", "c"], [["a", "b"], ["b", "c"]])
    b = Hypergraph(["a", "b", "c", "d"], [["a", "b", "c"], ["c", "d"]])
    assert not is_isomorphic(build_skeleton(a), build_skeleton(b))


def test_canonical_form_rejects_non_tree():
    with pytest.raises(ValueError):
        canonical_form(build_skeleton(Hypergraph(list("xyz"), [["x", "y"], ["y", "z"], ["x", "z"]])))
