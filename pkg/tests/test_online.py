import itertools
import random

import pytest

from hyperlearn.errors import InconsistentOracleError, PreconditionError
from hyperlearn.generators import family_hdkn, hyperpath_pn, random_orderly_hypertree, worst_prefix_order
from hyperlearn.hypergraph import Hypergraph
from hyperlearn.online import OnlineLearner, learn_online, learner_view
from hyperlearn.oracle import DistanceOracle, exact_oracle
from hyperlearn.pathdepth import RootedTree, exact_path_depth
from hyperlearn.skeleton import canonical_form


class TableOracle(DistanceOracle):
    def __init__(self, table):
        super().__init__(sorted({v for pair in table for v in pair}))
        self.table = {frozenset(k): d for k, d in table.items()}

    def _sp(self, u, v):
        return self.table[frozenset((u, v))]


def instance(seed, m_max=20):
    rng = random.Random(seed)
    h = random_orderly_hypertree(m=rng.randint(3, m_max), max_degree=rng.randint(2, 5), seed=seed)
    order = list(h.labels)
    rng.shuffle(order)
    return h, order


@pytest.mark.parametrize("strategy", ["separator", "greedy"])
@pytest.mark.parametrize("seed", range(25))
def test_prefix_structure_matches_target(seed, strategy):
    h, order = instance(seed)

    def check(i, learner):
        want = canonical_form(learner_view(h, order[:i]), labeled=True)
        assert canonical_form(learner.skeleton(), labeled=True) == want

    result = learn_online(order, exact_oracle(h), strategy, on_insert=check)
    assert result.hypergraph == h


@pytest.mark.parametrize("seed", range(10))
def test_prefix_distances(seed):
    h, order = instance(seed, 12)

    def check(i, learner):
        sk = learner.skeleton()
        where = sk.node_of()
        for u, v in itertools.combinations(order[:i], 2):
            lam = 1 if where[u] == where[v] else sk.path_length(where[u], where[v])
            assert lam == h.distance(u, v)

    learn_online(order, exact_oracle(h), on_insert=check)


@pytest.mark.parametrize("seed", range(15))
def test_vertex_moves_bounded_by_degree(seed):
    h, order = instance(seed, 40)
    result = learn_online(order, exact_oracle(h))
    delta = max(h.max_edge_degree(), 1)
    assert all(c <= delta for c in result.moves.values())


def skeleton_tree(learner) -> RootedTree:
    sk = learner.skeleton()
    parent = [-1] * len(sk)
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in sk.adj[u]:
            if w not in seen:
                seen.add(w)
                parent[w] = u
                stack.append(w)
    return RootedTree(tuple(parent))


@pytest.mark.parametrize("seed", range(12))
def test_rounds_within_three_path_depths(seed):
    h, order = instance(seed, 9)
    learner = OnlineLearner(exact_oracle(h))
    for v in order:
        before = skeleton_tree(learner) if learner.phase == 2 else None
        rec = learner.insert(v)
        if before is not None:
            assert rec.rounds <= 3 * max(exact_path_depth(before), 1)


def test_worst_prefix_cost():
    h = random_orderly_hypertree(m=10, seed=3)
    padded, order = worst_prefix_order(h, 10)
    result = learn_online(order, exact_oracle(padded))
    assert result.hypergraph == padded
    prefix = sum(r.queries for r in result.trace[:10])
    assert prefix == 10 * 9 // 2


def test_trace_records():
    h, order = instance(1)
    result = learn_online(order, exact_oracle(h))
    assert len(result.trace) == h.n
    assert sum(r.queries for r in result.trace) == result.queries
    phase2 = [r for r in result.trace if r.phase == 2]
    assert all(r.attach in ("colored", "black") and r.rounds >= 1 for r in phase2)
    assert {"vertex", "rounds", "queries", "k", "attach"} <= set(phase2[0].to_dict())


@pytest.mark.parametrize("h", [family_hdkn(3, 2, 6), hyperpath_pn(10)])
def test_special_families(h):
    for strategy in ("separator", "greedy"):
        assert learn_online(h.labels, exact_oracle(h), strategy).hypergraph == h


def test_single_edge_rejected():
    h = Hypergraph(list("abc"), [list("abc")])
    with pytest.raises(PreconditionError):
        learn_online(h.labels, exact_oracle(h))


def test_inconsistent_answers():
    oracle = TableOracle({("a", "b"): 1, ("a", "c"): 3, ("b", "c"): 1})
    with pytest.raises(InconsistentOracleError):
        learn_online(["a", "b", "c"], oracle)


def test_disconnected_target():
    h = Hypergraph(list("abcd"), [["a", "b"], ["c", "d"]])
    with pytest.raises(InconsistentOracleError):
        learn_online(h.labels, exact_oracle(h))


def test_argument_errors():
    h, order = instance(2)
    with pytest.raises(ValueError):
        learn_online(order + order[:1], exact_oracle(h))
    with pytest.raises(ValueError):
        learn_online(order, exact_oracle(h), strategy="random")


from hypothesis import given, settings
from hypothesis import strategies as st


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.randoms(use_true_random=False), st.sampled_from(["separator", "greedy"]))
def test_any_order_reconstructs(seed, rnd, strategy):
    h = random_orderly_hypertree(m=3 + seed % 15, max_degree=2 + seed % 4, seed=seed)
    order = list(h.labels)
    rnd.shuffle(order)
    assert learn_online(order, exact_oracle(h), strategy).hypergraph == h


@pytest.mark.parametrize("seed", range(10))
def test_incremental_leaf_counts(seed):
    from hyperlearn.strategies import leaf_counts

    h, order = instance(seed, 30)

    def check(i, learner):
        if learner.phase == 2:
            assert leaf_counts(learner.root, learner.children) == learner.leaves

    learn_online(order, exact_oracle(h), on_insert=check)
