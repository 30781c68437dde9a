import random

import pytest
from hypothesis import given, settings, strategies as st

from webmismatch import ConfigurationError, DomainError, WebsiteRecord, build_graph
from webmismatch.community import (
    CommunityAssignment,
    canonical_labels,
    community_summary,
    is_label_equilibrium,
    label_propagation,
    label_purity,
    partition_accuracy,
)
from webmismatch.synth import PlantedPartitionSpec, generate_planted_digraph, synthetic_registry

from conftest import complete

import oracles


def two_cliques():
    edges = [(s, t) for block in (range(4), range(4, 8)) for s in block for t in block if s != t]
    return build_graph(8, edges + [(3, 4)], weighted=False)


def test_complete_digraph_is_one_community():
    a = label_propagation(complete(5), seed=1)
    assert a.community_count == 1
    assert a.converged


def test_two_cliques_split_under_every_seed():
    g = two_cliques()
    for seed in range(100):
        a = label_propagation(g, seed=seed)
        assert a.community_count == 2, seed
        assert set(a.labels[:4]) != set(a.labels[4:])


def test_isolated_nodes_keep_their_labels():
    g = build_graph(4, [(0, 1), (1, 0)], weighted=False)
    a = label_propagation(g, seed=0)
    assert a.community_count == 3
    assert a.labels[0] == a.labels[1] == 0


def test_same_seed_same_assignment():
    pg = generate_planted_digraph(PlantedPartitionSpec((30, 20, 10), 0.3, 0.02, seed=4))
    assert label_propagation(pg.graph, seed=9) == label_propagation(pg.graph, seed=9)


def test_max_iterations_reported():
    pg = generate_planted_digraph(PlantedPartitionSpec((60,), 0.1, 0.0, seed=2))
    a = label_propagation(pg.graph, seed=0, max_iterations=1)
    assert a.iterations == 1
    assert not a.converged
    with pytest.raises(ConfigurationError):
        label_propagation(pg.graph, max_iterations=0)


@pytest.mark.parametrize("neighborhood", ["both", "in", "out"])
def test_converged_runs_satisfy_certificate(neighborhood):
    for seed in range(20):
        rng = random.Random(seed)
        edges = oracles.random_edges(40, 0.08, rng, weighted=True)
        g = build_graph(40, [(s, t, w) for (s, t), w in edges.items()], weighted=True)
        for weighted in (True, False):
            a = label_propagation(g, seed=seed, weighted_votes=weighted, neighborhood=neighborhood)
            if a.converged:
                assert is_label_equilibrium(g, a.labels, weighted, neighborhood)


def test_certificate_detects_violation():
    g = two_cliques()
    assert not is_label_equilibrium(g, [0, 0, 0, 1, 1, 1, 1, 1], False)
    assert is_label_equilibrium(g, [0, 0, 0, 0, 1, 1, 1, 1], False)


def test_canonical_labels_by_size_then_smallest_member():
    assert canonical_labels([7, 7, 3, 3, 3, 9]) == (1, 1, 0, 0, 0, 2)
    assert canonical_labels([5, 2, 5, 2]) == (0, 1, 0, 1)


@settings(max_examples=30)
@given(st.permutations(range(8)))
def test_canonical_labels_permutation_invariant(perm):
    labels = [0, 0, 0, 1, 1, 2, 2, 2]
    relabelled = [perm[c] for c in labels]
    assert canonical_labels(relabelled) == canonical_labels(labels)


@settings(max_examples=20)
@given(st.integers(2, 9), st.integers(0, 10_000))
def test_one_clique_one_community_any_seed(n, seed):
    assert label_propagation(complete(n, weighted=True), seed=seed).community_count == 1


def _assignment(labels):
    return CommunityAssignment(tuple(labels), 1, True, 0)


def test_summary_rows():
    g = build_graph(5, [(s, t, 2.0) for s in range(4) for t in range(4) if s != t] + [(3, 4, 1.0)], True)
    summary = community_summary(g, _assignment([0, 0, 0, 0, 1]))
    row = summary.rows[0]
    assert (row.node_count, row.edge_count, row.density, row.average_path_length) == (4, 12, 1.0, 1.0)
    assert row.total_clickstream == 24.0
    single = summary.rows[1]
    assert (single.node_count, single.edge_count, single.density, single.average_path_length) == (1, 0, None, None)
    assert summary.total.total_clickstream == 25.0
    assert sum(r.node_count for r in summary.rows) == 5


def test_summary_korean_row_density():
    rng = random.Random(0)
    pairs = [(s, t) for s in range(15) for t in range(15) if s != t]
    g = build_graph(15, rng.sample(pairs, 114), weighted=False)
    row = community_summary(g, _assignment([0] * 15)).rows[0]
    assert row.edge_count == 114
    assert round(row.density, 3) == 0.543


@settings(max_examples=30)
@given(st.lists(st.integers(0, 3), min_size=6, max_size=6))
def test_intra_weight_never_exceeds_total(labels):
    rng = random.Random(sum(labels))
    edges = oracles.random_edges(6, 0.5, rng, weighted=True)
    g = build_graph(6, [(s, t, w) for (s, t), w in edges.items()], True)
    a = _assignment(canonical_labels(labels))
    s = community_summary(g, a)
    assert sum(r.total_clickstream for r in s.rows) <= g.total_weight() + 1e-9


def _reg(langs):
    return [WebsiteRecord(f"s{i}.com", 1.0, lang) for i, lang in enumerate(langs)]


def test_purity_clean_cases():
    assert label_purity(_assignment([0, 0, 0]), _reg(["en"] * 3)) == 1.0
    assert label_purity(_assignment([0, 0, 1, 1]), _reg(["en", "en", "zh", "zh"])) == 1.0


def test_purity_excludes_untagged_and_breaks_ties_alphabetically():
    assert label_purity(_assignment([0, 0, 0, 0]), _reg(["zh", "en", None, "ja"])) == pytest.approx(1 / 3)
    with pytest.raises(DomainError):
        label_purity(_assignment([0, 0]), _reg([None, None]))


def test_purity_with_exact_flips():
    labels = [b for b, size in enumerate((300, 150, 50)) for _ in range(size)]
    reg = synthetic_registry(500, labels, languages=("en", "zh", "ja"), flip_fraction=0.04, seed=1)
    assert label_purity(_assignment(labels), reg) == pytest.approx(0.96, abs=1e-12)


def test_partition_accuracy():
    assert partition_accuracy([0, 0, 1, 1], [5, 5, 7, 7]) == 1.0
    assert partition_accuracy([0, 0, 0, 0], [1, 1, 2, 2]) == 0.5
    assert partition_accuracy([0, 1, 2, 3], [0, 0, 1, 1]) == 0.5
