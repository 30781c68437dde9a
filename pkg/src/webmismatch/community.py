"""Label-propagation communities and per-community summaries."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import ConfigurationError, DirectedGraph, DomainError, StructuralError, WebsiteRecord
from . import stats

log = logging.getLogger(__name__)

NEIGHBORHOODS = ("both", "in", "out")


@dataclass(frozen=True)
class CommunityAssignment:
    """Node-to-community labels, numbered 0..k-1 by descending community size."""

    labels: tuple
    iterations: int
    converged: bool
    seed: int
    weighted_votes: bool = True
    neighborhood: str = "both"

    @property
    def community_count(self) -> int:
        return len(set(self.labels))

    def members(self) -> List[list]:
        groups = [[] for _ in range(self.community_count)]
        for v, c in enumerate(self.labels):
            groups[c].append(v)
        return groups

    def sizes(self) -> List[int]:
        return [len(m) for m in self.members()]

    def to_json(self) -> dict:
        return {
            "communities": self.community_count,
            "sizes": self.sizes(),
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
            "weighted_votes": self.weighted_votes,
            "neighborhood": self.neighborhood,
        }


def canonical_labels(labels: Sequence) -> tuple:
    """Renumber communities by descending size, ties by smallest member id."""
    groups = {}
    for v, c in enumerate(labels):
        groups.setdefault(c, []).append(v)
    order = sorted(groups.values(), key=lambda m: (-len(m), m[0]))
    out = [0] * len(labels)
    for new, members in enumerate(order):
        for v in members:
            out[v] = new
    return tuple(out)


def vote_table(graph: DirectedGraph, weighted_votes: bool, neighborhood: str = "both") -> list:
    """Per node, a list of ``(neighbor, strength)``.

    A neighbour linked in both directions contributes the sum of both edges.
    """
    if neighborhood not in NEIGHBORHOODS:
        raise ConfigurationError(f"neighborhood must be one of {NEIGHBORHOODS}, got {neighborhood!r}")
    strength = [dict() for _ in range(graph.node_count)]
    for s, t, w in graph.edges():
        w = w if weighted_votes else 1.0
        if neighborhood in ("both", "out"):
            strength[s][t] = strength[s].get(t, 0.0) + w
        if neighborhood in ("both", "in"):
            strength[t][s] = strength[t].get(s, 0.0) + w
    return [sorted(d.items()) for d in strength]


def _tally(votes, labels):
    tally = {}
    for u, s in votes:
        lab = labels[u]
        tally[lab] = tally.get(lab, 0.0) + s
    return tally


def label_propagation(graph: DirectedGraph, seed: int = 0, weighted_votes: Optional[bool] = None,
                      max_iterations: int = 100, neighborhood: str = "both") -> CommunityAssignment:
    """Asynchronous label propagation.

    Every node starts with its own label. Each sweep visits nodes in a
    freshly shuffled order; a node whose label is not among the most popular
    in its neighbourhood switches to one of them, chosen at random. The run
    stops after the first sweep with no switch.

    Parameters
    ----------
    graph : DirectedGraph
    seed : int
        Seeds node ordering and tie breaking; equal seeds give equal results.
    weighted_votes : bool, optional
        Weight votes by edge weight. Defaults to ``graph.weighted``.
    max_iterations : int
        Sweep limit; hitting it returns ``converged=False``.
    neighborhood : {"both", "in", "out"}
        Which edge directions make a node a neighbour.
    """
    if max_iterations < 1:
        raise ConfigurationError(f"max_iterations must be >= 1, got {max_iterations}")
    if weighted_votes is None:
        weighted_votes = graph.weighted
    n = graph.node_count
    votes = vote_table(graph, weighted_votes, neighborhood)
    active = np.array([v for v in range(n) if votes[v]], dtype=np.int64)
    rng = np.random.default_rng(seed)
    labels = list(range(n))
    converged = False
    sweeps = 0
    for sweeps in range(1, max_iterations + 1):
        changed = 0
        for v in rng.permutation(active).tolist():
            tally = _tally(votes[v], labels)
            top = max(tally.values())
            if tally.get(labels[v]) == top:
                continue
            best = sorted(lab for lab, c in tally.items() if c == top)
            labels[v] = best[0] if len(best) == 1 else best[int(rng.integers(len(best)))]
            changed += 1
        if changed == 0:
            converged = True
            break
    if not converged:
        log.warning("label propagation hit max_iterations=%d without converging", max_iterations)
    return CommunityAssignment(canonical_labels(labels), sweeps, converged, seed, weighted_votes, neighborhood)


def is_label_equilibrium(graph: DirectedGraph, labels: Sequence, weighted_votes: bool,
                         neighborhood: str = "both") -> bool:
    """True when every node's label attains the maximal vote in its neighbourhood."""
    for v, nb in enumerate(vote_table(graph, weighted_votes, neighborhood)):
        if not nb:
            continue
        tally = _tally(nb, labels)
        if tally.get(labels[v]) != max(tally.values()):
            return False
    return True


@dataclass(frozen=True)
class CommunityRow:
    community: object
    node_count: int
    edge_count: int
    density: Optional[float]
    average_path_length: Optional[float]
    total_clickstream: float

    def to_json(self) -> dict:
        return {
            "community": self.community,
            "nodes": self.node_count,
            "edges": self.edge_count,
            "density": self.density,
            "average_path_length": self.average_path_length,
            "total_clickstream": self.total_clickstream,
        }


@dataclass(frozen=True)
class CommunitySummary:
    rows: tuple
    total: CommunityRow

    def to_json(self) -> dict:
        return {"communities": [r.to_json() for r in self.rows], "total": self.total.to_json()}


def _row(name, graph: DirectedGraph) -> CommunityRow:
    n = graph.node_count
    return CommunityRow(
        community=name,
        node_count=n,
        edge_count=graph.edge_count,
        density=stats.density(graph) if n >= 2 else None,
        average_path_length=stats.try_average_path_length(graph) if n >= 2 else None,
        total_clickstream=graph.total_weight(),
    )


def community_summary(graph: DirectedGraph, assignment: CommunityAssignment) -> CommunitySummary:
    """Size, intra-community edges, density, path length and weight per community.

    Density and path length are ``None`` for communities where they are
    undefined (fewer than two nodes, or no reachable pair).
    """
    if len(assignment.labels) != graph.node_count:
        raise StructuralError(
            f"assignment covers {len(assignment.labels)} nodes, graph has {graph.node_count}")
    rows = []
    for c, members in enumerate(assignment.members()):
        sub, _ = graph.subgraph(members)
        rows.append(_row(c, sub))
    return CommunitySummary(tuple(rows), _row("total", graph))


def majority_languages(assignment: CommunityAssignment, registry: Sequence[WebsiteRecord]) -> dict:
    """Most common language tag per community; ties go to the alphabetically first tag."""
    counts = {}
    for v, c in enumerate(assignment.labels):
        lang = registry[v].language
        if lang:
            counts.setdefault(c, Counter())[lang] += 1
    return {c: min(cnt.items(), key=lambda kv: (-kv[1], kv[0]))[0] for c, cnt in sorted(counts.items())}


def label_purity(assignment: CommunityAssignment, registry: Sequence[WebsiteRecord]) -> float:
    """Fraction of language-tagged nodes whose tag matches their community's majority tag."""
    if len(registry) != len(assignment.labels):
        raise StructuralError("registry and assignment differ in length")
    majority = majority_languages(assignment, registry)
    tagged = [(v, rec.language) for v, rec in enumerate(registry) if rec.language]
    if not tagged:
        raise DomainError("label purity needs at least one language-tagged node")
    hits = sum(1 for v, lang in tagged if majority[assignment.labels[v]] == lang)
    return hits / len(tagged)


def partition_accuracy(found: Sequence, truth: Sequence) -> float:
    """Fraction of nodes correctly grouped under the best one-to-one community matching.

    Found communities and true blocks are paired to maximise the number of
    shared nodes; unpaired communities count as errors.
    """
    if len(found) != len(truth):
        raise StructuralError("label sequences differ in length")
    if not found:
        return 1.0
    f_ids = {c: i for i, c in enumerate(sorted(set(found)))}
    t_ids = {c: i for i, c in enumerate(sorted(set(truth)))}
    table = np.zeros((len(f_ids), len(t_ids)), dtype=np.int64)
    for a, b in zip(found, truth):
        table[f_ids[a], t_ids[b]] += 1
    rows, cols = linear_sum_assignment(table, maximize=True)
    return float(table[rows, cols].sum()) / len(found)
