"""Degree, betweenness and closeness centrality on directed graphs.

Shortest paths are hop counts by default. ``weighted=True`` switches to
distances of ``1 / weight`` so that heavier clickstreams are "closer".
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass
from typing import List, Sequence

from .core import ConfigurationError, DirectedGraph, WebsiteRecord

MEASURES = ("degree", "betweenness", "closeness")


@dataclass(frozen=True)
class CentralityScores:
    in_degree: tuple
    out_degree: tuple
    betweenness: tuple
    closeness: tuple

    @property
    def degree_total(self) -> tuple:
        return tuple(i + o for i, o in zip(self.in_degree, self.out_degree))

    def measure(self, name: str) -> tuple:
        if name == "degree":
            return self.degree_total
        return getattr(self, name)


def degree_centrality(graph: DirectedGraph) -> List[tuple]:
    """``(in, out, total)`` degree of every node."""
    out = []
    for v in range(graph.node_count):
        i, o = graph.in_degree(v), graph.out_degree(v)
        out.append((i, o, i + o))
    return out


def _sssp_hops(graph, s):
    n = graph.node_count
    sigma = [0] * n
    dist = [-1] * n
    preds = [[] for _ in range(n)]
    order = []
    sigma[s] = 1
    dist[s] = 0
    queue = deque([s])
    while queue:
        v = queue.popleft()
        order.append(v)
        dv = dist[v] + 1
        for w in graph.successors(v):
            if dist[w] < 0:
                dist[w] = dv
                queue.append(w)
            if dist[w] == dv:
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def _sssp_weighted(graph, s):
    n = graph.node_count
    sigma = [0] * n
    dist = [None] * n
    preds = [[] for _ in range(n)]
    order = []
    seen = {s: 0.0}
    sigma[s] = 1
    heap = [(0.0, s)]
    while heap:
        d, v = heapq.heappop(heap)
        if dist[v] is not None:
            continue
        dist[v] = d
        order.append(v)
        for w in graph.successors(v):
            nd = d + 1.0 / graph.weight(v, w)
            if dist[w] is None and (w not in seen or nd < seen[w]):
                seen[w] = nd
                sigma[w] = sigma[v]
                preds[w] = [v]
                heapq.heappush(heap, (nd, w))
            elif nd == seen.get(w):
                sigma[w] += sigma[v]
                preds[w].append(v)
    return order, preds, sigma


def betweenness_centrality(graph: DirectedGraph, weighted: bool = False) -> List[float]:
    """Unnormalised directed betweenness, accumulated one source at a time.

    Each node scores the sum over ordered pairs ``(s, t)`` with ``s != v != t``
    of the fraction of shortest s-t paths passing through it.
    """
    n = graph.node_count
    bc = [0.0] * n
    sssp = _sssp_weighted if weighted else _sssp_hops
    for s in range(n):
        order, preds, sigma = sssp(graph, s)
        delta = [0.0] * n
        for w in reversed(order):
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc


def distances_from(graph: DirectedGraph, source: int, reverse: bool = False, weighted: bool = False) -> dict:
    """Shortest distances from ``source`` to every reachable node (itself included)."""
    nxt = graph.predecessors if reverse else graph.successors
    if not weighted:
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in nxt(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        return dist
    dist = {}
    heap = [(0.0, source)]
    while heap:
        d, v = heapq.heappop(heap)
        if v in dist:
            continue
        dist[v] = d
        for u in nxt(v):
            if u not in dist:
                w = graph.weight(u, v) if reverse else graph.weight(v, u)
                heapq.heappush(heap, (d + 1.0 / w, u))
    return dist


def closeness_centrality(graph: DirectedGraph, mode: str = "out", variant: str = "classic",
                         weighted: bool = False) -> List[float]:
    """Closeness of every node.

    Parameters
    ----------
    mode : {"out", "in"}
        Measure distances from the node (``out``) or towards it (``in``).
    variant : {"classic", "harmonic"}
        ``classic`` is ``(r / sum_d) * (r / (N - 1))`` over the ``r`` reachable
        nodes, so it stays defined on graphs that are not strongly connected.
        ``harmonic`` is ``sum(1 / d) / (N - 1)``.

    Isolated nodes, and every node of a one-node graph, score 0.
    """
    if mode not in ("out", "in"):
        raise ConfigurationError(f"mode must be 'out' or 'in', got {mode!r}")
    if variant not in ("classic", "harmonic"):
        raise ConfigurationError(f"variant must be 'classic' or 'harmonic', got {variant!r}")
    n = graph.node_count
    scores = []
    for v in range(n):
        dist = distances_from(graph, v, reverse=(mode == "in"), weighted=weighted)
        ds = [d for u, d in dist.items() if u != v]
        if not ds:
            scores.append(0.0)
        elif variant == "harmonic":
            scores.append(sum(1.0 / d for d in ds) / (n - 1))
        else:
            r = len(ds)
            scores.append((r / sum(ds)) * (r / (n - 1)))
    return scores


def centrality_scores(graph: DirectedGraph, closeness_mode: str = "out", closeness_variant: str = "classic",
                      weighted: bool = False) -> CentralityScores:
    deg = degree_centrality(graph)
    return CentralityScores(
        in_degree=tuple(d[0] for d in deg),
        out_degree=tuple(d[1] for d in deg),
        betweenness=tuple(betweenness_centrality(graph, weighted)),
        closeness=tuple(closeness_centrality(graph, closeness_mode, closeness_variant, weighted)),
    )


@dataclass(frozen=True)
class CommunityCentrality:
    """Per-community rankings; node ids and scores refer to the full graph's ids."""

    community: int
    scores: dict
    ranked: dict
    triple_top: tuple

    def to_json(self, registry: Sequence[WebsiteRecord] = None) -> dict:
        name = (lambda v: registry[v].domain) if registry is not None else (lambda v: v)
        return {
            "community": self.community,
            "ranked": {m: [{"node": name(v), "score": self.scores[m][v]} for v in nodes]
                       for m, nodes in self.ranked.items()},
            "triple_top": [name(v) for v in self.triple_top],
        }


def _rank(values: dict, traffic: Sequence[float]) -> list:
    # rounding absorbs summation-order noise so symmetric nodes tie exactly
    return sorted(values, key=lambda v: (-round(values[v], 9), -traffic[v], v))


def top_nodes_per_community(graph: DirectedGraph, assignment, registry: Sequence[WebsiteRecord], k: int = 5,
                            closeness_mode: str = "out", closeness_variant: str = "classic",
                            weighted: bool = False) -> List[CommunityCentrality]:
    """Rank each community's members on its induced sub-digraph.

    Ties are broken by higher traffic, then smaller node id. ``triple_top``
    holds the node ranked first on degree, betweenness and closeness alike
    (empty when the three leaders differ).
    """
    if k < 1:
        raise ConfigurationError(f"k must be >= 1, got {k}")
    traffic = [rec.traffic for rec in registry]
    results = []
    for c, members in enumerate(assignment.members()):
        sub, ids = graph.subgraph(members)
        sc = centrality_scores(sub, closeness_mode, closeness_variant, weighted)
        scores = {m: {ids[i]: float(x) for i, x in enumerate(sc.measure(m))} for m in MEASURES}
        scores["in_degree"] = {ids[i]: x for i, x in enumerate(sc.in_degree)}
        scores["out_degree"] = {ids[i]: x for i, x in enumerate(sc.out_degree)}
        full = {m: _rank(scores[m], traffic) for m in MEASURES}
        leaders = {full[m][0] for m in MEASURES}
        results.append(CommunityCentrality(
            community=c,
            scores=scores,
            ranked={m: full[m][:k] for m in MEASURES},
            triple_top=tuple(leaders) if len(leaders) == 1 else (),
        ))
    return results
