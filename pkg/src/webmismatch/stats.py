"""Structural statistics for directed networks.

Clustering is measured on the undirected simple projection; path lengths are
directed hop counts over reachable ordered pairs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import asdict, dataclass
from typing import Optional

from .core import DirectedGraph, DomainError


@dataclass(frozen=True)
class NetworkSummary:
    node_count: int
    edge_count: int
    weak_components: int
    global_transitivity: float
    avg_local_transitivity: float
    density: float
    average_path_length: float

    def to_json(self) -> dict:
        d = asdict(self)
        return {
            "nodes": d["node_count"],
            "edges": d["edge_count"],
            "weak_components": d["weak_components"],
            "global_transitivity": d["global_transitivity"],
            "avg_local_transitivity": d["avg_local_transitivity"],
            "density": d["density"],
            "average_path_length": d["average_path_length"],
        }


def density_from_counts(node_count: int, edge_count: int) -> float:
    if node_count < 2:
        raise DomainError(f"density needs at least 2 nodes, got {node_count}")
    return edge_count / (node_count * (node_count - 1))


def density(graph: DirectedGraph) -> float:
    """Fraction of the N(N-1) possible directed edges that are present."""
    return density_from_counts(graph.node_count, graph.edge_count)


def weak_components(graph: DirectedGraph) -> tuple:
    """Count weakly connected components.

    Returns
    -------
    (int, list of int)
        Component count and a per-node component label, labels numbered in
        order of each component's smallest node.
    """
    n = graph.node_count
    labels = [-1] * n
    count = 0
    for root in range(n):
        if labels[root] >= 0:
            continue
        labels[root] = count
        stack = [root]
        while stack:
            v = stack.pop()
            for u in graph.successors(v) + graph.predecessors(v):
                if labels[u] < 0:
                    labels[u] = count
                    stack.append(u)
        count += 1
    return count, labels


def _triangle_counts(nbrs: list) -> list:
    # triangles through each node on the undirected projection
    tri = [0] * len(nbrs)
    for v, nv in enumerate(nbrs):
        if len(nv) < 2:
            continue
        links = 0
        for u in nv:
            nu = nbrs[u]
            if len(nu) < len(nv):
                links += sum(1 for w in nu if w in nv)
            else:
                links += sum(1 for w in nv if w in nu)
        tri[v] = links // 2
    return tri


def global_transitivity(graph: DirectedGraph) -> float:
    """3 x triangles / connected triples on the undirected projection; 0 if no triples."""
    nbrs = graph.undirected_neighbors()
    tri = _triangle_counts(nbrs)
    triples = sum(len(nv) * (len(nv) - 1) // 2 for nv in nbrs)
    if triples == 0:
        return 0.0
    # each triangle is counted once at each of its three corners
    return sum(tri) / triples


def local_transitivity(graph: DirectedGraph) -> list:
    """Per-node clustering coefficient, ``None`` where undirected degree < 2."""
    nbrs = graph.undirected_neighbors()
    tri = _triangle_counts(nbrs)
    out = []
    for v, nv in enumerate(nbrs):
        d = len(nv)
        out.append(None if d < 2 else tri[v] / (d * (d - 1) / 2))
    return out


def avg_local_transitivity(graph: DirectedGraph, low_degree_as_zero: bool = False) -> float:
    """Mean local clustering coefficient.

    Nodes with fewer than two neighbours are left out of the mean unless
    ``low_degree_as_zero`` is set, in which case they contribute 0.
    """
    values = local_transitivity(graph)
    if low_degree_as_zero:
        values = [0.0 if c is None else c for c in values]
    else:
        values = [c for c in values if c is not None]
    if not values:
        return 0.0
    return sum(values) / len(values)


def bfs_distances(graph: DirectedGraph, source: int, reverse: bool = False) -> list:
    """Hop distances from ``source`` (or to it, with ``reverse``); -1 when unreachable."""
    nxt = graph.predecessors if reverse else graph.successors
    dist = [-1] * graph.node_count
    dist[source] = 0
    queue = deque([source])
    while queue:
        v = queue.popleft()
        dv = dist[v] + 1
        for u in nxt(v):
            if dist[u] < 0:
                dist[u] = dv
                queue.append(u)
    return dist


def path_length_totals(graph: DirectedGraph) -> tuple:
    """Sum of hop distances and number of reachable ordered pairs (s != t)."""
    total = 0
    pairs = 0
    for s in range(graph.node_count):
        for d in bfs_distances(graph, s):
            if d > 0:
                total += d
                pairs += 1
    return total, pairs


def average_path_length(graph: DirectedGraph) -> float:
    total, pairs = path_length_totals(graph)
    if pairs == 0:
        raise DomainError("average path length is undefined: no ordered pair is reachable")
    return total / pairs


def try_average_path_length(graph: DirectedGraph) -> Optional[float]:
    total, pairs = path_length_totals(graph)
    return total / pairs if pairs else None


def summarize(graph: DirectedGraph, low_degree_as_zero: bool = False) -> NetworkSummary:
    if graph.node_count < 3:
        raise DomainError(f"summary needs at least 3 nodes, got {graph.node_count}")
    return NetworkSummary(
        node_count=graph.node_count,
        edge_count=graph.edge_count,
        weak_components=weak_components(graph)[0],
        global_transitivity=global_transitivity(graph),
        avg_local_transitivity=avg_local_transitivity(graph, low_degree_as_zero),
        density=density(graph),
        average_path_length=average_path_length(graph),
    )
