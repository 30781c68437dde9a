"""Directed-graph data model shared by the hyperlink and clickstream networks.

Nodes are dense integer indices into a registry of :class:`WebsiteRecord`
entries, so two graphs built over the same registry can be compared edge by
edge in O(1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional, Sequence


class GraphError(Exception):
    """Base class for all errors raised by this package."""


class StructuralError(GraphError):
    """An edge or node reference does not fit the graph structure."""


class ValidationError(GraphError, ValueError):
    """A value violates a data invariant (negative traffic, duplicate domain, ...)."""


class ParseError(GraphError, ValueError):
    """A line of an input file could not be parsed."""

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ConfigurationError(GraphError, ValueError):
    """Options or schemas that cannot be satisfied."""


class DomainError(GraphError, ValueError):
    """A statistic is undefined for the given input."""


@dataclass(frozen=True)
class WebsiteRecord:
    domain: str
    traffic: float = 0.0
    language: Optional[str] = None
    category: Optional[str] = None

    def __post_init__(self):
        if not self.domain:
            raise ValidationError("domain must be non-empty")
        if not self.traffic >= 0:
            raise ValidationError(f"traffic must be >= 0 for {self.domain!r}, got {self.traffic}")


class DirectedGraph:
    """Immutable simple digraph with positive edge weights.

    Build instances with :func:`build_graph`; the constructor trusts its input.

    Attributes
    ----------
    node_count : int
    weighted : bool
        Unweighted graphs store weight 1.0 on every edge.
    dropped_self_loops : int
        Number of self-loop records discarded during construction.
    """

    __slots__ = ("node_count", "weighted", "dropped_self_loops", "_weights", "_out", "_in")

    def __init__(self, node_count: int, weights: dict, weighted: bool, dropped_self_loops: int = 0):
        self.node_count = node_count
        self.weighted = weighted
        self.dropped_self_loops = dropped_self_loops
        self._weights = dict(sorted(weights.items()))
        out = [[] for _ in range(node_count)]
        inn = [[] for _ in range(node_count)]
        for (s, t) in self._weights:
            out[s].append(t)
            inn[t].append(s)
        self._out = tuple(tuple(x) for x in out)
        self._in = tuple(tuple(x) for x in inn)

    @property
    def edge_count(self) -> int:
        return len(self._weights)

    def __len__(self):
        return self.node_count

    def __contains__(self, edge) -> bool:
        return edge in self._weights

    def __eq__(self, other):
        if not isinstance(other, DirectedGraph):
            return NotImplemented
        return (self.node_count == other.node_count and self.weighted == other.weighted
                and self._weights == other._weights)

    def __hash__(self):
        return hash((self.node_count, self.weighted, tuple(self._weights.items())))

    def __repr__(self):
        kind = "weighted" if self.weighted else "unweighted"
        return f"DirectedGraph({self.node_count} nodes, {self.edge_count} edges, {kind})"

    def has_edge(self, source: int, target: int) -> bool:
        return (source, target) in self._weights

    def weight(self, source: int, target: int) -> float:
        return self._weights[(source, target)]

    def edges(self) -> Iterator[tuple]:
        """Yield ``(source, target, weight)`` sorted by ``(source, target)``."""
        for (s, t), w in self._weights.items():
            yield s, t, w

    def edge_set(self) -> set:
        return set(self._weights)

    def successors(self, node: int) -> tuple:
        return self._out[node]

    def predecessors(self, node: int) -> tuple:
        return self._in[node]

    def out_degree(self, node: int) -> int:
        return len(self._out[node])

    def in_degree(self, node: int) -> int:
        return len(self._in[node])

    def total_weight(self) -> float:
        return sum(self._weights.values())

    def undirected_neighbors(self) -> list:
        """Neighbor sets of the undirected simple projection."""
        nbrs = [set() for _ in range(self.node_count)]
        for (s, t) in self._weights:
            nbrs[s].add(t)
            nbrs[t].add(s)
        return nbrs

    def subgraph(self, nodes: Iterable[int]) -> tuple:
        """Induced sub-digraph on ``nodes``.

        Returns
        -------
        (DirectedGraph, list)
            The relabelled subgraph and the list mapping local index to the
            original node id (sorted ascending).
        """
        members = sorted(set(nodes))
        local = {v: i for i, v in enumerate(members)}
        weights = {}
        for v in members:
            for t in self._out[v]:
                if t in local:
                    weights[(local[v], local[t])] = self._weights[(v, t)]
        return DirectedGraph(len(members), weights, self.weighted), members


def build_graph(node_count: int, edge_records: Iterable[Sequence], weighted: bool) -> DirectedGraph:
    """Build a :class:`DirectedGraph` from ``(source, target, weight)`` records.

    Duplicate pairs are summed for weighted graphs and collapsed for
    unweighted ones. Self-loops are dropped and counted in
    ``dropped_self_loops``.
    """
    if node_count < 0:
        raise ValidationError(f"node_count must be >= 0, got {node_count}")
    weights: dict = {}
    loops = 0
    for i, rec in enumerate(edge_records):
        if len(rec) == 2:
            s, t = rec
            w = 1.0
        else:
            s, t, w = rec[0], rec[1], rec[2]
        s, t = int(s), int(t)
        if not (0 <= s < node_count and 0 <= t < node_count):
            raise StructuralError(
                f"edge record {i} ({s}, {t}) has an endpoint outside 0..{node_count - 1}")
        w = float(w)
        if weighted and not w > 0:
            raise ValidationError(f"edge record {i} ({s}, {t}) has non-positive weight {w}")
        if s == t:
            loops += 1
            continue
        if weighted:
            weights[(s, t)] = weights.get((s, t), 0.0) + w
        else:
            weights[(s, t)] = 1.0
    return DirectedGraph(node_count, weights, weighted, loops)


@dataclass(frozen=True)
class DualGraph:
    """Clickstream (weighted) and hyperlink (unweighted) networks over one registry."""

    registry: tuple
    clickstream: DirectedGraph
    hyperlink: DirectedGraph
    index: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "registry", tuple(self.registry))
        n = len(self.registry)
        for name, g in (("clickstream", self.clickstream), ("hyperlink", self.hyperlink)):
            if g.node_count != n:
                raise StructuralError(
                    f"{name} graph has {g.node_count} nodes but the registry has {n}")
        object.__setattr__(self, "index", registry_index(self.registry))

    @property
    def node_count(self) -> int:
        return len(self.registry)


def registry_index(registry: Sequence[WebsiteRecord]) -> dict:
    """Map domain to node id, rejecting duplicates."""
    index = {}
    dupes = []
    for i, rec in enumerate(registry):
        if rec.domain in index:
            dupes.append(rec.domain)
        index[rec.domain] = i
    if dupes:
        raise ValidationError(f"duplicate domains in registry: {sorted(set(dupes))}")
    return index
