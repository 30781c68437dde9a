"""Greedy strongest-clickstream pathways and node-set moderated share."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, List, Sequence

from .core import DirectedGraph, DomainError, StructuralError, WebsiteRecord, build_graph


@dataclass(frozen=True)
class PathwayTrace:
    """Edges followed from ``start``; ``subnetwork`` is indexed like the full graph."""

    start: int
    steps: tuple
    subnetwork: DirectedGraph
    cycle_detected: bool
    community: object = None

    @property
    def nodes(self) -> list:
        """Visited nodes in order, starting node included."""
        return [self.start] + [t for _, t, _ in self.steps]

    def to_json(self, registry: Sequence[WebsiteRecord] = None) -> dict:
        name = (lambda v: registry[v].domain) if registry is not None else (lambda v: v)
        return {
            "community": self.community,
            "start": name(self.start),
            "steps": [{"source": name(s), "target": name(t), "weight": w} for s, t, w in self.steps],
            "cycle_detected": self.cycle_detected,
        }

    def to_dot(self, registry: Sequence[WebsiteRecord] = None, name: str = "pathway") -> str:
        label = (lambda v: registry[v].domain) if registry is not None else str
        used = sorted({v for s, t, _ in self.subnetwork.edges() for v in (s, t)} | {self.start})
        lines = [f"digraph {name} {{"]
        for v in used:
            shape = "box" if v == self.start else "ellipse"
            lines.append(f'  n{v} [label={json.dumps(label(v))}, shape={shape}];')
        for s, t, w in self.subnetwork.edges():
            lines.append(f"  n{s} -> n{t} [label={json.dumps(repr(w))}, weight={repr(w)}];")
        lines.append("}")
        return "\n".join(lines) + "\n"


def strongest_successor(graph: DirectedGraph, node: int):
    """Target of the heaviest outbound edge (smallest id on ties), or ``None``."""
    best = None
    best_w = None
    for t in graph.successors(node):  # ascending target order
        w = graph.weight(node, t)
        if best_w is None or w > best_w:
            best, best_w = t, w
    return best


def extract_popular_pathway(graph: DirectedGraph, start: int, step_count: int = 4) -> PathwayTrace:
    """Follow the heaviest outbound edge ``step_count`` times from ``start``.

    Nodes may be revisited. The walk stops early at a node with no outbound
    edge.
    """
    if not 0 <= start < graph.node_count:
        raise StructuralError(f"start node {start} outside 0..{graph.node_count - 1}")
    if step_count < 1:
        raise DomainError(f"step_count must be >= 1, got {step_count}")
    steps = []
    current = start
    for _ in range(step_count):
        nxt = strongest_successor(graph, current)
        if nxt is None:
            break
        steps.append((current, nxt, graph.weight(current, nxt)))
        current = nxt
    visited = [start] + [t for _, t, _ in steps]
    # repeated edges must not be summed by build_graph
    unique = {(s, t): w for s, t, w in steps}
    sub = build_graph(graph.node_count, [(s, t, w) for (s, t), w in unique.items()], graph.weighted)
    return PathwayTrace(start, tuple(steps), sub, len(set(visited)) < len(visited))


def pathway_per_community(graph: DirectedGraph, assignment, registry: Sequence[WebsiteRecord],
                          step_count: int = 4) -> List[PathwayTrace]:
    """One pathway per community, starting from its highest-traffic member.

    The walk runs on the full graph, so it may leave the community.
    """
    if len(registry) != graph.node_count or len(assignment.labels) != graph.node_count:
        raise StructuralError("graph, registry and assignment must cover the same nodes")
    traces = []
    for c, members in enumerate(assignment.members()):
        start = min(members, key=lambda v: (-registry[v].traffic, v))
        trace = extract_popular_pathway(graph, start, step_count)
        traces.append(PathwayTrace(trace.start, trace.steps, trace.subnetwork, trace.cycle_detected, c))
    return traces


def moderated_share(graph: DirectedGraph, node_set: Iterable[int], direction: str = "any") -> float:
    """Fraction of total edge weight on edges touching ``node_set``.

    ``direction`` selects edges whose source (``"out"``), target (``"in"``)
    or either endpoint (``"any"``) lies in the set. Each edge counts once.
    """
    nodes = set(node_set)
    total = graph.total_weight()
    if total <= 0:
        raise DomainError("moderated share is undefined for a graph with zero total weight")
    if direction == "any":
        hit = lambda s, t: s in nodes or t in nodes  # noqa: E731
    elif direction == "out":
        hit = lambda s, t: s in nodes  # noqa: E731
    elif direction == "in":
        hit = lambda s, t: t in nodes  # noqa: E731
    else:
        raise DomainError(f"direction must be 'any', 'out' or 'in', got {direction!r}")
    return sum(w for s, t, w in graph.edges() if hit(s, t)) / total


def share_breakdown(graph: DirectedGraph, node_set: Iterable[int]) -> dict:
    nodes = set(node_set)
    return {d: moderated_share(graph, nodes, d) for d in ("any", "out", "in")}
