"""Edge overlap and flow coverage between the hyperlink and clickstream graphs."""

from __future__ import annotations

from dataclasses import asdict, dataclass

from .core import DomainError, DualGraph, StructuralError


@dataclass(frozen=True)
class MismatchReport:
    overlap_count: int
    hyperlink_count: int
    clickstream_count: int
    jaccard: float
    flow_coverage: float

    def to_json(self) -> dict:
        return asdict(self)


def _check(dual: DualGraph):
    n = len(dual.registry)
    if dual.hyperlink.node_count != n or dual.clickstream.node_count != n:
        raise StructuralError("hyperlink and clickstream graphs do not share the registry")


def _covered(edge, other, directed: bool) -> bool:
    s, t = edge
    return edge in other or (not directed and (t, s) in other)


def overlap_count(dual: DualGraph, directed: bool = True) -> int:
    """Number of hyperlinks that also appear as clickstreams.

    With ``directed=False`` a hyperlink counts when a clickstream joins the
    same pair in either direction.
    """
    _check(dual)
    clicks = dual.clickstream
    return sum(1 for s, t, _ in dual.hyperlink.edges() if _covered((s, t), clicks, directed))


def flow_coverage(dual: DualGraph, directed: bool = True) -> float:
    """Share of total clickstream weight carried on pairs that are also hyperlinked."""
    _check(dual)
    total = 0.0
    covered = 0.0
    links = dual.hyperlink
    for s, t, w in dual.clickstream.edges():
        total += w
        if _covered((s, t), links, directed):
            covered += w
    if total <= 0:
        raise DomainError("flow coverage is undefined for a clickstream graph with zero total weight")
    return covered / total


def edge_overlap(dual: DualGraph, directed: bool = True) -> MismatchReport:
    """Overlap counts, Jaccard index of the two edge sets and flow coverage.

    ``flow_coverage`` is NaN when the clickstream graph carries no weight.
    """
    overlap = overlap_count(dual, directed)
    h = dual.hyperlink.edge_count
    c = dual.clickstream.edge_count
    if directed:
        shared, union = overlap, h + c - overlap
    else:
        hu = {frozenset(e) for e in dual.hyperlink.edge_set()}
        cu = {frozenset(e) for e in dual.clickstream.edge_set()}
        shared, union = len(hu & cu), len(hu | cu)
    try:
        coverage = flow_coverage(dual, directed)
    except DomainError:
        coverage = float("nan")
    return MismatchReport(
        overlap_count=overlap,
        hyperlink_count=h,
        clickstream_count=c,
        jaccard=shared / union if union else 1.0,
        flow_coverage=coverage,
    )
