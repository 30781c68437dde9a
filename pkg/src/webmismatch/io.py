"""File ingestion, top-K censoring and export of graphs."""

from __future__ import annotations

import csv
import io as _stdio
import logging
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Sequence, TextIO, Union

from .core import (
    ConfigurationError,
    DirectedGraph,
    ParseError,
    StructuralError,
    ValidationError,
    WebsiteRecord,
    registry_index,
)

log = logging.getLogger(__name__)

EXPORT_FORMATS = ("edge-csv", "graphml", "dot")


@dataclass(frozen=True)
class EdgeListSchema:
    delimiter: str = ","
    has_header: bool = True
    weight_column: Optional[int] = 2

    def __post_init__(self):
        if len(self.delimiter) != 1 or not self.delimiter.isprintable():
            raise ConfigurationError(f"delimiter must be one printable character, got {self.delimiter!r}")
        if self.weight_column is not None and self.weight_column < 2:
            raise ConfigurationError("weight_column must come after the source and target columns")


@dataclass
class ParsedEdges:
    """Edge records resolved against a registry.

    ``skipped`` holds ``(line_number, domain)`` for every row dropped because
    a domain is not in the registry.
    """

    records: List[tuple] = field(default_factory=list)
    skipped: List[tuple] = field(default_factory=list)

    def __iter__(self):
        return iter(self.records)

    def __len__(self):
        return len(self.records)


def _as_stream(text: Union[str, TextIO]) -> TextIO:
    return _stdio.StringIO(text) if isinstance(text, str) else text


def _rows(text, schema: EdgeListSchema):
    reader = csv.reader(_as_stream(text), delimiter=schema.delimiter)
    header = None
    for lineno, row in enumerate(reader, start=1):
        if not row or all(not c.strip() for c in row):
            continue
        if schema.has_header and header is None:
            header = [c.strip() for c in row]
            continue
        yield lineno, [c.strip() for c in row]


def parse_node_metadata(text: Union[str, TextIO], schema: EdgeListSchema = EdgeListSchema()) -> List[WebsiteRecord]:
    """Parse ``domain,traffic,language[,category]`` rows into website records."""
    records = []
    seen = {}
    dupes = []
    for lineno, row in _rows(text, schema):
        if len(row) < 2:
            raise ParseError(f"expected at least domain and traffic, got {row!r}", lineno)
        domain = row[0].lower()
        if not domain:
            raise ParseError("empty domain", lineno)
        try:
            traffic = float(row[1])
        except ValueError:
            raise ParseError(f"malformed traffic value {row[1]!r}", lineno) from None
        if not traffic >= 0:
            raise ParseError(f"traffic must be non-negative, got {row[1]!r}", lineno)
        language = row[2] or None if len(row) > 2 else None
        category = row[3] or None if len(row) > 3 else None
        if domain in seen:
            dupes.append(domain)
        seen[domain] = lineno
        records.append(WebsiteRecord(domain, traffic, language, category))
    if dupes:
        raise ValidationError(f"duplicate domains: {sorted(set(dupes))}")
    return records


def parse_edge_list(text: Union[str, TextIO], schema: EdgeListSchema, registry: Sequence[WebsiteRecord],
                    weighted: bool = True) -> ParsedEdges:
    """Resolve ``source,target[,weight]`` rows to node ids.

    Rows naming a domain missing from ``registry`` are skipped and reported in
    :attr:`ParsedEdges.skipped`. Unweighted parses assign weight 1.0.
    """
    if not registry:
        raise ConfigurationError("registry must be non-empty")
    if weighted and schema.weight_column is None:
        raise ConfigurationError("weighted parse requires a weight column")
    index = registry_index(registry)
    out = ParsedEdges()
    stream = _as_stream(text)
    reader = csv.reader(stream, delimiter=schema.delimiter)
    header_seen = not schema.has_header
    for lineno, row in enumerate(reader, start=1):
        row = [c.strip() for c in row]
        if not row or not any(row):
            continue
        if not header_seen:
            header_seen = True
            if weighted and len(row) <= schema.weight_column:
                raise ConfigurationError(
                    f"weight column {schema.weight_column} missing from header {row!r}")
            continue
        if len(row) < 2:
            raise ParseError(f"expected source and target, got {row!r}", lineno)
        if weighted:
            if len(row) <= schema.weight_column:
                raise ConfigurationError(f"line {lineno}: weight column {schema.weight_column} missing")
            try:
                w = float(row[schema.weight_column])
            except ValueError:
                raise ParseError(f"malformed weight {row[schema.weight_column]!r}", lineno) from None
        else:
            w = 1.0
        src, dst = row[0].lower(), row[1].lower()
        missing = [d for d in (src, dst) if d not in index]
        if missing:
            out.skipped.extend((lineno, d) for d in missing)
            continue
        out.records.append((index[src], index[dst], w))
    if out.skipped:
        log.info("skipped %d edge rows naming unknown domains", len({ln for ln, _ in out.skipped}))
    return out


def _top(candidates: list, k: int) -> list:
    # candidates: (weight, counterpart, edge); strongest first, ties by smaller counterpart
    candidates.sort(key=lambda c: (-c[0], c[1]))
    return [c[2] for c in candidates[:k]]


def apply_topk_censoring(graph: DirectedGraph, k_out: Optional[int] = None, k_in: Optional[int] = None,
                         mode: str = "or") -> DirectedGraph:
    """Keep only each node's strongest edges, as a data provider with list limits would.

    Parameters
    ----------
    k_out, k_in : int, optional
        Per-node limits on outbound / inbound edges. ``None`` disables a filter.
    mode : {"or", "and"}
        With both limits set, whether an edge must survive either filter or both.
    """
    for name, k in (("k_out", k_out), ("k_in", k_in)):
        if k is not None and k < 1:
            raise ConfigurationError(f"{name} must be >= 1, got {k}")
    if mode not in ("or", "and"):
        raise ConfigurationError(f"mode must be 'or' or 'and', got {mode!r}")
    if k_out is None and k_in is None:
        return graph

    out_keep = set()
    in_keep = set()
    for v in range(graph.node_count):
        if k_out is not None:
            out_keep.update(_top([(graph.weight(v, t), t, (v, t)) for t in graph.successors(v)], k_out))
        if k_in is not None:
            in_keep.update(_top([(graph.weight(s, v), s, (s, v)) for s in graph.predecessors(v)], k_in))

    if k_in is None:
        keep = out_keep
    elif k_out is None:
        keep = in_keep
    elif mode == "or":
        keep = out_keep | in_keep
    else:
        keep = out_keep & in_keep
    weights = {(s, t): w for s, t, w in graph.edges() if (s, t) in keep}
    return DirectedGraph(graph.node_count, weights, graph.weighted)


def export_graph(graph: DirectedGraph, registry: Sequence[WebsiteRecord], format: str = "edge-csv") -> str:
    """Serialize ``graph`` with domains from ``registry``; output is deterministic."""
    if format not in EXPORT_FORMATS:
        raise ConfigurationError(f"unknown export format {format!r}; choose from {EXPORT_FORMATS}")
    if len(registry) != graph.node_count:
        raise StructuralError(f"registry has {len(registry)} entries for a {graph.node_count}-node graph")
    if format == "edge-csv":
        return _export_csv(graph, registry)
    if format == "graphml":
        return _export_graphml(graph, registry)
    return _export_dot(graph, registry)


def _export_csv(graph, registry):
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["source", "target", "weight"])
    for s, t, w in graph.edges():
        writer.writerow([registry[s].domain, registry[t].domain, repr(w)])
    return buf.getvalue()


def _export_graphml(graph, registry):
    ns = "http://graphml.graphdrawing.org/xmlns"
    root = ET.Element("graphml", xmlns=ns)
    for key, target, name, typ in (("d0", "node", "domain", "string"),
                                   ("d1", "node", "traffic", "double"),
                                   ("d2", "node", "language", "string"),
                                   ("d3", "edge", "weight", "double")):
        ET.SubElement(root, "key", {"id": key, "for": target, "attr.name": name, "attr.type": typ})
    g = ET.SubElement(root, "graph", id="G", edgedefault="directed")
    for i, rec in enumerate(registry):
        node = ET.SubElement(g, "node", id=f"n{i}")
        ET.SubElement(node, "data", key="d0").text = rec.domain
        ET.SubElement(node, "data", key="d1").text = repr(float(rec.traffic))
        ET.SubElement(node, "data", key="d2").text = rec.language or ""
    for s, t, w in graph.edges():
        edge = ET.SubElement(g, "edge", source=f"n{s}", target=f"n{t}")
        ET.SubElement(edge, "data", key="d3").text = repr(w)
    ET.indent(root)
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding="unicode") + "\n"


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _export_dot(graph, registry, name="G"):
    lines = [f"digraph {name} {{"]
    for i, rec in enumerate(registry):
        lines.append(f"  n{i} [label={_dot_quote(rec.domain)}, traffic={repr(float(rec.traffic))}, "
                     f"language={_dot_quote(rec.language or '')}];")
    for s, t, w in graph.edges():
        lines.append(f"  n{s} -> n{t} [weight={repr(w)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_node_metadata(registry: Iterable[WebsiteRecord]) -> str:
    buf = _stdio.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["domain", "traffic", "language", "category"])
    for rec in registry:
        writer.writerow([rec.domain, repr(float(rec.traffic)), rec.language or "", rec.category or ""])
    return buf.getvalue()
