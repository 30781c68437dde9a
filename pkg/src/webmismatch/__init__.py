"""Measure how far a clickstream network departs from the hyperlink network over the same websites."""

from .core import (
    ConfigurationError,
    DirectedGraph,
    DomainError,
    DualGraph,
    GraphError,
    ParseError,
    StructuralError,
    ValidationError,
    WebsiteRecord,
    build_graph,
)

__all__ = [
    "ConfigurationError",
    "DirectedGraph",
    "DomainError",
    "DualGraph",
    "GraphError",
    "ParseError",
    "StructuralError",
    "ValidationError",
    "WebsiteRecord",
    "build_graph",
]

__version__ = "0.1.0"
