"""End-to-end analysis run: ingest or synthesise, then measure and report."""

from __future__ import annotations

import csv
import io as _stdio
import json
import logging
import os
import tempfile
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional

from . import centrality, community, mismatch, pathway, stats, synth
from .core import ConfigurationError, DomainError, DualGraph, build_graph
from .io import EdgeListSchema, apply_topk_censoring, parse_edge_list, parse_node_metadata

log = logging.getLogger(__name__)

REPORT_SCHEMA_VERSION = 1


class PipelineError(Exception):
    def __init__(self, stage: str, cause: BaseException):
        self.stage = stage
        self.cause = cause
        super().__init__(f"stage '{stage}' failed: {cause}")


@dataclass
class RunConfig:
    """Inputs and analysis switches for one run.

    Exactly one of the file inputs (``nodes`` plus both edge files) or
    ``synth`` must be given. ``seed`` drives label propagation and, when set,
    replaces the synth spec's own seed; unset means 0 for label propagation.
    """

    nodes: Optional[str] = None
    clickstream: Optional[str] = None
    hyperlink: Optional[str] = None
    synth: Optional[str] = None
    seed: Optional[int] = None
    out_dir: str = "out"
    delimiter: str = ","
    click_k_out: Optional[int] = None
    click_k_in: Optional[int] = None
    link_k_out: Optional[int] = None
    censor_mode: str = "or"
    vote_weighting: str = "auto"
    neighborhood: str = "both"
    max_iterations: int = 100
    closeness_variant: str = "classic"
    closeness_mode: str = "out"
    weighted_centrality: bool = False
    directed_overlap: bool = True
    low_degree_as_zero: bool = False
    top_k: int = 5
    steps: int = 4

    def validate(self):
        files = [self.nodes, self.clickstream, self.hyperlink]
        if self.synth is not None and any(files):
            raise ConfigurationError("give either input files or a synth spec, not both")
        if self.synth is None and not all(files):
            raise ConfigurationError("need --nodes, --clickstream and --hyperlink, or --synth")
        if self.vote_weighting not in ("auto", "weighted", "unweighted"):
            raise ConfigurationError("vote_weighting must be auto, weighted or unweighted")
        return self

    def to_json(self) -> dict:
        return asdict(self)

    @classmethod
    def from_json(cls, obj: dict) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        unknown = set(obj) - known
        if unknown:
            raise ConfigurationError(f"unknown config keys: {sorted(unknown)}")
        return cls(**obj)


@dataclass
class LoadedInput:
    dual: DualGraph
    truth: Optional[tuple] = None
    hubs: tuple = ()
    skipped: dict = None
    dropped_self_loops: dict = None


def _stage(name):
    def wrap(fn):
        def run(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except PipelineError:
                raise
            except Exception as exc:
                raise PipelineError(name, exc) from exc
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _read(path):
    with open(path, encoding="utf-8", newline="") as fh:
        return fh.read()


@_stage("ingest")
def load_input(config: RunConfig) -> LoadedInput:
    """Read files or generate the synthetic dual network, then apply censoring."""
    config.validate()
    if config.synth is not None:
        res = synth.generate_dual(synth.load_synth_config(config.synth), seed=config.seed)
        dual, truth, hubs = res.dual, res.truth, res.hubs
        skipped = {"clickstream": 0, "hyperlink": 0}
        loops = {"clickstream": 0, "hyperlink": 0}
    else:
        schema = EdgeListSchema(delimiter=config.delimiter)
        registry = parse_node_metadata(_read(config.nodes), schema)
        clicks = parse_edge_list(_read(config.clickstream), schema, registry, weighted=True)
        links = parse_edge_list(_read(config.hyperlink), EdgeListSchema(config.delimiter, True, None),
                                registry, weighted=False)
        cg = build_graph(len(registry), clicks.records, weighted=True)
        hg = build_graph(len(registry), links.records, weighted=False)
        dual, truth, hubs = DualGraph(registry, cg, hg), None, ()
        skipped = {"clickstream": len({ln for ln, _ in clicks.skipped}),
                   "hyperlink": len({ln for ln, _ in links.skipped})}
        loops = {"clickstream": cg.dropped_self_loops, "hyperlink": hg.dropped_self_loops}
    if config.click_k_out or config.click_k_in or config.link_k_out:
        dual = DualGraph(
            dual.registry,
            apply_topk_censoring(dual.clickstream, config.click_k_out, config.click_k_in, config.censor_mode),
            apply_topk_censoring(dual.hyperlink, config.link_k_out, None, config.censor_mode),
        )
    return LoadedInput(dual, truth, hubs, skipped, loops)


@_stage("stats")
def network_statistics(dual: DualGraph, config: RunConfig) -> dict:
    return {
        "hyperlink": stats.summarize(dual.hyperlink, config.low_degree_as_zero).to_json(),
        "clickstream": stats.summarize(dual.clickstream, config.low_degree_as_zero).to_json(),
    }


@_stage("mismatch")
def mismatch_report(dual: DualGraph, config: RunConfig) -> dict:
    return mismatch.edge_overlap(dual, directed=config.directed_overlap).to_json()


def _votes(config: RunConfig, graph) -> Optional[bool]:
    if config.vote_weighting == "auto":
        return graph.weighted
    return config.vote_weighting == "weighted"


@_stage("communities")
def detect_communities(dual: DualGraph, config: RunConfig, which: str = "clickstream"):
    graph = getattr(dual, which)
    seed = 0 if config.seed is None else config.seed
    return community.label_propagation(graph, seed=seed, weighted_votes=_votes(config, graph),
                                       max_iterations=config.max_iterations, neighborhood=config.neighborhood)


def communities_json(dual, assignment, truth=None) -> dict:
    graph = dual.clickstream
    out = assignment.to_json()
    out["summary"] = community.community_summary(graph, assignment).to_json()
    majority = community.majority_languages(assignment, dual.registry)
    for row in out["summary"]["communities"]:
        row["language"] = majority.get(row["community"])
    try:
        out["purity"] = community.label_purity(assignment, dual.registry)
    except DomainError:
        out["purity"] = None
    out["certificate"] = community.is_label_equilibrium(graph, assignment.labels, assignment.weighted_votes,
                                                        assignment.neighborhood)
    if truth is not None:
        out["planted_accuracy"] = community.partition_accuracy(assignment.labels, truth)
    return out


@_stage("centrality")
def community_centrality(dual: DualGraph, assignment, config: RunConfig):
    return centrality.top_nodes_per_community(
        dual.clickstream, assignment, dual.registry, k=config.top_k, closeness_mode=config.closeness_mode,
        closeness_variant=config.closeness_variant, weighted=config.weighted_centrality)


@_stage("pathways")
def community_pathways(dual: DualGraph, assignment, config: RunConfig):
    return pathway.pathway_per_community(dual.clickstream, assignment, dual.registry, config.steps)


def assignment_csv(dual: DualGraph, assignment) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["domain", "community", "language"])
    for v, c in enumerate(assignment.labels):
        rec = dual.registry[v]
        w.writerow([rec.domain, c, rec.language or ""])
    return buf.getvalue()


def centrality_csv(dual: DualGraph, results) -> str:
    buf = _stdio.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["domain", "community", "in_degree", "out_degree", "betweenness", "closeness"])
    for res in results:
        sc = res.scores
        for v in sorted(sc["degree"]):
            w.writerow([dual.registry[v].domain, res.community, sc["in_degree"][v], sc["out_degree"][v],
                        repr(sc["betweenness"][v]), repr(sc["closeness"][v])])
    return buf.getvalue()


def pathways_dot(dual: DualGraph, traces) -> str:
    return "".join(t.to_dot(dual.registry, name=f"community_{t.community}") for t in traces)


def run_pipeline(config: RunConfig) -> tuple:
    """Run every stage in order.

    Returns
    -------
    (dict, dict)
        The analysis report and the CSV/DOT side outputs keyed by file name.
    """
    loaded = load_input(config)
    dual = loaded.dual
    table1 = network_statistics(dual, config)
    mm = mismatch_report(dual, config)
    click_comm = detect_communities(dual, config, "clickstream")
    link_comm = detect_communities(dual, config, "hyperlink")
    cent = community_centrality(dual, click_comm, config)
    traces = community_pathways(dual, click_comm, config)

    engines = sorted({v for res in cent for v in res.triple_top})
    share = pathway.share_breakdown(dual.clickstream, engines)
    report = {
        "schema_version": REPORT_SCHEMA_VERSION,
        "config": config.to_json(),
        "input": {
            "nodes": dual.node_count,
            "skipped_edge_rows": loaded.skipped,
            "dropped_self_loops": loaded.dropped_self_loops,
        },
        "network_statistics": table1,
        "mismatch": mm,
        "communities": {
            "clickstream": communities_json(dual, click_comm, loaded.truth),
            "hyperlink": link_comm.to_json(),
        },
        "centrality": [res.to_json(dual.registry) for res in cent],
        "pathways": [t.to_json(dual.registry) for t in traces],
        "moderated_share": {
            "nodes": [dual.registry[v].domain for v in engines],
            "share": share["any"],
            "outbound_share": share["out"],
            "inbound_share": share["in"],
            "hyperlink_flow_coverage": mm["flow_coverage"],
        },
    }
    if loaded.truth is not None:
        report["planted"] = {"hubs": [dual.registry[h].domain for h in loaded.hubs]}
    sides = {
        "assignment.csv": assignment_csv(dual, click_comm),
        "centrality.csv": centrality_csv(dual, cent),
        "pathways.dot": pathways_dot(dual, traces),
    }
    return report, sides


def dump_json(obj) -> str:
    return json.dumps(obj, indent=2, allow_nan=True) + "\n"


def write_outputs(out_dir, files: dict):
    """Write all files or none: each goes to a temp file first, then is renamed."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    staged = []
    try:
        for name, text in files.items():
            fd, tmp = tempfile.mkstemp(dir=out, prefix=f".{name}.")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, out / name))
    except BaseException:
        for tmp, _ in staged:
            os.unlink(tmp)
        raise
    for tmp, dest in staged:
        os.replace(tmp, dest)
    return [dest for _, dest in staged]
