"""Command-line interface.

Usage::

    webmismatch synth --config spec.json --out-dir data/
    webmismatch report --nodes data/nodes.csv --clickstream data/clickstream.csv \\
        --hyperlink data/hyperlink.csv --out-dir results/
    webmismatch report --synth spec.json --seed 3 --out-dir results/
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import community, pathway
from .core import GraphError
from .io import EXPORT_FORMATS, export_graph, export_node_metadata
from .pipeline import (
    PipelineError,
    RunConfig,
    assignment_csv,
    centrality_csv,
    communities_json,
    community_centrality,
    community_pathways,
    detect_communities,
    dump_json,
    load_input,
    mismatch_report,
    network_statistics,
    pathways_dot,
    run_pipeline,
    write_outputs,
)
from . import synth

log = logging.getLogger("webmismatch")


def _add_input(p):
    g = p.add_argument_group("input")
    g.add_argument("--nodes", help="node metadata CSV (domain,traffic,language[,category])")
    g.add_argument("--clickstream", help="weighted edge CSV (source,target,weight)")
    g.add_argument("--hyperlink", help="unweighted edge CSV (source,target)")
    g.add_argument("--synth", help="synthetic network spec (JSON) instead of input files")
    g.add_argument("--config", help="run configuration JSON; command-line flags override it")
    g.add_argument("--delimiter", default=None)


def _add_common(p):
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out-dir", default=None)
    p.add_argument("-v", "--verbose", action="store_true")


def _add_analysis(p):
    g = p.add_argument_group("analysis switches")
    g.add_argument("--click-k-out", type=int, default=None, help="keep each site's k strongest outbound clickstreams")
    g.add_argument("--click-k-in", type=int, default=None, help="keep each site's k strongest inbound clickstreams")
    g.add_argument("--link-k-out", type=int, default=None, help="keep at most k outbound hyperlinks per site")
    g.add_argument("--censor-mode", choices=("or", "and"), default=None)
    g.add_argument("--vote-weighting", choices=("auto", "weighted", "unweighted"), default=None)
    g.add_argument("--neighborhood", choices=community.NEIGHBORHOODS, default=None)
    g.add_argument("--max-iterations", type=int, default=None)
    g.add_argument("--closeness", dest="closeness_variant", choices=("classic", "harmonic"), default=None)
    g.add_argument("--closeness-mode", choices=("out", "in"), default=None)
    g.add_argument("--weighted-centrality", action="store_const", const=True, default=None,
                   help="use 1/weight distances for betweenness and closeness")
    g.add_argument("--undirected-overlap", dest="directed_overlap", action="store_const", const=False,
                   default=None)
    g.add_argument("--low-degree-as-zero", action="store_const", const=True, default=None,
                   help="count degree<2 nodes as 0 in average local transitivity")
    g.add_argument("--top-k", type=int, default=None)
    g.add_argument("--steps", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="webmismatch",
        description="Measure the mismatch between a clickstream network and a hyperlink network.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, help_ in (
        ("ingest", "parse, censor and normalise input files"),
        ("stats", "structural statistics of both networks"),
        ("mismatch", "edge overlap and flow coverage"),
        ("communities", "label-propagation communities"),
        ("centrality", "per-community centrality rankings"),
        ("pathways", "popular pathways from each community's top site"),
        ("report", "run the whole pipeline and write report.json"),
        ("export", "export a network as edge CSV, GraphML or DOT"),
    ):
        p = sub.add_parser(name, help=help_)
        _add_input(p)
        _add_common(p)
        _add_analysis(p)
        if name == "communities":
            p.add_argument("--graph", choices=("clickstream", "hyperlink"), default="clickstream")
        if name == "export":
            p.add_argument("--graph", choices=("clickstream", "hyperlink"), default="clickstream")
            p.add_argument("--format", choices=EXPORT_FORMATS, default="edge-csv")
            p.add_argument("--output", "-o", help="file to write; stdout when omitted")

    p = sub.add_parser("synth", help="generate a synthetic dual network and write it as CSV files")
    p.add_argument("--config", dest="synth", required=True, help="synthetic network spec (JSON)")
    _add_common(p)
    return parser


def config_from_args(args) -> RunConfig:
    base = {}
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            base = json.load(fh)
    config = RunConfig.from_json(base)
    for key in vars(config):
        value = getattr(args, key, None)
        if value is not None:
            setattr(config, key, value)
    return config


def _emit(config, files: dict, stdout_key=None):
    written = write_outputs(config.out_dir, files)
    for path in written:
        log.info("wrote %s", path)
    if stdout_key:
        sys.stdout.write(files[stdout_key])


def cmd_synth(args, config):
    cfg = synth.load_synth_config(config.synth)
    res = synth.generate_dual(cfg, seed=config.seed)
    dual = res.dual
    truth = "domain,block\n" + "".join(f"{dual.registry[v].domain},{b}\n" for v, b in enumerate(res.truth))
    _emit(config, {
        "nodes.csv": export_node_metadata(dual.registry),
        "clickstream.csv": export_graph(dual.clickstream, dual.registry),
        "hyperlink.csv": export_graph(dual.hyperlink, dual.registry),
        "truth.csv": truth,
    })
    print(f"{dual.node_count} nodes, {dual.clickstream.edge_count} clickstreams, "
          f"{dual.hyperlink.edge_count} hyperlinks -> {config.out_dir}")


def cmd_ingest(args, config):
    loaded = load_input(config)
    dual = loaded.dual
    summary = {"nodes": dual.node_count, "clickstream_edges": dual.clickstream.edge_count,
               "hyperlink_edges": dual.hyperlink.edge_count, "skipped_edge_rows": loaded.skipped,
               "dropped_self_loops": loaded.dropped_self_loops}
    _emit(config, {
        "nodes.csv": export_node_metadata(dual.registry),
        "clickstream.csv": export_graph(dual.clickstream, dual.registry),
        "hyperlink.csv": export_graph(dual.hyperlink, dual.registry),
        "ingest.json": dump_json(summary),
    }, "ingest.json")


def cmd_stats(args, config):
    dual = load_input(config).dual
    _emit(config, {"stats.json": dump_json(network_statistics(dual, config))}, "stats.json")


def cmd_mismatch(args, config):
    dual = load_input(config).dual
    _emit(config, {"mismatch.json": dump_json(mismatch_report(dual, config))}, "mismatch.json")


def cmd_communities(args, config):
    loaded = load_input(config)
    dual = loaded.dual
    assignment = detect_communities(dual, config, args.graph)
    if args.graph == "clickstream":
        body = communities_json(dual, assignment, loaded.truth)
    else:
        body = assignment.to_json()
    _emit(config, {"assignment.csv": assignment_csv(dual, assignment),
                   "communities.json": dump_json(body)}, "communities.json")


def cmd_centrality(args, config):
    dual = load_input(config).dual
    assignment = detect_communities(dual, config)
    results = community_centrality(dual, assignment, config)
    body = [r.to_json(dual.registry) for r in results]
    _emit(config, {"centrality.csv": centrality_csv(dual, results),
                   "centrality.json": dump_json(body)}, "centrality.json")


def cmd_pathways(args, config):
    dual = load_input(config).dual
    assignment = detect_communities(dual, config)
    traces = community_pathways(dual, assignment, config)
    engines = sorted({t.start for t in traces})
    body = {"pathways": [t.to_json(dual.registry) for t in traces],
            "start_share": pathway.share_breakdown(dual.clickstream, engines)}
    _emit(config, {"pathways.json": dump_json(body), "pathways.dot": pathways_dot(dual, traces)},
          "pathways.json")


def cmd_report(args, config):
    report, sides = run_pipeline(config)
    files = {"report.json": dump_json(report), **sides}
    _emit(config, files)
    t1 = report["network_statistics"]
    mm = report["mismatch"]
    comm = report["communities"]["clickstream"]
    print(f"hyperlinks {t1['hyperlink']['edges']}, clickstreams {t1['clickstream']['edges']}, "
          f"overlap {mm['overlap_count']}, flow coverage {mm['flow_coverage']:.3f}")
    print(f"clickstream communities {comm['communities']} (purity {comm['purity']}), "
          f"hyperlink communities {report['communities']['hyperlink']['communities']}")
    print(f"report written to {Path(config.out_dir) / 'report.json'}")


def cmd_export(args, config):
    dual = load_input(config).dual
    text = export_graph(getattr(dual, args.graph), dual.registry, args.format)
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


COMMANDS = {
    "synth": cmd_synth, "ingest": cmd_ingest, "stats": cmd_stats, "mismatch": cmd_mismatch,
    "communities": cmd_communities, "centrality": cmd_centrality, "pathways": cmd_pathways,
    "report": cmd_report, "export": cmd_export,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = config_from_args(args)
        if args.command != "synth":
            config.validate()
        COMMANDS[args.command](args, config)
    except PipelineError as exc:
        print(f"error: stage '{exc.stage}' failed: {exc.cause}", file=sys.stderr)
        return 1
    except (GraphError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
