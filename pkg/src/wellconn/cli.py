"""Command-line front end.

Five subcommands cover the pipeline end to end: ``cluster`` computes a
clustering, ``profile`` reports connectivity per cluster, ``cm`` runs the
full four-stage remediation pipeline, ``eval`` compares two clusterings,
and ``lfr-params`` estimates benchmark-generator parameters.

All reports are JSON with sorted keys and no timestamps, so identical
inputs, flags, and seed produce byte-identical output. Data artifacts
(clusterings, scatter points) are tab-separated files next to the JSON.
Exit codes: 2 for unreadable or malformed input files, 3 for bad
configuration, 4 for node labels that do not exist in the graph.
"""

from __future__ import annotations

import functools
import json
import logging
import os
import sys
from collections import Counter

import click

from . import __version__
from .clusterers import ClustererConfig, make_clustering
from .clustering import Clustering, load_clustering, node_coverage, save_clustering
from .errors import (
    DegenerateDistributionError,
    FormatError,
    InvalidArgumentError,
    ParseError,
    SampleSizeError,
    UnknownLabelError,
    WellconnError,
)
from .graph import Graph, load_edge_list
from .lfr import estimate_params
from .metrics import ami, ari, nmi
from .pipeline import CMParams, run_pipeline
from .profiles import profile_clustering
from .thresholds import LOG2, LOG10, SQRT_DIV5, ThresholdFn, custom, linear

EXIT_IO = 2
EXIT_CONFIG = 3
EXIT_DATA = 4

# Preset sweep used throughout the experiments; see `cluster --resolution-sweep`.
RESOLUTION_SWEEP = (0.5, 0.1, 0.01, 0.001, 0.0001)

FATE_NAMES = ("extant", "reduced", "split", "degraded")

log = logging.getLogger("wellconn")


def _fail(code: int, err: Exception) -> None:
    click.echo(f"error: {err}", err=True)
    sys.exit(code)


def handles_errors(fn):
    """Map library exceptions onto the documented exit codes."""

    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (ParseError, FormatError, OSError) as e:
            _fail(EXIT_IO, e)
        except (InvalidArgumentError, DegenerateDistributionError, SampleSizeError) as e:
            _fail(EXIT_CONFIG, e)
        except UnknownLabelError as e:
            _fail(EXIT_DATA, e)
        except WellconnError as e:
            _fail(1, e)

    return wrapper


def threshold_options(fn):
    """Shared --threshold flag family (profile and cm)."""
    opts = [
        click.option(
            "--threshold",
            "threshold_kind",
            type=click.Choice(["log10", "log2", "sqrt_div5", "traag", "custom"]),
            default="log10",
            show_default=True,
            help="connectivity threshold t(n); a cluster is well connected iff mincut > t(n)",
        ),
        click.option(
            "--r",
            "threshold_r",
            type=float,
            default=0.01,
            show_default=True,
            help="slope for --threshold traag: t(n) = r*(n-1)",
        ),
        click.option("--a", "threshold_a", type=float, default=0.0, show_default=True,
                     help="linear coefficient for --threshold custom: t(n) = a*n + b*log10(n) + c"),
        click.option("--b-coef", "threshold_b", type=float, default=0.0, show_default=True,
                     help="log coefficient for --threshold custom"),
        click.option("--c", "threshold_c", type=float, default=0.0, show_default=True,
                     help="constant term for --threshold custom"),
    ]
    for opt in reversed(opts):
        fn = opt(fn)
    return fn


def _resolve_threshold(kind: str, r: float, a: float, b: float, c: float) -> ThresholdFn:
    if kind == "log10":
        return LOG10
    if kind == "log2":
        return LOG2
    if kind == "sqrt_div5":
        return SQRT_DIV5
    if kind == "traag":
        return linear(r)
    return custom(a, b, c)


def _resolve_threads(threads: int | None) -> int:
    if threads is None:
        return os.cpu_count() or 1
    if threads < 1:
        raise InvalidArgumentError("--threads must be at least 1")
    return threads


def _load_graph(path: str) -> Graph:
    g = load_edge_list(path)
    log.info("graph %s: %d nodes, %d edges", path, g.node_count, g.edge_count)
    return g


def _emit(report: dict, path: str | None) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n"
    if path is not None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    click.echo(text, nl=False)


def _size_histogram(c: Clustering) -> list[list[int]]:
    counts = Counter(len(members) for members in c.clusters.values())
    return [[size, counts[size]] for size in sorted(counts)]


def _summarize(c: Clustering, total: int) -> dict:
    return {
        "n_clusters": c.n_clusters,
        "size_histogram": _size_histogram(c),
        "coverage": {
            "ge2": node_coverage(c, total, 2),
            "ge11": node_coverage(c, total, 11),
        },
    }


@click.group()
@click.version_option(__version__, prog_name="wellconn")
def main():
    """Detect and repair poorly connected clusters in graph clusterings.

    Graphs are tab-separated edge lists (one "u<TAB>v" per line, `#`
    comments allowed); clusterings are "node<TAB>cluster" lines, with
    unmentioned nodes treated as singletons. Set WELLCONN_LOG_LEVEL
    (DEBUG, INFO, WARNING, ERROR) to change log verbosity on stderr.
    """
    level = os.environ.get("WELLCONN_LOG_LEVEL", "WARNING").upper()
    logging.basicConfig(
        level=getattr(logging, level, logging.WARNING),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )


@main.command("cluster")
@click.option("--graph", "graph_path", required=True, help="edge-list TSV to cluster")
@click.option("--clusterer", type=click.Choice(["cpm", "modularity", "ikc"]),
              default="cpm", show_default=True)
@click.option("--resolution", type=float, default=None,
              help="CPM resolution parameter [default: 0.01]")
@click.option("--k", type=int, default=10, show_default=True, help="IKC core threshold")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--resolution-sweep", is_flag=True,
              help="run CPM at each preset resolution (0.5, 0.1, 0.01, 0.001, 0.0001)")
@click.option("--out-prefix", required=True,
              help="output prefix; writes <prefix>.clustering.tsv and <prefix>.summary.json")
@handles_errors
def cmd_cluster(graph_path, clusterer, resolution, k, seed, resolution_sweep, out_prefix):
    """Compute a clustering and write it with a summary report."""
    if resolution_sweep and clusterer != "cpm":
        raise InvalidArgumentError("--resolution-sweep requires --clusterer cpm")
    if resolution_sweep and resolution is not None:
        raise InvalidArgumentError("--resolution-sweep and --resolution are mutually exclusive")
    if resolution is not None and clusterer != "cpm":
        raise InvalidArgumentError(f"--resolution does not apply to {clusterer}")

    if resolution_sweep:
        res_list: list[float | None] = list(RESOLUTION_SWEEP)
    elif clusterer == "cpm":
        res_list = [0.01 if resolution is None else resolution]
    else:
        res_list = [None]

    g = _load_graph(graph_path)
    runs = []
    for res in res_list:
        cfg = ClustererConfig(
            kind=clusterer,
            resolution=0.01 if res is None else res,
            k=k,
            seed=seed,
        )
        c = make_clustering(g, cfg)
        if len(res_list) > 1:
            path = f"{out_prefix}.r{res:g}.clustering.tsv"
        else:
            path = f"{out_prefix}.clustering.tsv"
        save_clustering(c, path)
        run = {"clusterer": cfg.describe(), "clustering_path": path}
        run.update(_summarize(c, g.node_count))
        runs.append(run)
        log.info("%s: %d clusters", cfg.describe(), c.n_clusters)

    report = {
        "schema_version": 1,
        "version": __version__,
        "config": {
            "subcommand": "cluster",
            "graph": graph_path,
            "clusterer": clusterer,
            "resolution": None if clusterer != "cpm" else res_list[0],
            "resolution_sweep": resolution_sweep,
            "k": k,
            "seed": seed,
            "out_prefix": out_prefix,
        },
        "n_nodes": g.node_count,
        "n_edges": g.edge_count,
        "runs": runs,
    }
    if resolution_sweep:
        report["config"]["resolutions"] = list(RESOLUTION_SWEEP)
        report["config"]["resolution"] = None
    _emit(report, f"{out_prefix}.summary.json")


@main.command("profile")
@click.option("--graph", "graph_path", required=True)
@click.option("--clustering", "clustering_path", required=True,
              help="clustering TSV; external tool output accepted")
@threshold_options
@click.option("--min-size", type=int, default=11, show_default=True,
              help="cluster size floor for the node-coverage figure")
@click.option("--threads", type=int, default=None,
              help="parallel min-cut workers [default: available cores]")
@click.option("--out-prefix", required=True,
              help="writes <prefix>.profile.json and <prefix>.scatter.tsv")
@handles_errors
def cmd_profile(graph_path, clustering_path, threshold_kind, threshold_r, threshold_a,
                threshold_b, threshold_c, min_size, threads, out_prefix):
    """Report size, min cut, and connectivity status for every cluster."""
    t = _resolve_threshold(threshold_kind, threshold_r, threshold_a, threshold_b, threshold_c)
    n_threads = _resolve_threads(threads)
    g = _load_graph(graph_path)
    c = load_clustering(clustering_path, g)
    rep = profile_clustering(g, c, t, min_size=min_size, threads=n_threads)

    scatter_path = f"{out_prefix}.scatter.tsv"
    with open(scatter_path, "w", encoding="utf-8") as fh:
        fh.write("n\tmincut\n")
        for size, mc in rep.scatter_rows():
            fh.write(f"{size}\t{mc}\n")

    report = {
        "schema_version": 1,
        "version": __version__,
        "config": {
            "subcommand": "profile",
            "graph": graph_path,
            "clustering": clustering_path,
            "threshold": t.describe(),
            "min_size": min_size,
            "threads": n_threads,
            "out_prefix": out_prefix,
        },
        "scatter_path": scatter_path,
    }
    report.update(rep.to_dict())
    _emit(report, f"{out_prefix}.profile.json")


@main.command("cm")
@click.option("--graph", "graph_path", required=True)
@click.option("--clustering", "clustering_path", default=None,
              help="existing clustering TSV; when omitted, stage 1 runs --clusterer")
@click.option("--clusterer", type=click.Choice(["cpm", "modularity", "ikc"]),
              default="cpm", show_default=True,
              help="clustering algorithm for stage 1 and for reclustering cut pieces")
@click.option("--resolution", type=float, default=0.01, show_default=True)
@click.option("--k", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--b", "b_min", type=int, default=11, show_default=True,
              help="minimum cluster size kept by the filter stages")
@threshold_options
@click.option("--max-depth", type=int, default=None,
              help="abort a cluster's cut/recluster recursion past this depth")
@click.option("--threads", type=int, default=None,
              help="stage-3 worker pool size [default: available cores]")
@click.option("--out-prefix", required=True,
              help="writes <prefix>.clustering.tsv and <prefix>.cm.json")
@handles_errors
def cmd_cm(graph_path, clustering_path, clusterer, resolution, k, seed, b_min,
           threshold_kind, threshold_r, threshold_a, threshold_b, threshold_c,
           max_depth, threads, out_prefix):
    """Run the four-stage pipeline: cluster, filter, repair connectivity, filter."""
    t = _resolve_threshold(threshold_kind, threshold_r, threshold_a, threshold_b, threshold_c)
    cfg = ClustererConfig(kind=clusterer, resolution=resolution, k=k, seed=seed)
    params = CMParams(clusterer=cfg, B=b_min, threshold=t, max_recursion_depth=max_depth)
    n_threads = _resolve_threads(threads)

    g = _load_graph(graph_path)
    input_c = load_clustering(clustering_path, g) if clustering_path else None
    rep = run_pipeline(g, params, input_clustering=input_c, threads=n_threads)

    out_path = f"{out_prefix}.clustering.tsv"
    save_clustering(rep.output, out_path)

    fate_counts = {name: 0 for name in FATE_NAMES}
    for fate in rep.fates.values():
        fate_counts[fate] += 1

    report = {
        "schema_version": 1,
        "version": __version__,
        "config": {
            "subcommand": "cm",
            "graph": graph_path,
            "clustering": clustering_path,
            "clusterer": cfg.describe(),
            "b": b_min,
            "threshold": t.describe(),
            "max_depth": max_depth,
            "seed": seed,
            "threads": n_threads,
            "out_prefix": out_prefix,
        },
        "stages": list(rep.stages),
        "fates": rep.fates,
        "fate_counts": fate_counts,
        "removed_at_filter": sorted(rep.removed_at_filter),
        "coverage": rep.coverage,
        "recursion": rep.recursion,
        "output_clustering_path": out_path,
    }
    _emit(report, f"{out_prefix}.cm.json")


@main.command("eval")
@click.option("--graph", "graph_path", required=True,
              help="edge-list TSV defining the node universe")
@click.option("--truth", "truth_path", required=True, help="reference clustering TSV")
@click.option("--pred", "pred_path", required=True, help="clustering TSV to score")
@click.option("--out-prefix", default=None, help="also write <prefix>.eval.json")
@handles_errors
def cmd_eval(graph_path, truth_path, pred_path, out_prefix):
    """Score a clustering against a reference with NMI, AMI, and ARI.

    Nodes absent from either file count as singletons, so a clustering
    that dropped nodes is scored on the full graph universe.
    """
    g = _load_graph(graph_path)
    ct = load_clustering(truth_path, g)
    cp = load_clustering(pred_path, g)
    report = {
        "schema_version": 1,
        "version": __version__,
        "config": {
            "subcommand": "eval",
            "graph": graph_path,
            "truth": truth_path,
            "pred": pred_path,
            "out_prefix": out_prefix,
        },
        "nmi": nmi(ct, cp),
        "ami": ami(ct, cp),
        "ari": ari(ct, cp),
        "n_nodes": g.node_count,
        "normalization": "arithmetic",
    }
    _emit(report, f"{out_prefix}.eval.json" if out_prefix else None)


@main.command("lfr-params")
@click.option("--graph", "graph_path", required=True)
@click.option("--clustering", "clustering_path", required=True)
@click.option("--out-prefix", default=None, help="also write <prefix>.lfr.json")
@handles_errors
def cmd_lfr_params(graph_path, clustering_path, out_prefix):
    """Estimate benchmark-generator parameters from a clustered graph."""
    g = _load_graph(graph_path)
    c = load_clustering(clustering_path, g)
    p = estimate_params(g, c)
    report = {
        "schema_version": 1,
        "version": __version__,
        "config": {
            "subcommand": "lfr-params",
            "graph": graph_path,
            "clustering": clustering_path,
            "out_prefix": out_prefix,
        },
        "params": p.to_dict(),
    }
    _emit(report, f"{out_prefix}.lfr.json" if out_prefix else None)
