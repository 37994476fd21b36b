"""Command-line interface: ``langnet <subcommand> ...``.

Exit status is 0 on success, 1 for invalid input and 2 for I/O failures.
Every input is read and validated before any output file is written.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import community, embedding_store, export, graph, neighbors, netmetrics

EXIT_OK, EXIT_INVALID, EXIT_IO = 0, 1, 2


class CLIError(Exception):
    def __init__(self, message, status=EXIT_INVALID):
        super().__init__(message)
        self.status = status


def _int_list(text: str) -> list[int]:
    """``"2,4,6"`` or an inclusive range ``"2:30"`` (optionally ``"2:30:2"``)."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        if len(parts) not in (2, 3):
            raise argparse.ArgumentTypeError(f"bad range {text!r}")
        step = parts[2] if len(parts) == 3 else 1
        return list(range(parts[0], parts[1] + 1, step))
    return [int(p) for p in text.split(",") if p]


def _float_list(text: str) -> list[float]:
    if ":" in text:
        parts = [float(p) for p in text.split(":")]
        if len(parts) != 3:
            raise argparse.ArgumentTypeError("float ranges need start:stop:step")
        start, stop, step = parts
        count = int(round((stop - start) / step)) + 1
        return [round(start + i * step, 12) for i in range(count)]
    return [float(p) for p in text.split(",") if p]


def _add_common(p, method=True, graph_input=False):
    p.add_argument("--input", type=Path, required=not graph_input, help="embedding text file")
    if graph_input:
        p.add_argument("--graph", type=Path, help="edge list TSV instead of an embedding file")
    p.add_argument("--top", type=int, help="keep only the N most frequent words")
    if method:
        p.add_argument("--method", choices=["knn", "proximity"], default="knn")
        p.add_argument("-k", type=int, help="neighbours per word (knn)")
        p.add_argument("-d", type=float, help="distance threshold (proximity)")
        p.add_argument("--ego", type=int, metavar="N",
                       help="knn only: query the N most frequent words, search all rows")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--louvain-seed", type=int, default=0)
    p.add_argument("--path-sources", type=int, default=netmetrics.DEFAULT_PATH_SOURCES)
    p.add_argument("--jobs", type=int, default=1, help="threads for neighbour search")
    p.add_argument("--out", type=Path, default=Path("."))


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="langnet", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("induce", help="build a graph and write an edge list / GraphML")
    _add_common(p)
    p.add_argument("--format", action="append", choices=["edgelist", "graphml", "tsv"],
                   help="outputs to write (repeatable); tsv dumps the neighbour table")
    p.add_argument("--communities", action="store_true", help="add Louvain community_id to GraphML")
    p.add_argument("--pagerank", action="store_true", help="add pagerank to GraphML")

    p = sub.add_parser("sweep", help="graph statistics over a list of k or d values")
    _add_common(p, method=False)
    p.add_argument("--method", choices=["knn", "proximity"], default="knn")
    p.add_argument("--ks", type=_int_list, help="e.g. 2:30 or 2,4,6")
    p.add_argument("--ds", type=_float_list, help="e.g. 0.8:1.6:0.1 or 0.8,1.0")

    p = sub.add_parser("metrics", help="summary statistics as JSON")
    _add_common(p, graph_input=True)
    p.add_argument("--x-min", type=int, help="power-law cut-off (default: k, or min degree)")
    p.add_argument("--histogram", action="store_true", help="include the degree histogram")

    p = sub.add_parser("communities", help="Louvain partition as TSV")
    _add_common(p, graph_input=True)

    p = sub.add_parser("export", help="GraphML with label, degree, community_id, pagerank")
    _add_common(p, graph_input=True)

    p = sub.add_parser("synth", help="write a planted-cluster embedding file")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--clusters", type=int, default=4)
    p.add_argument("--spread", type=float, default=1.0)
    p.add_argument("--separation", type=float, default=10.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("."))

    p = sub.add_parser("baseline", help="uniform random embeddings matched to a trained file")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--top", type=int, help="compute statistics on the N most frequent words")
    p.add_argument("--n", type=int, help="rows to generate (default: rows used for statistics)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, default=Path("."))
    return parser


def _load(args) -> embedding_store.EmbeddingMatrix:
    if args.top is not None and args.top < 1:
        raise CLIError("--top must be at least 1")
    try:
        return embedding_store.load_embeddings(args.input, limit=args.top)
    except OSError as exc:
        raise CLIError(f"cannot read {args.input}: {exc}", EXIT_IO) from None


def _induce(args, m):
    """Returns (graph, neighbour table, k or None)."""
    method = getattr(args, "method", "knn")
    if method == "knn":
        if args.k is None:
            raise CLIError("--method knn needs -k")
        if not 1 <= args.k <= m.n - 1:
            raise CLIError(f"-k must be in [1, {m.n - 1}]")
        if args.ego is not None:
            if not 1 <= args.ego <= m.n:
                raise CLIError(f"--ego must be in [1, {m.n}]")
            table = neighbors.knn_for_queries(m, np.arange(args.ego), args.k, n_jobs=args.jobs)
            return graph.induce_ego_graph(table), table, args.k
        table = neighbors.knn_all(m, args.k, n_jobs=args.jobs)
        return graph.induce_knn_graph(table), table, args.k
    if args.d is None or args.d <= 0:
        raise CLIError("--method proximity needs a positive -d")
    if args.ego is not None:
        raise CLIError("--ego applies to the knn method only")
    table = neighbors.radius_all(m, args.d, n_jobs=args.jobs)
    return graph.induce_proximity_graph(table), table, None


def _graph_from_args(args):
    if getattr(args, "graph", None) is not None:
        if args.input is not None:
            raise CLIError("give either --input or --graph, not both")
        try:
            return graph.read_edge_list(args.graph), None
        except OSError as exc:
            raise CLIError(f"cannot read {args.graph}: {exc}", EXIT_IO) from None
    if args.input is None:
        raise CLIError("one of --input or --graph is required")
    g, _, k = _induce(args, _load(args))
    return g, k


def _prepare_out(path: Path):
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise CLIError(f"cannot create {path}: {exc}", EXIT_IO) from None


def _summary(g) -> str:
    comp = graph.components(g)
    return f"|V|={g.n_nodes} |E|={g.n_edges} components={comp.n_components}"


def cmd_induce(args) -> int:
    m = _load(args)
    g, table, _ = _induce(args, m)
    formats = args.format or ["edgelist"]
    part = community.louvain(g, args.louvain_seed) if args.communities and g.n_edges else None
    pr = netmetrics.pagerank(g) if args.pagerank else None
    _prepare_out(args.out)
    if "edgelist" in formats:
        graph.write_edge_list(g, args.out / "edges.tsv")
    if "graphml" in formats:
        export.write_graphml(g, args.out / "graph.graphml", communities=part, pagerank=pr)
    if "tsv" in formats:
        neighbors.write_neighbor_table(table, args.out / "neighbors.tsv")
    print(_summary(g))
    return EXIT_OK


def cmd_sweep(args) -> int:
    m = _load(args)
    if args.method == "knn":
        if not args.ks:
            raise CLIError("--method knn needs --ks")
        if max(args.ks) > m.n - 1 or min(args.ks) < 1:
            raise CLIError(f"k values must lie in [1, {m.n - 1}]")
        curve = netmetrics.sweep_knn(m, args.ks, args.louvain_seed, n_jobs=args.jobs)
    else:
        if not args.ds:
            raise CLIError("--method proximity needs --ds")
        curve = netmetrics.sweep_proximity(m, args.ds, args.louvain_seed, n_jobs=args.jobs)
    _prepare_out(args.out)
    (args.out / "sweep.tsv").write_text(curve.to_tsv(), encoding="utf-8")
    print(f"{len(curve.params)} rows written to {args.out / 'sweep.tsv'}")
    return EXIT_OK


def cmd_metrics(args) -> int:
    g, k = _graph_from_args(args)
    x_min = args.x_min if args.x_min is not None else k
    report = netmetrics.network_report(g, x_min=x_min, path_sources=args.path_sources,
                                       seed=args.seed)
    _prepare_out(args.out)
    text = report.to_json(with_histogram=args.histogram)
    (args.out / "metrics.json").write_text(text + "\n", encoding="utf-8")
    print(text)
    return EXIT_OK


def cmd_communities(args) -> int:
    g, _ = _graph_from_args(args)
    if g.n_edges == 0:
        raise CLIError("graph has no edges; communities are undefined")
    part = community.louvain(g, args.louvain_seed)
    _prepare_out(args.out)
    community.write_partition(g, part, args.out / "communities.tsv")
    print(f"communities={part.n_communities} Q={part.modularity:.6f}")
    return EXIT_OK


def cmd_export(args) -> int:
    g, _ = _graph_from_args(args)
    part = community.louvain(g, args.louvain_seed) if g.n_edges else None
    pr = netmetrics.pagerank(g)
    _prepare_out(args.out)
    export.write_graphml(g, args.out / "graph.graphml", communities=part, pagerank=pr)
    print(_summary(g))
    return EXIT_OK


def cmd_synth(args) -> int:
    m, labels = embedding_store.synth_mixture(args.n, args.dim, args.clusters, args.spread,
                                              args.separation, args.seed)
    _prepare_out(args.out)
    embedding_store.save_embeddings(m, args.out / "embeddings.txt")
    with open(args.out / "ground_truth.tsv", "w", encoding="utf-8", newline="\n") as fh:
        fh.write("token\tcommunity_id\n")
        for tok, c in zip(m.tokens, labels):
            fh.write(f"{tok}\t{c}\n")
    print(f"wrote {m.n} x {m.dim} embeddings with {args.clusters} clusters")
    return EXIT_OK


def cmd_baseline(args) -> int:
    trained = _load(args)
    st = embedding_store.stats(trained)
    n = args.n if args.n is not None else trained.n
    m = embedding_store.random_baseline(n, trained.dim, st, args.seed)
    _prepare_out(args.out)
    embedding_store.save_embeddings(m, args.out / "baseline.txt")
    print(json.dumps({"mean": st.mean, "std": st.std, "n": n, "dim": trained.dim}))
    return EXIT_OK


COMMANDS = {
    "induce": cmd_induce,
    "sweep": cmd_sweep,
    "metrics": cmd_metrics,
    "communities": cmd_communities,
    "export": cmd_export,
    "synth": cmd_synth,
    "baseline": cmd_baseline,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except CLIError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.status
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
