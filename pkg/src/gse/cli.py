"""Command-line interface.

Exit codes: 0 success, 2 usage or input errors, 3 numerical failures.
"""

from __future__ import annotations

import argparse
import contextlib
import logging
import os
import sys
import traceback
from pathlib import Path

from threadpoolctl import threadpool_limits

from . import __version__
from .centrality import PATH_METRICS, edge_betweenness
from .embedding import DEFAULT_SCALES, DEFAULT_SIGMA_FACTOR, DescriptorConfig, gse_embed, gsse_embed, stacked_baseline_embed
from .errors import GSEError
from .io import read_edge_list, read_pairs, write_ebc_tsv, write_embedding_csv, write_json
from .tasks import AlignmentProblem, FailureProblem, align, align_folds, detect_failures

log = logging.getLogger("gse")

THREADS_ENV = "GSE_THREADS"


class _UsageError(Exception):
    pass


@contextlib.contextmanager
def _output(path):
    if path is None or path == "-":
        yield sys.stdout
    else:
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            yield fh


def _descriptor_config(args) -> DescriptorConfig:
    return DescriptorConfig(
        m=args.m,
        num_scales=args.scales,
        sigma=args.sigma,
        sigma_factor=args.sigma_factor,
        spacing=args.spacing,
    )


def cmd_centrality(args):
    g = read_edge_list(args.edges)
    ebc = edge_betweenness(g, args.metric)
    with _output(args.output) as out:
        write_ebc_tsv(g, ebc, out)


def cmd_embed(args):
    g = read_edge_list(args.edges)
    if not g.is_connected():
        log.warning("input graph has %d connected components", g.n_components())
    cfg = _descriptor_config(args)
    prefix = "s"
    if args.method == "gse":
        emb = gse_embed(g, cfg, args.metric)
    elif args.method == "stacked":
        emb = stacked_baseline_embed(g, cfg, args.metric)
    else:
        if args.beta is None:
            raise _UsageError("--method gsse requires --beta")
        emb = gsse_embed(g, args.beta, args.m, cfg, args.metric, raw=args.raw)
        if args.raw:
            prefix = "e"
    with _output(args.output) as out:
        write_embedding_csv(emb.labels, emb.values, out, prefix)


def _write_report(report, args, assignment_header, kind):
    payload = report.as_dict()
    payload["task"] = kind
    if args.out_dir:
        out_dir = Path(args.out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        with open(out_dir / "report.json", "w", encoding="utf-8") as fh:
            write_json(payload, fh)
        with open(out_dir / f"{kind}.tsv", "w", encoding="utf-8") as fh:
            fh.write("\t".join(assignment_header) + "\n")
            for row in report.assignments:
                fh.write("\t".join(str(x) for x in row) + "\n")
    write_json(payload, sys.stdout)


def cmd_align(args):
    g1 = read_edge_list(args.g1)
    g2 = read_edge_list(args.g2)
    anchors = read_pairs(args.anchors)
    truth = read_pairs(args.truth) if args.truth else None
    p = AlignmentProblem.from_labels(g1, g2, anchors, truth)
    cfg = _descriptor_config(args)
    if args.folds > 1:
        report = align_folds(
            p, cfg, args.folds, args.fraction, args.distance, args.anchor_weight, args.metric, args.seed
        )
    else:
        report = align(p, cfg, args.distance, args.anchor_weight, args.metric, args.seed)
    _write_report(report, args, ("g1_node", "g2_match"), "matches")


def cmd_detect(args):
    g = read_edge_list(args.edges)
    p = FailureProblem.from_labels(g, read_pairs(args.failed))
    report = detect_failures(p, _descriptor_config(args), args.knn, args.seed, args.metric, args.symmetric_edges)
    _write_report(report, args, ("u", "v", "cluster", "predicted_failed", "failed"), "edges")


def _add_common(p, descriptor=True):
    p.add_argument(
        "--metric", choices=PATH_METRICS, default="hops",
        help="shortest-path length used for betweenness (default: hops)",
    )
    if descriptor:
        p.add_argument("--scales", type=int, default=DEFAULT_SCALES, help="number of descriptor scales")
        p.add_argument("--m", type=int, default=None, help="spectral pairs used (default: all)")
        p.add_argument("--sigma", type=float, default=None, help="kernel bandwidth in log units")
        p.add_argument("--sigma-factor", type=float, default=DEFAULT_SIGMA_FACTOR)
        p.add_argument("--spacing", choices=("linear", "log"), default="linear")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gse", description="Graph Sylvester embeddings")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int, default=None, help=f"BLAS thread cap (env {THREADS_ENV})")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("centrality", help="edge betweenness as TSV")
    p.add_argument("edges")
    p.add_argument("-o", "--output")
    _add_common(p, descriptor=False)
    p.set_defaults(func=cmd_centrality)

    p = sub.add_parser("embed", help="node embeddings as CSV")
    p.add_argument("edges")
    p.add_argument("-o", "--output")
    p.add_argument("--method", choices=("gse", "gsse", "stacked"), default="gse")
    p.add_argument("--beta", type=float, default=None, help="pencil parameter for gsse")
    p.add_argument("--raw", action="store_true", help="gsse: write eigenvectors instead of descriptors")
    _add_common(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("align", help="anchored alignment of two graphs")
    p.add_argument("g1")
    p.add_argument("g2")
    p.add_argument("anchors")
    p.add_argument("--truth")
    p.add_argument("--distance", choices=("euclidean", "cosine"), default="euclidean")
    p.add_argument("--anchor-weight", type=float, default=1.0)
    p.add_argument("--folds", type=int, default=1)
    p.add_argument("--fraction", type=float, default=0.5, help="anchor fraction kept per fold")
    p.add_argument("--out-dir")
    _add_common(p)
    p.set_defaults(func=cmd_align)

    p = sub.add_parser("detect", help="failed-edge detection")
    p.add_argument("edges")
    p.add_argument("failed")
    p.add_argument("--knn", type=int, default=10)
    p.add_argument("--symmetric-edges", action="store_true")
    p.add_argument("--out-dir")
    _add_common(p)
    p.set_defaults(func=cmd_detect)
    return parser


def _origin(exc) -> str:
    frames = traceback.extract_tb(exc.__traceback__)
    pkg = Path(__file__).parent
    for fr in reversed(frames):
        path = Path(fr.filename)
        if path.parent == pkg and path.stem != "cli":
            return path.stem
    return "cli"


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    threads = args.threads
    if threads is None and os.environ.get(THREADS_ENV):
        threads = int(os.environ[THREADS_ENV])
    limits = threadpool_limits(threads) if threads else contextlib.nullcontext()
    try:
        with limits:
            args.func(args)
    except _UsageError as exc:
        parser.error(str(exc))
    except GSEError as exc:
        print(f"gse: error [{_origin(exc)}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except ValueError as exc:
        print(f"gse: invalid argument [{_origin(exc)}]: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
