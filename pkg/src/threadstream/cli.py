"""Command-line pipeline: ``ingest``, ``analyze`` and ``synth`` subcommands.

Exit codes: 0 on success, 1 on usage errors, 2 on data errors.
"""
from __future__ import annotations

import argparse
import hashlib
import logging
import random
import statistics
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import metrics, relations, report
from .ingest import (CleaningPolicy, DataError, clean, collection_window, parse_messages,
                     resolve_threads, retained_messages, to_stream_and_partition, write_messages)
from .relations import OverlapLimitError
from .stream import StaticGraph, StreamError, induced_graph
from .validation import SyntheticConfig, SyntheticConfigError, generate_messages

log = logging.getLogger("threadstream")

DEFAULT_DELTAS = "1m,1h,1d,1w,30d,1y,20y"
STAGES = ("stats", "intercontact", "density", "intra", "inter", "overlap", "quotient")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _duration_or_none(text: str) -> int | None:
    if text.lower() in ("none", "off"):
        return None
    return metrics.parse_duration(text)


def _window(text: str) -> tuple[int, int]:
    lo, hi = (int(x) for x in text.split(","))
    if lo > hi:
        raise ValueError("window start after end")
    return lo, hi


def sha256_of(path: Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


@dataclass
class RunConfig:
    input: str
    out: str
    deltas: list[tuple[str, int]] = field(default_factory=lambda: metrics.parse_durations(DEFAULT_DELTAS))
    sample_pairs: int | None = None
    seed: int = 0
    skip: list[str] = field(default_factory=list)
    include_boundary_gaps: bool = False
    exact_threshold: int = 500
    max_overlap_edges: int | None = None

    def runs(self, stage: str) -> bool:
        return stage not in self.skip


# ---------------------------------------------------------------- ingest

def cmd_ingest(args) -> int:
    policy = CleaningPolicy(
        max_thread_duration=args.max_duration,
        start_cutoff=args.start_cutoff,
        drop_inconsistent=not args.keep_inconsistent,
        drop_incomplete=not args.keep_incomplete,
        edge_guard=args.edge_guard,
    )
    messages = parse_messages(args.input)
    window = args.window or collection_window(messages)
    threads = resolve_threads(messages)
    kept, rep = clean(threads, policy, window)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_messages(retained_messages(kept, messages), out / "cleaned.csv")
    payload = {"window": list(window), "threads": len(threads), "kept": rep.kept,
               "removed": rep.removed, "policy": asdict(policy),
               "input_sha256": sha256_of(Path(args.input))}
    report.write_json(out / "removal_report.json", payload)
    print(f"messages: {len(messages)}")
    print(f"threads: {len(threads)} kept: {rep.kept}")
    for reason, n in rep.removed.items():
        print(f"removed[{reason}]: {n}")
    return 0


# ---------------------------------------------------------------- analyze

def _median(values):
    return statistics.median(values) if values else None


def analyze(cfg: RunConfig) -> dict:
    """Run every enabled stage and write the report directory; returns the summary."""
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    messages = parse_messages(cfg.input)
    threads = resolve_threads(messages)
    stream, part = to_stream_and_partition(threads, messages)
    k = len(part)
    toks = [tok for tok, _ in cfg.deltas]
    deltas = [d for _, d in cfg.deltas]
    summary: dict = {
        "config": asdict(cfg),
        "input_sha256": sha256_of(Path(cfg.input)),
        "counts": {
            "messages": len(messages),
            "threads": len(threads),
            "parts": k,
            "events": len(stream),
            "nodes": len(stream.nodes),
            "self_replies": stream.self_loops,
            "roots": sum(m.is_root for m in messages),
            "alpha": stream.alpha,
            "omega": stream.omega,
            "duration": stream.duration,
        },
    }
    per_thread: dict[str, list] = {}

    if cfg.runs("stats"):
        ts = report.thread_stats(part, threads)
        report.write_csv(out / "thread_stats.csv", ("part", "label", *report.STAT_FIELDS),
                         ((s.part, s.label, *(getattr(s, f) for f in report.STAT_FIELDS)) for s in ts))
        for f in report.STAT_FIELDS:
            report.write_ccdf(out / f"ccdf_{f}.csv", report.ccdf(getattr(s, f) for s in ts), f)
        corr = {}
        for x, y in (("n_messages", "duration"), ("n_messages", "n_authors")):
            c = report.correlation_table([getattr(s, x) for s in ts], [getattr(s, y) for s in ts])
            report.write_csv(out / f"scatter_{x}_{y}.csv", (x, y), c.points)
            corr[f"{x}~{y}"] = {"pearson": c.pearson, "spearman": c.spearman, "note": c.note}
        summary["thread_stats"] = {
            "correlations": corr,
            "fraction_messages_ge_authors": sum(s.n_messages >= s.n_authors for s in ts) / len(ts),
        }
        per_thread.update({f: [getattr(s, f) for s in ts] for f in report.STAT_FIELDS})

    if cfg.runs("intercontact"):
        try:
            dist = report.intercontact_distribution(stream, cfg.include_boundary_gaps)
            report.write_ccdf(out / "intercontact_ccdf.csv", dist, "gap")
            summary["intercontact"] = {"n_gaps": dist.n, "include_boundary_gaps": cfg.include_boundary_gaps}
        except ValueError as exc:
            summary["intercontact"] = {"error": str(exc)}

    quotient = None
    if cfg.runs("quotient"):
        quotient = relations.quotient_stream(part)
        report.write_csv(out / "quotient_stream.csv", ("t", "i", "j", "multiplicity"),
                         ((t, i, j, quotient.multiplicity[(t, i, j)]) for t, i, j in quotient.stream.events))
        connected = len(quotient.connected_parts)
        summary["quotient"] = {"links": len(quotient.stream), "connected_parts": connected,
                               "isolated_parts": k - connected,
                               "witnesses": sum(quotient.multiplicity.values())}

    if cfg.runs("density"):
        gd = metrics.graph_density(StaticGraph(stream.nodes, induced_graph(stream).edges))
        prof = metrics.delta_density_profile(stream, deltas)
        qprof = metrics.delta_density_profile(quotient.stream, deltas) if quotient else None
        rows = []
        for n, (tok, d) in enumerate(cfg.deltas):
            row = [tok, d, float(prof[n][1])]
            if qprof:
                row.append(float(qprof[n][1]))
            rows.append(row)
        header = ["delta", "seconds", "stream"] + (["quotient"] if qprof else [])
        report.write_csv(out / "delta_density_profile.csv", header, rows)
        summary["density"] = {
            "graph_density": gd.value,
            "stream": {tok: float(prof[n][1]) for n, tok in enumerate(toks)},
        }
        if qprof:
            summary["density"]["quotient"] = {tok: float(qprof[n][1]) for n, tok in enumerate(toks)}

    intra_vals: list[list] = []
    if cfg.runs("intra"):
        intra_vals = [metrics.per_thread_profile(part, i, deltas) for i in range(k)]
        summary["intra"] = {}
        for n, tok in enumerate(toks):
            vals = [v[n].value for v in intra_vals if not v[n].is_degenerate]
            if vals:
                report.write_ccdf(out / f"intra_thread_ccdf_{tok}.csv", report.ccdf(vals), "density")
            agg = metrics.intra_thread_delta_density(part, deltas[n])
            summary["intra"][tok] = {"aggregate": agg.value, "median": _median(vals),
                                     "n_threads": len(vals)}

    inter_vals: list[list] = []
    if cfg.runs("inter"):
        if cfg.sample_pairs is None and k > cfg.exact_threshold:
            summary["inter"] = {"skipped": f"{k} parts exceed the exact-mode threshold "
                                          f"{cfg.exact_threshold}; pass --sample-pairs"}
        else:
            rng = random.Random(cfg.seed)
            inter_vals = [metrics.inter_thread_profile(part, i, deltas, cfg.sample_pairs, rng)
                          for i in range(k)]
            summary["inter"] = {"sampled": bool(inter_vals and inter_vals[0][0].sampled),
                                "sample_pairs": cfg.sample_pairs, "seed": cfg.seed}
            for n, tok in enumerate(toks):
                vals = [v[n].value for v in inter_vals]
                report.write_ccdf(out / f"inter_thread_ccdf_{tok}.csv", report.ccdf(vals), "density")
                summary["inter"][tok] = {"mean": sum(vals) / len(vals), "median": _median(vals)}
                if intra_vals:
                    pts = [(intra_vals[i][n].value, inter_vals[i][n].value) for i in range(k)
                           if not intra_vals[i][n].is_degenerate]
                    report.write_csv(out / f"scatter_intra_inter_{tok}.csv", ("intra", "inter"), pts)

    if intra_vals or inter_vals:
        header = ["part", "label"]
        header += [f"intra_{t}" for t in toks] if intra_vals else []
        header += [f"inter_{t}" for t in toks] if inter_vals else []
        rows = []
        for i, p in enumerate(part):
            row = [i, p.label]
            if intra_vals:
                row += [float(v) for v in intra_vals[i]]
            if inter_vals:
                row += [float(v) for v in inter_vals[i]]
            rows.append(row)
        report.write_csv(out / "thread_density.csv", header, rows)

    if cfg.runs("overlap"):
        x = relations.temporal_overlap_graph(part)
        y = relations.node_overlap_graph(part, cfg.max_overlap_edges)
        for name, g in (("temporal", x), ("node", y)):
            report.write_csv(out / f"overlap_{name}.csv", ("i", "j", "weight"),
                             ((i, j, w) for (i, j), w in sorted(g.graph.edges.items())))
        deg_x, deg_y = relations.degree_series(x), relations.degree_series(y)
        deg_q = relations.degree_series(quotient) if quotient else None
        header = ["part", "degree_temporal", "degree_node"] + (["degree_quotient"] if deg_q else [])
        report.write_csv(out / "thread_degrees.csv", header,
                         ([i, deg_x[i], deg_y[i]] + ([deg_q[i]] if deg_q else []) for i in range(k)))
        if per_thread:
            for dname, deg in (("degree_temporal", deg_x), ("degree_node", deg_y)):
                for f in ("n_messages", "duration", "n_authors"):
                    report.write_csv(out / f"scatter_{dname}_{f}.csv", (dname, f),
                                     zip((deg[i] for i in range(k)), per_thread[f]))
        summary["overlap"] = {"temporal_edges": x.n_edges, "node_edges": y.n_edges,
                              "max_degree_temporal": max(deg_x.values()),
                              "max_degree_node": max(deg_y.values())}

    report.write_json(out / "summary.json", summary)
    return summary


def cmd_analyze(args) -> int:
    skip = [s for chunk in args.skip for s in chunk.split(",") if s]
    bad = [s for s in skip if s not in STAGES]
    if bad:
        raise UsageError(f"unknown stage(s) {', '.join(bad)}; choose from {', '.join(STAGES)}")
    cfg = RunConfig(input=args.input, out=args.out, deltas=args.delta,
                    sample_pairs=args.sample_pairs, seed=args.seed, skip=skip,
                    include_boundary_gaps=args.include_boundary_gaps,
                    exact_threshold=args.exact_threshold,
                    max_overlap_edges=args.max_overlap_edges)
    summary = analyze(cfg)
    c = summary["counts"]
    print(f"events: {c['events']} nodes: {c['nodes']} parts: {c['parts']}")
    print(f"report written to {cfg.out}")
    return 0


# ---------------------------------------------------------------- synth

def cmd_synth(args) -> int:
    config = SyntheticConfig(
        n_nodes=args.nodes, n_threads=args.threads,
        messages_per_thread=tuple(args.messages), authors_per_thread=tuple(args.authors),
        thread_duration=tuple(args.duration), n_background=args.background,
        span=args.span, seed=args.seed,
    )
    messages, planted, _ = generate_messages(config)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_messages(messages, out / "messages.csv")
    threads = resolve_threads(messages)
    thread_of = {mid: th.root for th in threads for mid in th.members}
    report.write_csv(out / "labels.csv", ("id", "thread", "kind"),
                     ((m.id, thread_of[m.id], "planted" if thread_of[m.id] in planted else "background")
                      for m in messages))
    print(f"messages: {len(messages)} planted threads: {len(planted)}")
    return 0


def _pair(text: str) -> tuple[int, int]:
    lo, hi = (metrics.parse_duration(x) for x in text.split(","))
    return lo, hi


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="threadstream", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ing = sub.add_parser("ingest", help="resolve and clean threads of a message table")
    ing.add_argument("--input", required=True)
    ing.add_argument("--out", required=True)
    ing.add_argument("--max-duration", type=_duration_or_none, default=730 * 86400)
    ing.add_argument("--start-cutoff", type=_duration_or_none, default=730 * 86400)
    ing.add_argument("--edge-guard", type=_duration_or_none, default=None)
    ing.add_argument("--keep-inconsistent", action="store_true")
    ing.add_argument("--keep-incomplete", action="store_true")
    ing.add_argument("--window", type=_window, default=None,
                     help="collection period START,END in epoch seconds (default: message span)")
    ing.set_defaults(func=cmd_ingest)

    an = sub.add_parser("analyze", help="compute every metric and export the report tables")
    an.add_argument("--input", required=True)
    an.add_argument("--out", required=True)
    an.add_argument("--delta", type=metrics.parse_durations, default=metrics.parse_durations(DEFAULT_DELTAS))
    an.add_argument("--sample-pairs", type=int, default=None)
    an.add_argument("--seed", type=int, default=0)
    an.add_argument("--skip", action="append", default=[], help=f"stage to skip: {', '.join(STAGES)}")
    an.add_argument("--include-boundary-gaps", action="store_true")
    an.add_argument("--exact-threshold", type=int, default=500)
    an.add_argument("--max-overlap-edges", type=int, default=None)
    an.set_defaults(func=cmd_analyze)

    sy = sub.add_parser("synth", help="generate a synthetic message table with planted threads")
    sy.add_argument("--out", required=True)
    sy.add_argument("--threads", type=int, default=40)
    sy.add_argument("--nodes", type=int, default=120)
    sy.add_argument("--background", type=int, default=60)
    sy.add_argument("--messages", type=_pair, default=(3, 15), help="MIN,MAX messages per thread")
    sy.add_argument("--authors", type=_pair, default=(2, 5), help="MIN,MAX authors per thread")
    sy.add_argument("--duration", type=_pair, default=(3600, 7 * 86400), help="MIN,MAX thread duration")
    sy.add_argument("--span", type=metrics.parse_duration, default=365 * 86400)
    sy.add_argument("--seed", type=int, default=0)
    sy.set_defaults(func=cmd_synth)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"threadstream: error: {exc}", file=sys.stderr)
        return 1
    except (DataError, StreamError, SyntheticConfigError, OverlapLimitError, OSError) as exc:
        print(f"threadstream: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
