"""Command-line entry point.

Subcommands cover ingestion checks, embedding, vector import/export, the
three evaluation tasks, and the three explanation modes. Exit codes: 0 on
success, 1 on runtime errors (reported as one structured line on stderr),
2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Mapping, Sequence

from . import __version__
from .config import effective_config, pick
from .dataset import TaskDataset, TopicalType, load_dataset
from .embedder import EveParams, embed_batch
from .errors import EveError
from .explain import (
    Explanation,
    explain_clusters,
    explain_intruder,
    explain_ranking,
)
from .graph import WikiGraph, load_graph_dir, load_stop_categories
from .report import Report, write_text_atomic
from .search import SearchIndex, build_search_index
from .tasks import (
    Vector,
    detect_intruder,
    evaluate_cluster_type,
    evaluate_intruder_type,
    evaluate_rank_type,
    rank_items,
    similarity,
)
from .vectors import (
    ExternalSpace,
    LabeledVector,
    export_external,
    export_labeled,
    import_external,
    import_labeled,
)

logger = logging.getLogger(__name__)


# ---------------------------------------------------------------------------
# Argument plumbing
# ---------------------------------------------------------------------------


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="config file (key = value lines); $EVE_CONFIG otherwise")
    common.add_argument("-v", "--verbose", action="count", default=0,
                        help="log progress to stderr (-vv for debug)")
    return common


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("model parameters")
    group.add_argument("--bias-article", type=float, default=None)
    group.add_argument("--bias-category", type=float, default=None)
    group.add_argument("--jump-prob", type=float, default=None)
    group.add_argument("--depth", type=int, default=None, help="category propagation depth")
    group.add_argument("--top-k", type=int, default=None, help="best-match resolution width")
    group.add_argument("--stop-categories", default=None,
                       help="stop-category file (default: packaged list)")


def _add_vector_source_flags(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("vector source")
    group.add_argument("--vectors", default=None,
                       help="use precomputed vectors instead of embedding")
    group.add_argument("--format", choices=("eve", "word2vec"), default=None,
                       help="format of --vectors (default: eve)")


def _add_report_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--out", default=None, help="report path (stdout when omitted)")
    parser.add_argument("--decimals", type=int, default=None,
                        help="decimal places in report tables (default 4)")


def build_parser() -> argparse.ArgumentParser:
    common = _common_parser()
    parser = argparse.ArgumentParser(
        prog="eve",
        description="Explainable labeled concept embeddings: build, evaluate, explain.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    p = sub.add_parser("ingest-validate", parents=[common],
                       help="load a graph directory and report its statistics")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--stop-categories", default=None)
    p.set_defaults(func=cmd_ingest_validate)

    p = sub.add_parser("embed", parents=[common],
                       help="embed concepts from a file into labeled vectors (JSONL)")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--concepts", required=True, help="file with one concept per line")
    p.add_argument("--out", required=True, help="output JSONL path")
    _add_param_flags(p)
    p.set_defaults(func=cmd_embed)

    p = sub.add_parser("export-vectors", parents=[common],
                       help="embed concepts and write them in a chosen vector format")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--concepts", required=True)
    p.add_argument("--format", choices=("eve", "word2vec"), default="eve")
    p.add_argument("--out", required=True)
    _add_param_flags(p)
    p.set_defaults(func=cmd_export_vectors)

    p = sub.add_parser("import-vectors", parents=[common],
                       help="validate a vector file and print a summary")
    p.add_argument("--vectors", required=True)
    p.add_argument("--format", choices=("eve", "word2vec"), default="eve")
    p.set_defaults(func=cmd_import_vectors)

    p = sub.add_parser("task-intruder", parents=[common],
                       help="run the intruder-detection task")
    p.add_argument("--graph-dir", default=None)
    p.add_argument("--dataset", required=True)
    p.add_argument("--type", default=None, help="restrict to one topical type")
    p.add_argument("--sample", type=int, default=None,
                   help="evaluate a uniform random subsample of this size per type")
    p.add_argument("--seed", type=int, default=None, help="sampling seed")
    _add_vector_source_flags(p)
    _add_param_flags(p)
    _add_report_flags(p)
    p.set_defaults(func=cmd_task_intruder)

    p = sub.add_parser("task-cluster", parents=[common],
                       help="run the cluster-validity task")
    p.add_argument("--graph-dir", default=None)
    p.add_argument("--dataset", required=True)
    p.add_argument("--type", default=None)
    _add_vector_source_flags(p)
    _add_param_flags(p)
    _add_report_flags(p)
    p.set_defaults(func=cmd_task_cluster)

    p = sub.add_parser("task-rank", parents=[common],
                       help="run the relevance-ranking task")
    p.add_argument("--graph-dir", default=None)
    p.add_argument("--dataset", required=True)
    p.add_argument("--type", default=None)
    p.add_argument("--k", type=int, default=None,
                   help="precision cutoff; 0 or omitted scores each category at its own size")
    _add_vector_source_flags(p)
    _add_param_flags(p)
    _add_report_flags(p)
    p.set_defaults(func=cmd_task_rank)

    p = sub.add_parser("explain-intruder", parents=[common],
                       help="detect and explain an intruder among given concepts")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--item", action="append", default=[],
                   help="a concept (repeat the flag; 5 items is the usual shape)")
    p.add_argument("--items-file", default=None, help="file with one concept per line")
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_explain_intruder)

    p = sub.add_parser("explain-cluster", parents=[common],
                       help="explain the overall space and each category of a topical type")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_explain_cluster)

    p = sub.add_parser("explain-rank", parents=[common],
                       help="explain each item's ranking against a category query")
    p.add_argument("--graph-dir", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--type", required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--top-n", type=int, default=None)
    p.add_argument("--json", action="store_true")
    p.add_argument("--out", default=None)
    _add_param_flags(p)
    p.set_defaults(func=cmd_explain_rank)

    return parser


def run(argv: Sequence[str] | None = None) -> int:
    """Parse and execute; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse reports usage errors itself
        return int(exc.code) if exc.code is not None else 0
    level = logging.WARNING
    if getattr(args, "verbose", 0) == 1:
        level = logging.INFO
    elif getattr(args, "verbose", 0) >= 2:
        level = logging.DEBUG
    logging.basicConfig(stream=sys.stderr, level=level, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except EveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run())


# ---------------------------------------------------------------------------
# Shared helpers
# ---------------------------------------------------------------------------


def _params_from(args, cfg: dict[str, str]) -> EveParams:
    return EveParams(
        bias_article=pick(args.bias_article, cfg, "bias_article", 0.5, float),
        bias_category=pick(args.bias_category, cfg, "bias_category", 0.5, float),
        jump_prob=pick(args.jump_prob, cfg, "jump_prob", 0.5, float),
        category_depth=pick(args.depth, cfg, "depth", 2, int),
        resolution_top_k=pick(args.top_k, cfg, "top_k", 1, int),
    )


def _stop_titles(args, cfg: dict[str, str]):
    path = pick(getattr(args, "stop_categories", None), cfg, "stop_categories", None)
    return (load_stop_categories(path), path) if path else (None, "default")


def _load_world(args, cfg: dict[str, str]) -> tuple[WikiGraph, SearchIndex, str]:
    graph_dir = pick(getattr(args, "graph_dir", None), cfg, "graph_dir", None)
    if not graph_dir:
        raise EveError("--graph-dir is required (no precomputed vectors were given)")
    stops, stop_desc = _stop_titles(args, cfg)
    graph = load_graph_dir(graph_dir, stop_category_titles=stops)
    return graph, build_search_index(graph), stop_desc


def _read_concept_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.strip() for line in fh if line.strip()]


def _params_echo(params: EveParams) -> str:
    return (
        f"bias_article={params.bias_article} bias_category={params.bias_category} "
        f"jump_prob={params.jump_prob} depth={params.category_depth} "
        f"top_k={params.resolution_top_k}"
    )


def _gather_vectors(
    args, cfg: dict[str, str], concepts: Sequence[str], report: Report | None
) -> tuple[str, dict[str, Vector], tuple[str, ...]]:
    """Vectors for the given concepts, either imported or embedded in-process.

    Returns (model name, concept -> vector, concepts without a vector).
    """
    vectors_path = pick(getattr(args, "vectors", None), cfg, "vectors", None)
    if vectors_path:
        fmt = pick(getattr(args, "format", None), cfg, "format", "eve")
        found: dict[str, Vector] = {}
        missing: list[str] = []
        if fmt == "word2vec":
            space = import_external(vectors_path)
            for name in concepts:
                vec = space.lookup(name)
                if vec is None:
                    missing.append(name)
                else:
                    found[name] = vec
        else:
            table = import_labeled(vectors_path)
            for name in concepts:
                if name in table:
                    found[name] = table[name]
                else:
                    missing.append(name)
        if report is not None:
            report.add_header("vectors", f"{vectors_path} format={fmt}")
        return Path(vectors_path).stem, found, tuple(missing)

    graph, index, stop_desc = _load_world(args, cfg)
    params = _params_from(args, cfg)
    batch = embed_batch(graph, index, params, concepts)
    if report is not None:
        report.add_header("graph", f"sha256:{graph.identity_hash()[:16]}")
        report.add_header("config", _params_echo(params) + f" stop_categories={stop_desc}")
    return "eve", dict(batch.vectors), batch.skipped


def _emit_report(args, cfg: dict[str, str], report: Report) -> None:
    decimals = pick(getattr(args, "decimals", None), cfg, "decimals", 4, int)
    text = report.to_csv(decimals=decimals)
    if args.out:
        write_text_atomic(args.out, text)
        logger.info("report written to %s", args.out)
    else:
        sys.stdout.write(text)


def _emit_text(args, text: str) -> None:
    if getattr(args, "out", None):
        write_text_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _selected_types(dataset: TaskDataset, type_flag: str | None) -> list[TopicalType]:
    if type_flag is not None:
        return [dataset.type(type_flag)]
    return [dataset.type(name) for name in dataset.type_names()]


def _warn_missing(missing: Sequence[str], what: str) -> None:
    if missing:
        logger.warning("%d %s had no vector: %s", len(missing), what, ", ".join(sorted(missing)))


# ---------------------------------------------------------------------------
# Commands
# ---------------------------------------------------------------------------


def cmd_ingest_validate(args) -> int:
    cfg = effective_config(args.config)
    stops, stop_desc = _stop_titles(args, cfg)
    graph_dir = pick(args.graph_dir, cfg, "graph_dir", None)
    if not graph_dir:
        raise EveError("--graph-dir is required")
    graph = load_graph_dir(graph_dir, stop_category_titles=stops)
    lines = [
        f"graph_dir: {graph_dir}",
        f"articles: {graph.n_articles}",
        f"categories: {graph.n_categories}",
        f"stopped_categories: {graph.stats.stopped_categories}",
        f"links: {sum(1 for _ in graph.link_rows())}",
        f"link_count_total: {graph.total_link_count()}",
        f"dropped_self_loop_count: {graph.stats.dropped_self_loops}",
        f"memberships: {sum(1 for _ in graph.membership_rows())}",
        f"category_edges: {sum(1 for _ in graph.category_edge_rows())}",
        f"redirects: {len(graph.redirects)}",
        f"stop_categories: {stop_desc}",
        f"graph_hash: sha256:{graph.identity_hash()}",
    ]
    print("\n".join(lines))
    return 0


def cmd_embed(args) -> int:
    cfg = effective_config(args.config)
    graph, index, _ = _load_world(args, cfg)
    params = _params_from(args, cfg)
    concepts = _read_concept_lines(args.concepts)
    batch = embed_batch(graph, index, params, concepts)
    export_labeled(batch.vectors, args.out)
    print(
        f"embedded {len(batch.vectors)} concept(s) to {args.out}"
        + (f"; skipped {len(batch.skipped)}: {', '.join(batch.skipped)}" if batch.skipped else ""),
        file=sys.stderr,
    )
    return 0


def cmd_export_vectors(args) -> int:
    cfg = effective_config(args.config)
    graph, index, _ = _load_world(args, cfg)
    params = _params_from(args, cfg)
    concepts = _read_concept_lines(args.concepts)
    batch = embed_batch(graph, index, params, concepts)
    if args.format == "eve":
        export_labeled(batch.vectors, args.out)
    else:
        space = _to_dense_space(batch.vectors)
        export_external(space, args.out)
    print(
        f"exported {len(batch.vectors)} vector(s) as {args.format} to {args.out}"
        + (f"; skipped {len(batch.skipped)}" if batch.skipped else ""),
        file=sys.stderr,
    )
    return 0


def _to_dense_space(vectors: Mapping[str, LabeledVector]) -> ExternalSpace:
    """Materialize labeled vectors over the sorted union of their dimensions."""
    import numpy as np

    union = sorted(
        {lab for vec in vectors.values() for lab in vec.scores},
        key=lambda lab: (lab.kind.value, lab.name),
    )
    position = {lab: i for i, lab in enumerate(union)}
    dense: dict[str, "np.ndarray"] = {}
    for concept, vec in vectors.items():
        token = concept.replace(" ", "_")
        if token in dense:
            raise EveError(f"token collision after space folding: {token!r}")
        arr = np.zeros(len(union) or 1)
        for lab, score in vec.scores.items():
            arr[position[lab]] = score
        dense[token] = arr
    return ExternalSpace(dimension=len(union) or 1, vectors=dense)


def cmd_import_vectors(args) -> int:
    if args.format == "word2vec":
        space = import_external(args.vectors)
        print(f"word2vec vectors: {len(space)} token(s), dimensionality {space.dimension}")
    else:
        table = import_labeled(args.vectors)
        dims = {lab for vec in table.values() for lab in vec.scores}
        print(f"labeled vectors: {len(table)} concept(s), {len(dims)} distinct dimension(s)")
    return 0


def cmd_task_intruder(args) -> int:
    cfg = effective_config(args.config)
    dataset = load_dataset(args.dataset)
    types = _selected_types(dataset, args.type)
    sample = pick(args.sample, cfg, "sample", None, int)
    seed = pick(args.seed, cfg, "seed", None, int)

    report = Report(
        command="task-intruder",
        model="",
        columns=["queries", "evaluated", "skipped", "accuracy"],
        metric_columns={"accuracy"},
    )
    report.add_header("dataset", f"sha256:{dataset.identity_hash()[:16]}")
    if sample is not None:
        report.add_header("sample", f"{sample} seed={seed if seed is not None else 0}")

    concepts = sorted({item for tt in types for item in tt.items()})
    model, vectors, missing = _gather_vectors(args, cfg, concepts, report)
    report.model = model
    _warn_missing(missing, "items")

    for tt in types:
        res = evaluate_intruder_type(
            tt, dataset, vectors, sample=sample, seed=seed, progress_every=200_000
        )
        report.add_row(
            tt.name,
            {
                "queries": res.total_queries,
                "evaluated": res.evaluated,
                "skipped": res.skipped,
                "accuracy": res.accuracy_value,
            },
        )
    _emit_report(args, cfg, report)
    return 0


def cmd_task_cluster(args) -> int:
    cfg = effective_config(args.config)
    dataset = load_dataset(args.dataset)
    types = _selected_types(dataset, args.type)

    report = Report(
        command="task-cluster",
        model="",
        columns=["items", "clusters", "within", "between", "ch_index"],
        metric_columns={"within", "between", "ch_index"},
    )
    report.add_header("dataset", f"sha256:{dataset.identity_hash()[:16]}")
    concepts = sorted({item for tt in types for item in tt.items()})
    model, vectors, missing = _gather_vectors(args, cfg, concepts, report)
    report.model = model
    _warn_missing(missing, "items")

    for tt in types:
        res = evaluate_cluster_type(tt, vectors)
        if res.note:
            logger.warning("%s: %s", tt.name, res.note)
        report.add_row(
            tt.name,
            {
                "items": res.n_items,
                "clusters": res.k,
                "within": res.within,
                "between": res.between,
                "ch_index": res.ch,
            },
        )
    _emit_report(args, cfg, report)
    return 0


def cmd_task_rank(args) -> int:
    cfg = effective_config(args.config)
    dataset = load_dataset(args.dataset)
    types = _selected_types(dataset, args.type)
    k = pick(args.k, cfg, "k", None, int)
    if k is not None and k <= 0:
        k = None

    report = Report(
        command="task-rank",
        model="",
        columns=["queries", "p_at_k", "ap"],
        metric_columns={"p_at_k", "ap"},
    )
    report.add_header("dataset", f"sha256:{dataset.identity_hash()[:16]}")
    report.add_header("k", str(k) if k else "per-category size")

    items = sorted({item for tt in types for item in tt.items()})
    cat_names = sorted({cat.name for tt in types for cat in tt.categories})
    concepts = sorted(set(items) | set(cat_names))
    model, vectors, missing = _gather_vectors(args, cfg, concepts, report)
    report.model = model
    _warn_missing([m for m in missing if m in set(items)], "items")
    _warn_missing([m for m in missing if m in set(cat_names)], "category queries")

    for tt in types:
        res = evaluate_rank_type(tt, vectors, vectors, k=k)
        if res.skipped_categories:
            logger.warning(
                "%s: skipped %d category query(ies): %s",
                tt.name, len(res.skipped_categories), ", ".join(res.skipped_categories),
            )
        report.add_row(
            tt.name,
            {
                "queries": len(res.rows),
                "p_at_k": res.mean_p_at_k,
                "ap": res.mean_ap,
            },
        )
    _emit_report(args, cfg, report)
    return 0


# ---------------------------------------------------------------------------
# Explanation commands
# ---------------------------------------------------------------------------


def _top_n_value(args, cfg: dict[str, str]) -> int:
    top = pick(args.top_n, cfg, "top_n", 10, int)
    if top < 1:
        raise EveError(f"--top-n must be >= 1, got {top}")
    return top


def _explanation_json(exp: Explanation) -> dict:
    return {
        "context": exp.context.value,
        **({"subject": exp.subject} if exp.subject else {}),
        "features": [
            {"kind": lab.kind.value, "name": lab.name, "score": score}
            for lab, score in exp.entries
        ],
    }


def _render_columns(headers: Sequence[str], columns: Sequence[Sequence[str]]) -> str:
    """Plain aligned text table: one column per explanation."""
    height = max((len(col) for col in columns), default=0)
    widths = [
        max(len(head), *(len(cell) for cell in col)) if col else len(head)
        for head, col in zip(headers, columns)
    ]
    lines = []
    lines.append("  ".join(head.ljust(w) for head, w in zip(headers, widths)).rstrip())
    lines.append("  ".join("-" * w for w in widths))
    for i in range(height):
        cells = [
            (col[i] if i < len(col) else "").ljust(w) for col, w in zip(columns, widths)
        ]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def cmd_explain_intruder(args) -> int:
    cfg = effective_config(args.config)
    names = list(args.item)
    if args.items_file:
        names.extend(_read_concept_lines(args.items_file))
    if len(names) < 3:
        raise EveError("explain-intruder needs at least 3 concepts (--item/--items-file)")
    if len(set(names)) != len(names):
        raise EveError("duplicate concepts in the intruder query")
    top = _top_n_value(args, cfg)

    model, vectors, missing = _gather_vectors(args, cfg, names, None)
    if missing:
        raise EveError(f"unresolvable concept(s): {', '.join(missing)}")
    pairs = [(name, vectors[name]) for name in names]
    detected_idx, scores = detect_intruder(pairs)
    detected = names[detected_idx]

    space = [vectors[name] for name in names]
    coherent, outlier = explain_intruder(space, vectors[detected], top=top)

    if args.json:
        payload = {
            "detected": detected,
            "scores": dict(zip(names, scores)),
            "coherent": _explanation_json(coherent),
            "intruder": _explanation_json(outlier),
        }
        _emit_text(args, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        return 0

    text = f"detected intruder: {detected}\n\n" + _render_columns(
        ["non-intruder", "intruder"], [coherent.labels(), outlier.labels()]
    )
    _emit_text(args, text)
    return 0


def cmd_explain_cluster(args) -> int:
    cfg = effective_config(args.config)
    dataset = load_dataset(args.dataset)
    tt = dataset.type(args.type)
    top = _top_n_value(args, cfg)

    model, vectors, missing = _gather_vectors(args, cfg, list(tt.items()), None)
    _warn_missing(missing, "items")
    category_spaces = {
        cat.name: [vectors[item] for item in cat.items if item in vectors]
        for cat in tt.categories
    }
    empty = [name for name, vecs in category_spaces.items() if not vecs]
    if empty:
        raise EveError(f"no vectors for category(ies): {', '.join(empty)}")
    space = [vec for vecs in category_spaces.values() for vec in vecs]
    overall, per_category = explain_clusters(
        space, [c.name for c in tt.categories], category_spaces, top=top
    )

    if args.json:
        payload = {
            "type": tt.name,
            "overall": _explanation_json(overall),
            "categories": {name: _explanation_json(exp) for name, exp in per_category.items()},
        }
        _emit_text(args, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        return 0

    headers = ["overall space"] + [f"{name}" for name in per_category]
    columns = [overall.labels()] + [per_category[name].labels() for name in per_category]
    _emit_text(args, _render_columns(headers, columns))
    return 0


def cmd_explain_rank(args) -> int:
    cfg = effective_config(args.config)
    dataset = load_dataset(args.dataset)
    tt = dataset.type(args.type)
    cat = tt.category(args.category)
    top = _top_n_value(args, cfg)

    needed = [cat.name, *tt.items()]
    model, vectors, missing = _gather_vectors(args, cfg, needed, None)
    if cat.name in missing:
        raise EveError(f"category query {cat.name!r} has no vector")
    _warn_missing([m for m in missing if m != cat.name], "items")

    query_vec = vectors[cat.name]
    item_pairs = [(name, vectors[name]) for name in tt.items() if name in vectors]
    ranking = rank_items(cat.name, query_vec, item_pairs, cat.items)

    sim_by_name = dict(zip(ranking.ranked_items, ranking.scores))
    ordered_items = list(ranking.ranked_items)
    space = [query_vec] + [vectors[name] for name in ordered_items]
    sims = [1.0] + [sim_by_name[name] for name in ordered_items]
    explanations = explain_ranking(space, sims, ordered_items, top=top)

    if args.json:
        payload = {
            "type": tt.name,
            "category": cat.name,
            "ranking": [
                {
                    "rank": i + 1,
                    "item": name,
                    "similarity": ranking.scores[i],
                    "relevant": bool(ranking.relevance[i]),
                    "explanation": _explanation_json(explanations[name]),
                }
                for i, name in enumerate(ranking.ranked_items)
            ],
        }
        _emit_text(args, json.dumps(payload, ensure_ascii=False, indent=2) + "\n")
        return 0

    blocks = [f"query category: {cat.name}\n"]
    for i, name in enumerate(ranking.ranked_items):
        marker = "relevant" if ranking.relevance[i] else "other"
        blocks.append(
            f"#{i + 1} {name} ({marker}, similarity {ranking.scores[i]:.4f})"
        )
        for label_text in explanations[name].labels():
            blocks.append(f"    {label_text}")
    _emit_text(args, "\n".join(blocks) + "\n")
    return 0


if __name__ == "__main__":
    main()
