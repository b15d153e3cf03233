"""Command-line interface.

Subcommands cover the pipeline stages (``candidates``, ``score``,
``rank``, ``evaluate``) and parameter search (``grid-search``,
``cv-select``).  Exit codes: 0 success, 1 usage/configuration error,
2 data error.
"""

import argparse
import copy
import csv
import json
import logging
import sys
from pathlib import Path

from . import evaluation
from .candidates import export_candidates_tsv
from .config import (canonical_json, config_from_dict, default_config,
                     load_config)
from .errors import ConfigError, DataError, TermrankError
from .pipeline import PipelinePaths, export_ranking_tsv, run_pipeline
from .scores import export_scores_tsv

logger = logging.getLogger(__name__)

USAGE_EXIT = 1
DATA_EXIT = 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(USAGE_EXIT)


def _common_flags(parser):
    parser.add_argument("--config", help="pipeline configuration JSON file")
    parser.add_argument("--corpus", action="append", default=[],
                        help="corpus path (repeatable for multi-dataset commands)")
    parser.add_argument("--gold", action="append", default=[],
                        help="gold standard file (repeatable, pairs with --corpus)")
    parser.add_argument("--reference", help="reference frequency table (TSV)")
    parser.add_argument("--link-stats", help="hyperlink statistics table (TSV)")
    parser.add_argument("--embeddings", help="text-format embedding file")
    parser.add_argument("--stop-words", help="stop-word list overriding the bundled one")
    parser.add_argument("--out", help="output file (or directory for 'score')")
    parser.add_argument("--cache-dir", help="stage cache directory "
                        "(default ./.atr-cache, or $TERMRANK_CACHE_DIR)")
    parser.add_argument("--no-cache", action="store_true",
                        help="disable stage caching")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int,
                        help="override the topic-model and PU random seeds")
    parser.add_argument("--verbose", action="store_true")


def build_parser():
    parser = _Parser(prog="termrank",
                     description="terminology recognition pipeline")
    sub = parser.add_subparsers(dest="command", required=True,
                                parser_class=_Parser)
    for name, help_text in [
        ("candidates", "collect term candidates and export them as TSV"),
        ("score", "run the configured scorers and export score tables"),
        ("rank", "produce the final ranking"),
        ("evaluate", "rank and score against a gold standard"),
        ("grid-search", "evaluate a parameter grid over datasets"),
        ("cv-select", "pick parameters by cross-validated relative goodness"),
    ]:
        p = sub.add_parser(name, help=help_text)
        _common_flags(p)
        if name == "cv-select":
            p.add_argument("--held-out", help="dataset id excluded from validation")
            p.add_argument("--results", help="reuse a grid-search results CSV")
    return parser


def _load_config(args):
    cfg = load_config(args.config) if args.config else default_config()
    if args.seed is not None:
        cfg = copy.deepcopy(cfg)
        for scorer in cfg["scorers"]:
            if scorer["method"] == "novel_topic_model":
                scorer["seed"] = args.seed
        if cfg["ranker"]["method"] == "pu_atr":
            cfg["ranker"]["rng_seed"] = args.seed
    return cfg


def _single_corpus(args, parser):
    if len(args.corpus) != 1:
        parser.error("exactly one --corpus is required")
    return args.corpus[0]


def _paths(args, corpus, gold=None):
    return PipelinePaths(corpus=corpus, gold=gold, reference=args.reference,
                         link_stats=args.link_stats, embeddings=args.embeddings)


def _run(cfg, args, corpus, gold=None):
    return run_pipeline(cfg, _paths(args, corpus, gold),
                        cache_dir=args.cache_dir, threads=args.threads,
                        use_cache=not args.no_cache,
                        stop_words_path=args.stop_words)


def _cmd_candidates(args, parser):
    cfg = _load_config(args)
    result = _run(cfg, args, _single_corpus(args, parser))
    out = args.out or "candidates.tsv"
    export_candidates_tsv(result.candidates, out)
    print(f"{len(result.candidates.candidates)} candidates -> {out}")


def _cmd_score(args, parser):
    cfg = _load_config(args)
    result = _run(cfg, args, _single_corpus(args, parser))
    out = Path(args.out or "scores")
    if len(result.tables) == 1 and not out.is_dir() and out.suffix:
        table = next(iter(result.tables.values()))
        export_scores_tsv(table, out)
        print(f"{table.method} -> {out}")
        return
    out.mkdir(parents=True, exist_ok=True)
    for method, table in sorted(result.tables.items()):
        export_scores_tsv(table, out / f"{method}.tsv")
        print(f"{method} -> {out / (method + '.tsv')}")


def _cmd_rank(args, parser):
    cfg = _load_config(args)
    result = _run(cfg, args, _single_corpus(args, parser))
    out = args.out or "ranking.tsv"
    export_ranking_tsv(result.final, out)
    print(f"{len(result.ranking)} candidates ranked -> {out}")


def _cmd_evaluate(args, parser):
    cfg = _load_config(args)
    if len(args.gold) != 1:
        parser.error("evaluate requires exactly one --gold")
    corpus = _single_corpus(args, parser)
    result = _run(cfg, args, corpus, args.gold[0])
    ranker = cfg["ranker"]
    params = {k: v for k, v in ranker.items() if k != "method"}
    row = [ranker["method"], canonical_json(params), Path(corpus).name,
           result.k, f"{result.eval_result.avp:.6f}"]
    if args.out:
        with open(args.out, "w", newline="", encoding="utf-8") as fh:
            writer = csv.writer(fh)
            writer.writerow(["method", "param_set", "dataset", "K", "avp"])
            writer.writerow(row)
    print(f"dataset={row[2]} K={result.k} AvP={result.eval_result.avp:.4f}")


def _datasets(args, parser):
    if not args.corpus:
        parser.error("at least one --corpus is required")
    if len(args.gold) != len(args.corpus):
        parser.error("each --corpus needs a matching --gold")
    return {Path(c).name: (c, g) for c, g in zip(args.corpus, args.gold)}


def _grid_evaluate(cfg, args, datasets):
    """AvP of every grid cell; pipeline caching makes repeats cheap."""
    grid = cfg.get("grid")
    if not grid or not grid.get("method") or not grid.get("axes"):
        raise ConfigError("config must define grid.target, grid.method and grid.axes")
    target, method = grid["target"], grid["method"]
    if target not in ("scorer", "ranker"):
        raise ConfigError("grid.target must be 'scorer' or 'ranker'")
    param_sets = evaluation.param_grid(grid["axes"])

    def apply(params):
        variant = copy.deepcopy(cfg)
        variant.pop("grid", None)
        if target == "scorer":
            hit = [s for s in variant["scorers"] if s["method"] == method]
            if not hit:
                raise ConfigError(f"grid method {method!r} is not a configured scorer")
            hit[0].update(params)
        else:
            if variant["ranker"]["method"] != method:
                raise ConfigError(f"grid method {method!r} is not the configured ranker")
            variant["ranker"].update(params)
        return config_from_dict({k: v for k, v in variant.items()})

    def evaluate(params, dataset_id):
        corpus, gold = datasets[dataset_id]
        result = _run(apply(params), args, corpus, gold)
        return result.eval_result.avp

    results = evaluation.grid_search(param_sets, list(datasets), evaluate)
    return method, results


def _write_results_csv(path, method, results):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["method", "param_set", "dataset", "K", "avp"])
        for (key, dataset), value in results.items():
            writer.writerow([method, canonical_json(dict(key)), dataset, "",
                             f"{value:.6f}"])


def _read_results_csv(path):
    results = {}
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            key = evaluation.param_key(json.loads(row["param_set"]))
            results[(key, row["dataset"])] = float(row["avp"])
    if not results:
        raise DataError(f"{path}: no result rows")
    return results


def _cmd_grid_search(args, parser):
    cfg = _load_config(args)
    datasets = _datasets(args, parser)
    method, results = _grid_evaluate(cfg, args, datasets)
    out = args.out or "grid_results.csv"
    _write_results_csv(out, method, results)
    print(f"{len(results)} grid cells -> {out}")


def _cmd_cv_select(args, parser):
    if args.results:
        results = _read_results_csv(args.results)
    else:
        cfg = _load_config(args)
        datasets = _datasets(args, parser)
        _, results = _grid_evaluate(cfg, args, datasets)
    chosen = evaluation.cv_select(results, held_out=args.held_out)
    payload = json.dumps(dict(chosen), indent=2, sort_keys=True)
    if args.out:
        Path(args.out).write_text(payload + "\n", encoding="utf-8")
    print(payload)


_COMMANDS = {
    "candidates": _cmd_candidates,
    "score": _cmd_score,
    "rank": _cmd_rank,
    "evaluate": _cmd_evaluate,
    "grid-search": _cmd_grid_search,
    "cv-select": _cmd_cv_select,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        _COMMANDS[args.command](args, parser)
    except ConfigError as exc:
        print(f"termrank: configuration error: {exc}", file=sys.stderr)
        return USAGE_EXIT
    except TermrankError as exc:
        print(f"termrank: {exc}", file=sys.stderr)
        return DATA_EXIT
    except OSError as exc:
        print(f"termrank: {exc}", file=sys.stderr)
        return DATA_EXIT
    return 0


if __name__ == "__main__":
    sys.exit(main())
