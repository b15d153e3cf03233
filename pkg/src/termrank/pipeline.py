"""End-to-end pipeline: corpus -> candidates -> scorers -> ranking.

Every stage consults the cache first; keys chain each stage's
configuration with its upstream keys plus fingerprints of the input
files, so editing any input or any configuration leaf recomputes exactly
the affected suffix of the pipeline.  Resource files are validated
before any work starts.
"""

import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

from . import evaluation
from .cache import Cacher, cache_key, resolve_cache_dir
from .candidates import (CandidateFilterConfig, collect_candidates,
                         load_stop_words)
from .corpus import load_annotated_corpus, load_plain_corpus
from .errors import ConfigError, DataError
from .ranking import (PuConfig, build_feature_matrix, linear_combination,
                      pu_atr, rank_by_score, voting)
from .scores import ScoreTable
from .scoring.context import DomainCoherenceConfig, score_domain_coherence
from .scoring.frequency import (score_atf, score_basic, score_combobasic,
                                score_cvalue, score_ridf, score_tf,
                                score_tfidf)
from .scoring.reference import (load_reference_table, score_domain_pertinence,
                                score_relevance, score_weirdness)
from .scoring.topic import (TopicModelConfig, fit_topic_model,
                            score_novel_topic_model)
from .scoring.wiki import (KeyConceptConfig, extract_key_concepts,
                           load_embeddings, load_link_stats,
                           score_link_probability, score_wiki_presence)

__all__ = ["PipelinePaths", "StageReport", "PipelineResult", "run_pipeline",
           "export_ranking_tsv"]

logger = logging.getLogger(__name__)

REFERENCE_METHODS = {"domain_pertinence", "weirdness", "relevance"}
LINK_METHODS = {"wiki_presence", "link_probability"}
EMBEDDING_METHODS = {"key_concept_relatedness"}


@dataclass
class PipelinePaths:
    corpus: str
    gold: str = None
    reference: str = None
    link_stats: str = None
    embeddings: str = None


@dataclass
class StageReport:
    name: str
    seconds: float
    cache_hit: bool


@dataclass
class PipelineResult:
    candidates: object
    tables: dict                 # method -> ScoreTable
    final: ScoreTable
    ranking: list
    eval_result: object = None
    k: int = None
    stages: list = field(default_factory=list)

    def cache_hits(self):
        return {s.name for s in self.stages if s.cache_hit}


def _fingerprint(path):
    p = Path(path)
    stat = p.stat()
    return {"path": str(p.resolve()), "size": stat.st_size,
            "mtime_ns": stat.st_mtime_ns}


def validate_resources(cfg, paths):
    """Fail before any work if a configured scorer lacks its resource file."""
    methods = {s["method"] for s in cfg["scorers"]}

    def need(path, what):
        if path is None:
            raise DataError(f"configured scorers require a {what} file")
        if not Path(path).is_file():
            raise DataError(f"{what} file not found: {path}")

    if methods & REFERENCE_METHODS:
        need(paths.reference, "reference table")
    if methods & LINK_METHODS:
        need(paths.link_stats, "link statistics")
    if methods & EMBEDDING_METHODS:
        need(paths.embeddings, "embeddings")
    if not Path(paths.corpus).exists():
        raise DataError(f"corpus not found: {paths.corpus}")


def _candidate_filter(cfg, stop_words_path):
    cand = cfg["candidates"]
    stop_words = (load_stop_words(stop_words_path)
                  if stop_words_path else None)
    kwargs = dict(
        ngram_orders=tuple(range(cand["ngram_min"], cand["ngram_max"] + 1)),
        min_lemma_length=cand["min_lemma_length"],
        noise_pattern=cand["noise_pattern"],
        pos_pattern=cand["pos_pattern"],
        min_term_frequency=cand["min_term_frequency"],
    )
    if stop_words is not None:
        kwargs["stop_words"] = stop_words
    return CandidateFilterConfig(**kwargs)


class _Stage:
    """Cache-aware execution of one pipeline step."""

    def __init__(self, cacher, report):
        self.cacher = cacher
        self.report = report

    def run(self, name, stage_config, upstream, compute):
        key = cache_key(stage_config, upstream)
        start = time.perf_counter()
        if self.cacher is not None:
            hit, payload = self.cacher.get(key)
            if hit:
                elapsed = time.perf_counter() - start
                logger.info("stage %-28s cache hit      (%.3fs)", name, elapsed)
                self.report.append(StageReport(name, elapsed, True))
                return key, payload
        payload = compute()
        if self.cacher is not None:
            self.cacher.put(key, payload)
        elapsed = time.perf_counter() - start
        logger.info("stage %-28s computed       (%.3fs)", name, elapsed)
        self.report.append(StageReport(name, elapsed, False))
        return key, payload


def _score_one(method, params, corpus, cset, paths, threads):
    if method == "tf":
        return score_tf(cset)
    if method == "atf":
        return score_atf(cset)
    if method == "tfidf":
        return score_tfidf(cset, len(corpus.documents))
    if method == "ridf":
        return score_ridf(cset, len(corpus.documents))
    if method == "cvalue":
        return score_cvalue(cset)
    if method == "basic":
        return score_basic(cset, params["alpha"], params["multiword_only"])
    if method == "combobasic":
        return score_combobasic(cset, params["alpha"], params["beta"],
                                params["multiword_only"])
    if method == "domain_coherence":
        dc = DomainCoherenceConfig(
            window=params["window"], top_terms=params["top_terms"],
            context_words=params["context_words"],
            basic_alpha=params["basic_alpha"],
            min_doc_fraction=params["min_doc_fraction"])
        return score_domain_coherence(cset, corpus, dc, threads)
    if method in REFERENCE_METHODS:
        ref = load_reference_table(paths.reference, params["smoothing"])
        if method == "domain_pertinence":
            return score_domain_pertinence(cset, ref)
        if method == "weirdness":
            return score_weirdness(cset, corpus, ref)
        return score_relevance(cset, corpus, ref)
    if method == "novel_topic_model":
        tm_cfg = TopicModelConfig(
            n_topics=params["n_topics"], alpha=params["alpha"],
            beta=params["beta"],
            lambda_background=params["lambda_background"],
            lambda_docspec=params["lambda_docspec"],
            lambda_general=params["lambda_general"],
            iterations=params["iterations"], top_words=params["top_words"],
            seed=params["seed"])
        model = fit_topic_model(corpus, tm_cfg)
        return score_novel_topic_model(cset, model)
    if method in LINK_METHODS:
        links = load_link_stats(paths.link_stats,
                                params.get("threshold", 0.018))
        if method == "wiki_presence":
            return score_wiki_presence(cset, links)
        return score_link_probability(cset, links)
    if method == "key_concept_relatedness":
        emb = load_embeddings(paths.embeddings)
        kc_cfg = KeyConceptConfig(
            per_doc=params["per_doc"], total=params["total"], k=params["k"],
            first_words_limit=params["first_words_limit"])
        concepts = extract_key_concepts(corpus, cset, emb, kc_cfg, threads)
        if not concepts:
            raise DataError("no key concepts found; check the embedding "
                            "vocabulary against the candidate set")
        if kc_cfg.k > len(concepts):
            kc_cfg = KeyConceptConfig(per_doc=kc_cfg.per_doc,
                                      total=kc_cfg.total,
                                      k=len(concepts),
                                      first_words_limit=kc_cfg.first_words_limit)
        from .scoring.wiki import score_key_concept_relatedness
        return score_key_concept_relatedness(cset, emb, concepts, kc_cfg)
    raise ConfigError(f"unknown scorer method {method!r}")


def _resource_fingerprint(method, paths):
    if method in REFERENCE_METHODS:
        return _fingerprint(paths.reference)
    if method in LINK_METHODS:
        return _fingerprint(paths.link_stats)
    if method in EMBEDDING_METHODS:
        return _fingerprint(paths.embeddings)
    return None


def _rank(cfg, tables, cset):
    ranker = cfg["ranker"]
    method = ranker["method"]
    if method == "single":
        return tables[ranker["feature"]]
    matrix = build_feature_matrix([tables[f] for f in ranker["features"]])
    if method == "voting":
        return voting(matrix)
    if method == "linear":
        weights = ranker["weights"]
        if weights is None:
            weights = [1.0 / len(ranker["features"])] * len(ranker["features"])
        return linear_combination(matrix, weights)
    if method == "pu_atr":
        pu_cfg = PuConfig(
            seed_count=ranker["seed_count"],
            spy_fraction=ranker["spy_fraction"],
            neg_threshold=ranker["neg_threshold"],
            seed_alpha=ranker["seed_alpha"],
            seed_beta=ranker["seed_beta"],
            rng_seed=ranker["rng_seed"],
            learning_rate=ranker["learning_rate"],
            l2=ranker["l2"],
            epochs=ranker["epochs"])
        return pu_atr(matrix, cset, pu_cfg)
    raise ConfigError(f"unknown ranker method {method!r}")


def run_pipeline(cfg, paths, cache_dir=None, threads=1, use_cache=True,
                 stop_words_path=None):
    """Execute all configured stages; returns a :class:`PipelineResult`."""
    validate_resources(cfg, paths)
    cacher = Cacher(resolve_cache_dir(cache_dir)) if use_cache else None
    report = []
    stage = _Stage(cacher, report)

    def load_corpus():
        if cfg["preprocessing"]["input_format"] == "plain":
            return load_plain_corpus(paths.corpus, threads)
        return load_annotated_corpus(paths.corpus)

    corpus_key, corpus = stage.run(
        "corpus",
        {"stage": "corpus", "preprocessing": cfg["preprocessing"],
         "input": _fingerprint(paths.corpus)},
        (),
        load_corpus,
    )

    filt = _candidate_filter(cfg, stop_words_path)
    cand_stage_cfg = {"stage": "candidates", "candidates": cfg["candidates"]}
    if stop_words_path:
        cand_stage_cfg["stop_words"] = _fingerprint(stop_words_path)
    cand_key, cset = stage.run(
        "candidates", cand_stage_cfg, (corpus_key,),
        lambda: collect_candidates(corpus, filt, threads),
    )
    if not cset.candidates:
        raise DataError("candidate collection produced an empty set; "
                        "relax the filters or check the corpus")

    tables = {}
    scorer_keys = []
    for scorer in cfg["scorers"]:
        method = scorer["method"]
        params = {k: v for k, v in scorer.items() if k != "method"}
        stage_cfg = {"stage": "score", "scorer": scorer}
        resource = _resource_fingerprint(method, paths)
        if resource is not None:
            stage_cfg["resource"] = resource
        key, table = stage.run(
            f"score:{method}", stage_cfg, (cand_key,),
            lambda m=method, p=params: _score_one(m, p, corpus, cset, paths,
                                                  threads),
        )
        tables[method] = table
        scorer_keys.append(key)

    _, final = stage.run(
        "ranking",
        {"stage": "rank", "ranker": cfg["ranker"]},
        tuple(sorted(scorer_keys)) + (cand_key,),
        lambda: _rank(cfg, tables, cset),
    )
    ranking = rank_by_score(final)

    eval_result = None
    k = None
    if paths.gold is not None:
        gold = evaluation.load_gold(
            paths.gold, lemmatize=cfg["evaluation"]["lemmatize_gold"])
        k = evaluation.choose_k(cset, gold)
        eval_result = evaluation.avp(ranking, gold, k)
        logger.info("evaluation: K=%d AvP=%.4f", k, eval_result.avp)

    return PipelineResult(
        candidates=cset,
        tables=tables,
        final=final,
        ranking=ranking,
        eval_result=eval_result,
        k=k,
        stages=report,
    )


def export_ranking_tsv(final_table, path):
    """Write ``rank<TAB>canonical<TAB>score`` rows, best candidate first."""
    from .scores import sorted_items
    with open(path, "w", encoding="utf-8") as fh:
        for rank, (canonical, score) in enumerate(sorted_items(final_table), 1):
            fh.write(f"{rank}\t{canonical}\t{score:.6f}\n")
