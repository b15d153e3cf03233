"""Scorers backed by precomputed encyclopedia resources.

Two resource files replace raw dump processing: a link-statistics table
(occurrences as hyperlink caption vs. total occurrences per term) and a
text-format embedding file whose vocabulary uses the same canonical
underscore-joined keys as the candidate set.
"""

import math
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, DataError, ParseError
from ..scores import ScoreTable
from .._parallel import parallel_map

__all__ = [
    "LinkStatsTable",
    "EmbeddingModel",
    "KeyConceptConfig",
    "load_link_stats",
    "load_embeddings",
    "score_wiki_presence",
    "score_link_probability",
    "extract_key_concepts",
    "score_key_concept_relatedness",
]


@dataclass
class LinkStatsTable:
    entries: dict               # canonical -> (hyperlink count H, total count W)
    threshold: float = 0.018

    def __post_init__(self):
        if self.threshold < 0:
            raise DataError("link probability threshold must be >= 0")


@dataclass
class EmbeddingModel:
    dimension: int
    vectors: dict               # token -> np.ndarray of shape (dimension,)

    def __contains__(self, token):
        return token in self.vectors


@dataclass(frozen=True)
class KeyConceptConfig:
    per_doc: int = 15            # key concepts extracted per document
    total: int = 500             # key concepts kept overall
    k: int = 2                   # nearest key concepts averaged
    first_words_limit: int = 800

    def __post_init__(self):
        if self.per_doc < 1:
            raise ConfigError("per_doc must be >= 1")
        if self.k > self.total:
            raise ConfigError("k must not exceed the total key concept count")


def load_link_stats(path, threshold=0.018):
    """Read ``term<TAB>H<TAB>W`` rows."""
    path = Path(path)
    entries = {}
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip() or line.startswith("#"):
                continue
            fields = line.split("\t")
            if len(fields) != 3:
                raise ParseError(path, line_no, "expected 'term<TAB>H<TAB>W'")
            term, h_str, w_str = fields
            try:
                h, w = int(h_str), int(w_str)
            except ValueError as exc:
                raise ParseError(path, line_no, "non-numeric count") from exc
            if h < 0 or w < 0:
                raise ParseError(path, line_no, "negative count")
            if h > w:
                raise ParseError(path, line_no,
                                 f"hyperlink count {h} exceeds total count {w}")
            if term in entries:
                raise ParseError(path, line_no, f"duplicate term {term!r}")
            entries[term] = (h, w)
    return LinkStatsTable(entries, threshold)


def load_embeddings(path):
    """Read the common text vector format: a ``<size> <dim>`` header, then
    one ``token v1 ... vdim`` line per word."""
    path = Path(path)
    vectors = {}
    with open(path, encoding="utf-8") as fh:
        header = fh.readline()
        parts = header.split()
        if len(parts) != 2:
            raise ParseError(path, 1, "expected header '<vocab_size> <dimension>'")
        try:
            _, dimension = int(parts[0]), int(parts[1])
        except ValueError as exc:
            raise ParseError(path, 1, "non-numeric header") from exc
        if dimension < 1:
            raise ParseError(path, 1, "dimension must be positive")
        for line_no, raw in enumerate(fh, start=2):
            if not raw.strip():
                continue
            fields = raw.split()
            if len(fields) != dimension + 1:
                raise ParseError(
                    path, line_no,
                    f"expected {dimension} components, got {len(fields) - 1}",
                )
            token = fields[0]
            try:
                vec = np.array([float(x) for x in fields[1:]], dtype=np.float64)
            except ValueError as exc:
                raise ParseError(path, line_no, "non-numeric component") from exc
            if np.isnan(vec).any():
                raise ParseError(path, line_no, "NaN component")
            if token in vectors:
                raise ParseError(path, line_no, f"duplicate token {token!r}")
            vectors[token] = vec
    return EmbeddingModel(dimension, vectors)


def score_wiki_presence(cset, links):
    """1 if the candidate ever appears as a hyperlink caption, else 0."""
    scores = {}
    for c in cset.candidates:
        h, _ = links.entries.get(c, (0, 0))
        scores[c] = 1.0 if h > 0 else 0.0
    return ScoreTable("wiki_presence", scores)


def score_link_probability(cset, links):
    """H/W when at least the threshold, else 0."""
    scores = {}
    for c in cset.candidates:
        entry = links.entries.get(c)
        if entry is None or entry[1] == 0:
            scores[c] = 0.0
            continue
        ratio = entry[0] / entry[1]
        scores[c] = ratio if ratio >= links.threshold else 0.0
    return ScoreTable("link_probability", scores, {"threshold": links.threshold})


def _doc_key_concepts(doc, cset, emb, cfg):
    """Top per-document key concepts by length * in-document occurrences."""
    prefix = [0]
    for sentence in doc.sentences:
        prefix.append(prefix[-1] + len(sentence))
    eligible = []
    for canonical, tc in cset.candidates.items():
        doc_count = tc.doc_tf.get(doc.id, 0)
        if doc_count < 2 or canonical not in emb.vectors:
            continue
        first = min(
            prefix[s_idx] + offset
            for doc_id, s_idx, offset in tc.occurrences
            if doc_id == doc.id
        )
        if first >= cfg.first_words_limit:
            continue
        eligible.append((canonical, tc.length_words * doc_count))
    eligible.sort(key=lambda item: (-item[1], item[0]))
    return [canonical for canonical, _ in eligible[: cfg.per_doc]]


def extract_key_concepts(corpus, cset, emb, cfg=None, threads=1):
    """Aggregate per-document key concepts; returns (concept, count) pairs,
    most frequently selected first."""
    cfg = cfg or KeyConceptConfig()
    per_doc = parallel_map(
        lambda d: _doc_key_concepts(d, cset, emb, cfg), corpus.documents, threads
    )
    counts = {}
    for concepts in per_doc:
        for c in concepts:
            counts[c] = counts.get(c, 0) + 1
    ranked = sorted(counts.items(), key=lambda item: (-item[1], item[0]))
    return ranked[: cfg.total]


def _unit_rows(matrix):
    norms = np.linalg.norm(matrix, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return matrix / safe


def score_key_concept_relatedness(cset, emb, key_concepts, cfg=None):
    """Mean cosine similarity to the k nearest key concepts; candidates
    outside the embedding vocabulary score 0."""
    cfg = cfg or KeyConceptConfig()
    if not key_concepts:
        raise DataError("key concept list is empty")
    if cfg.k > len(key_concepts):
        raise ConfigError(
            f"k={cfg.k} exceeds the number of key concepts ({len(key_concepts)})"
        )
    names = [c for c, _ in key_concepts]
    keys = _unit_rows(np.array([emb.vectors[c] for c in names], dtype=np.float64))

    scores = {}
    for c in cset.candidates:
        vec = emb.vectors.get(c)
        if vec is None:
            scores[c] = 0.0
            continue
        norm = math.sqrt(float(vec @ vec))
        if norm == 0.0:
            scores[c] = 0.0
            continue
        cosines = keys @ (vec / norm)
        cosines[::-1].sort()
        scores[c] = float(cosines[: cfg.k].mean())
    return ScoreTable("key_concept_relatedness", scores,
                      {"per_doc": cfg.per_doc, "total": cfg.total, "k": cfg.k})
