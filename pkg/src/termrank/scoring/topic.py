"""Topic-model scoring.

A collapsed Gibbs sampler fits a model in which every token is routed to
one of three kinds of topics: a single background topic, a per-document
topic, or one of ``n_topics`` general topics shared across the corpus.
Candidates are then scored by how probable their words are under the most
favourable topic, restricted to words appearing in some topic's top-word
set, and damped by log term frequency.
"""

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ConfigError, DataError
from ..scores import ScoreTable
from ._gibbs import _init_tokens, _sweep

__all__ = ["TopicModelConfig", "TopicModel", "fit_topic_model",
           "score_novel_topic_model", "dump_topic_top_words"]


@dataclass(frozen=True)
class TopicModelConfig:
    n_topics: int = 20
    alpha: float = None          # doc-topic prior; None -> 50 / n_topics
    beta: float = 0.01           # topic-word prior
    lambda_background: float = 0.1
    lambda_docspec: float = 0.1
    lambda_general: float = 0.8
    iterations: int = 500
    top_words: int = 200
    seed: int = 13

    def __post_init__(self):
        if self.n_topics < 1:
            raise ConfigError("n_topics must be >= 1")
        if self.iterations < 0:
            raise ConfigError("iterations must be >= 0")
        if self.alpha is None:
            object.__setattr__(self, "alpha", 50.0 / self.n_topics)
        lam = (self.lambda_background, self.lambda_docspec, self.lambda_general)
        if min(lam) <= 0:
            raise ConfigError("route priors must be positive")


@dataclass
class TopicModel:
    config: TopicModelConfig
    vocabulary: tuple            # sorted words
    word_index: dict
    doc_ids: tuple
    phi_general: np.ndarray      # (n_topics, V)
    phi_background: np.ndarray   # (V,)
    phi_docspec: np.ndarray      # (n_docs, V)
    top_general: list            # frozenset per general topic
    top_background: frozenset
    top_docspec: list            # frozenset per document
    top_union: frozenset


def _top_set(phi_row, vocabulary, k):
    # Stable argsort on the negated row: ties resolve to the earlier index,
    # i.e. the alphabetically smaller word, since the vocabulary is sorted.
    order = np.argsort(-phi_row, kind="stable")[: min(k, len(vocabulary))]
    return frozenset(vocabulary[i] for i in order)


def fit_topic_model(corpus, cfg=None):
    """Run the sampler; deterministic for a fixed (corpus, config) pair."""
    cfg = cfg or TopicModelConfig()
    vocabulary = tuple(sorted({
        t.lemma for doc in corpus.documents for s in doc.sentences for t in s
    }))
    if len(vocabulary) < 1:
        raise DataError("cannot fit a topic model on an empty vocabulary")
    word_index = {w: i for i, w in enumerate(vocabulary)}
    doc_ids = tuple(d.id for d in corpus.documents)

    words = []
    docs = []
    for d_idx, doc in enumerate(corpus.documents):
        for sentence in doc.sentences:
            for tok in sentence:
                words.append(word_index[tok.lemma])
                docs.append(d_idx)
    words = np.asarray(words, dtype=np.int64)
    docs = np.asarray(docs, dtype=np.int64)
    n_tokens = len(words)
    n_docs = len(doc_ids)
    V = len(vocabulary)
    T = cfg.n_topics

    lam_total = cfg.lambda_background + cfg.lambda_docspec + cfg.lambda_general
    lam_bg = cfg.lambda_background / lam_total
    lam_doc = cfg.lambda_docspec / lam_total
    lam_gen = cfg.lambda_general / lam_total

    z = np.zeros(n_tokens, dtype=np.int64)
    n_bg_word = np.zeros(V, dtype=np.int64)
    n_doc_word = np.zeros((n_docs, V), dtype=np.int64)
    n_topic_word = np.zeros((T, V), dtype=np.int64)
    n_doc_topic = np.zeros((n_docs, T), dtype=np.int64)
    n_bg_total = np.zeros(1, dtype=np.int64)
    n_doc_total = np.zeros(n_docs, dtype=np.int64)
    n_topic_total = np.zeros(T, dtype=np.int64)
    n_doc_general = np.zeros(n_docs, dtype=np.int64)
    probs = np.zeros(T + 2, dtype=np.float64)

    rng = np.random.default_rng(cfg.seed)
    _init_tokens(words, docs, z, rng.random(n_tokens), lam_bg, lam_doc,
                 n_bg_word, n_doc_word, n_topic_word, n_doc_topic,
                 n_bg_total, n_doc_total, n_topic_total, n_doc_general, T)
    for _ in range(cfg.iterations):
        _sweep(words, docs, z, rng.random(n_tokens), probs,
               lam_bg, lam_doc, lam_gen, cfg.alpha, cfg.beta,
               n_bg_word, n_doc_word, n_topic_word, n_doc_topic,
               n_bg_total, n_doc_total, n_topic_total, n_doc_general, T, V)

    v_beta = V * cfg.beta
    phi_general = (n_topic_word + cfg.beta) / (n_topic_total[:, None] + v_beta)
    phi_background = (n_bg_word + cfg.beta) / (n_bg_total[0] + v_beta)
    phi_docspec = (n_doc_word + cfg.beta) / (n_doc_total[:, None] + v_beta)

    top_general = [_top_set(phi_general[t], vocabulary, cfg.top_words)
                   for t in range(T)]
    top_background = _top_set(phi_background, vocabulary, cfg.top_words)
    top_docspec = [_top_set(phi_docspec[d], vocabulary, cfg.top_words)
                   for d in range(n_docs)]
    union = frozenset().union(top_background, *top_general, *top_docspec)

    return TopicModel(
        config=cfg,
        vocabulary=vocabulary,
        word_index=word_index,
        doc_ids=doc_ids,
        phi_general=phi_general,
        phi_background=phi_background,
        phi_docspec=phi_docspec,
        top_general=top_general,
        top_background=top_background,
        top_docspec=top_docspec,
        top_union=union,
    )


def score_novel_topic_model(cset, model):
    """ln(tf) times the summed best-topic probabilities of the candidate's
    words, counting only words that made some top-word set."""
    max_phi = np.maximum(model.phi_general.max(axis=0), model.phi_background)
    if len(model.phi_docspec):
        max_phi = np.maximum(max_phi, model.phi_docspec.max(axis=0))

    scores = {}
    for c, tc in cset.candidates.items():
        total = 0.0
        for word in c.split("_"):
            if word in model.top_union:
                total += max_phi[model.word_index[word]]
        scores[c] = math.log(tc.tf) * total
    return ScoreTable("novel_topic_model", scores,
                      {"n_topics": model.config.n_topics,
                       "seed": model.config.seed})


def dump_topic_top_words(model, path, per_topic=20):
    """Inspection helper: top words of every topic, one row per topic."""
    rows = []
    for t in range(model.config.n_topics):
        order = np.argsort(-model.phi_general[t], kind="stable")[:per_topic]
        rows.append((f"general_{t}", [model.vocabulary[i] for i in order]))
    order = np.argsort(-model.phi_background, kind="stable")[:per_topic]
    rows.append(("background", [model.vocabulary[i] for i in order]))
    for d, doc_id in enumerate(model.doc_ids):
        order = np.argsort(-model.phi_docspec[d], kind="stable")[:per_topic]
        rows.append((f"doc_{doc_id}", [model.vocabulary[i] for i in order]))
    with open(path, "w", encoding="utf-8") as fh:
        for name, words in rows:
            fh.write(name + "\t" + " ".join(words) + "\n")
