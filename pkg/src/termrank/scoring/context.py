"""Context-based scoring: domain coherence via normalized PMI.

Candidates are scored by how strongly they associate with the corpus's
most "domain-coherent" context words: words appearing near the 200 best
candidates (by the Basic score) in a +/- ``window`` token neighbourhood
within the same sentence.

Probabilities are frequency estimates with one shared normalizer, the
corpus token count: P(w) = count(w)/N, P(t) = tf(t)/N and
P(t, w) = co-window count / N.  A pair that never co-occurs contributes
the NPMI lower bound of -1 to averages.
"""

import math
import warnings
from dataclasses import dataclass

from ..scores import ScoreTable, sorted_items
from .._parallel import parallel_map
from .frequency import score_basic

__all__ = ["ContextStats", "DomainCoherenceConfig", "npmi",
           "build_context_stats", "score_domain_coherence"]

_CONTEXT_POS_PREFIXES = ("NN", "JJ", "VB", "RB")


@dataclass(frozen=True)
class DomainCoherenceConfig:
    window: int = 5
    top_terms: int = 200
    context_words: int = 50
    basic_alpha: float = 0.75
    min_doc_fraction: float = 0.25


@dataclass
class ContextStats:
    window: int
    cooccurrence: dict      # (canonical, word) -> count
    word_counts: dict       # word -> corpus count
    candidate_counts: dict  # canonical -> tf
    word_doc_freq: dict     # word -> number of documents containing it
    eligible_words: set     # nouns/adjectives/verbs/adverbs seen in the corpus
    n_tokens: int


def npmi(p_tw, p_t, p_w):
    """ln(p_tw / (p_t * p_w)) / -ln(p_tw); 0 by convention when p_tw >= 1."""
    if p_tw >= 1.0:
        return 0.0
    return math.log(p_tw / (p_t * p_w)) / -math.log(p_tw)


def _doc_word_stats(doc):
    counts = {}
    eligible = set()
    for sentence in doc.sentences:
        for tok in sentence:
            counts[tok.lemma] = counts.get(tok.lemma, 0) + 1
            if tok.pos.startswith(_CONTEXT_POS_PREFIXES):
                eligible.add(tok.lemma)
    return counts, eligible


def _doc_cooccurrence(doc, spans, window):
    """Count (candidate, context word) pairs for one document."""
    cooc = {}
    for canonical, s_idx, offset, length in spans:
        sentence = doc.sentences[s_idx]
        lo = max(0, offset - window)
        hi = min(len(sentence), offset + length + window)
        for i in range(lo, offset):
            key = (canonical, sentence[i].lemma)
            cooc[key] = cooc.get(key, 0) + 1
        for i in range(offset + length, hi):
            key = (canonical, sentence[i].lemma)
            cooc[key] = cooc.get(key, 0) + 1
    return cooc


def build_context_stats(cset, corpus, window=5, threads=1):
    """Accumulate word counts and candidate/word co-window counts."""
    per_doc = parallel_map(_doc_word_stats, corpus.documents, threads)
    word_counts = {}
    word_doc_freq = {}
    eligible = set()
    for counts, doc_eligible in per_doc:
        for w, n in counts.items():
            word_counts[w] = word_counts.get(w, 0) + n
            word_doc_freq[w] = word_doc_freq.get(w, 0) + 1
        eligible |= doc_eligible

    spans_by_doc = {doc.id: [] for doc in corpus.documents}
    for canonical, tc in cset.candidates.items():
        for doc_id, s_idx, offset in tc.occurrences:
            spans_by_doc[doc_id].append((canonical, s_idx, offset, tc.length_words))

    partials = parallel_map(
        lambda doc: _doc_cooccurrence(doc, spans_by_doc[doc.id], window),
        corpus.documents,
        threads,
    )
    cooccurrence = {}
    for part in partials:
        for key, n in part.items():
            cooccurrence[key] = cooccurrence.get(key, 0) + n

    return ContextStats(
        window=window,
        cooccurrence=cooccurrence,
        word_counts=word_counts,
        candidate_counts={c: tc.tf for c, tc in cset.candidates.items()},
        word_doc_freq=word_doc_freq,
        eligible_words=eligible,
        n_tokens=corpus.total_word_count,
    )


def _pair_npmi(stats, canonical, word):
    count = stats.cooccurrence.get((canonical, word), 0)
    if count == 0:
        return -1.0
    n = stats.n_tokens
    return npmi(count / n, stats.candidate_counts[canonical] / n,
                stats.word_counts[word] / n)


def score_domain_coherence(cset, corpus, cfg=None, threads=1):
    """Three steps: seed terms by Basic, pick context words by averaged
    NPMI against the seeds, then score every candidate by its mean NPMI
    with those context words."""
    cfg = cfg or DomainCoherenceConfig()
    stats = build_context_stats(cset, corpus, cfg.window, threads)

    seeds = [c for c, _ in sorted_items(score_basic(cset, cfg.basic_alpha))]
    seeds = seeds[: cfg.top_terms]

    n_docs = len(corpus.documents)
    min_df = math.ceil(n_docs * cfg.min_doc_fraction)
    candidate_words = sorted(
        w for w in stats.eligible_words if stats.word_doc_freq[w] >= min_df
    )
    if not candidate_words or not seeds:
        warnings.warn("domain coherence: no eligible context words; all scores are 0")
        return ScoreTable("domain_coherence",
                          {c: 0.0 for c in cset.candidates},
                          {"window": cfg.window})

    word_score = {
        w: sum(_pair_npmi(stats, t, w) for t in seeds) / len(seeds)
        for w in candidate_words
    }
    context = sorted(candidate_words, key=lambda w: (-word_score[w], w))
    context = context[: cfg.context_words]

    scores = {}
    unseen = []
    for c in cset.candidates:
        if all(stats.cooccurrence.get((c, w), 0) == 0 for w in context):
            unseen.append(c)
        else:
            scores[c] = sum(_pair_npmi(stats, c, w) for w in context) / len(context)

    if not scores:
        warnings.warn("domain coherence: no candidate co-occurs with any "
                      "context word; all scores are 0")
        return ScoreTable("domain_coherence",
                          {c: 0.0 for c in cset.candidates},
                          {"window": cfg.window})
    sentinel = min(scores.values()) - 1.0
    for c in unseen:
        scores[c] = sentinel
    return ScoreTable("domain_coherence", scores, {"window": cfg.window})
