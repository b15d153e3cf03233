"""Scorers driven purely by candidate occurrence frequencies.

Covers plain term frequency, average term frequency, TF-IDF, residual IDF,
the one-word-capable C-Value variant, and the Basic/ComboBasic pair that
rewards candidates nested inside (or containing) other candidates.

All logarithms are natural except C-Value's, which is base 2.
"""

import math

from ..scores import ScoreTable

__all__ = [
    "score_tf",
    "score_atf",
    "score_tfidf",
    "score_ridf",
    "score_cvalue",
    "score_basic",
    "score_combobasic",
]


def score_tf(cset):
    return ScoreTable("tf", {c: float(tc.tf) for c, tc in cset.candidates.items()})


def score_atf(cset):
    """Term frequency averaged over the documents containing the candidate."""
    scores = {c: tc.tf / len(tc.doc_tf) for c, tc in cset.candidates.items()}
    return ScoreTable("atf", scores)


def score_tfidf(cset, n_docs):
    scores = {}
    for c, tc in cset.candidates.items():
        dtf = len(tc.doc_tf)
        if dtf > n_docs:
            raise ValueError(f"{c}: document frequency {dtf} exceeds corpus size {n_docs}")
        scores[c] = tc.tf * math.log(n_docs / dtf)
    return ScoreTable("tfidf", scores, {"n_docs": n_docs})


def score_ridf(cset, n_docs):
    """TF-IDF plus the Poisson-deviation correction ln(1 - e^-ATF)."""
    tfidf = score_tfidf(cset, n_docs)
    scores = {}
    for c, tc in cset.candidates.items():
        atf = tc.tf / len(tc.doc_tf)
        scores[c] = tfidf.scores[c] + math.log(1.0 - math.exp(-atf))
    return ScoreTable("ridf", scores, {"n_docs": n_docs})


def score_cvalue(cset):
    """C-Value with one-word support; containing candidates discount tf."""
    scores = {}
    for c, tc in cset.candidates.items():
        supers = cset.supersequences[c]
        weight = math.log2(tc.length_words + 0.1)
        if not supers:
            scores[c] = weight * tc.tf
        else:
            nested = sum(cset.candidates[s].tf for s in supers) / len(supers)
            scores[c] = weight * (tc.tf - nested)
    return ScoreTable("cvalue", scores)


def score_basic(cset, alpha=0.75, multiword_only=False):
    """|t| * ln(tf) + alpha * (number of candidates containing t).

    ``multiword_only`` drops 1-grams to mirror the original multi-word
    formulation.
    """
    scores = {}
    for c, tc in cset.candidates.items():
        if multiword_only and tc.length_words < 2:
            continue
        scores[c] = tc.length_words * math.log(tc.tf) + alpha * cset.e(c)
    return ScoreTable("basic", scores, {"alpha": alpha})


def score_combobasic(cset, alpha=0.75, beta=0.1, multiword_only=False):
    """Basic plus beta * (number of candidates contained in t)."""
    basic = score_basic(cset, alpha, multiword_only)
    scores = {c: s + beta * cset.e_prime(c) for c, s in basic.scores.items()}
    return ScoreTable("combobasic", scores, {"alpha": alpha, "beta": beta})
