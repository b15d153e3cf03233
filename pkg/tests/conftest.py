import numpy as np
import pytest

from termrank.corpus import AnnotatedCorpus, Document, Token
from termrank.candidates import (CandidateFilterConfig, CandidateSet,
                                 TermCandidate, collect_candidates)

# Lemmas safe for the default filters: >= 3 chars, alphanumeric, not stop words.
WORDS = ["alpha", "beta", "gamma", "delta", "kappa", "sigma", "omega", "theta"]


def make_sentence(*pairs):
    """pairs of (lemma, pos); surface equals lemma."""
    return tuple(Token(w, w, p) for w, p in pairs)


def nn_sentence(*lemmas):
    return make_sentence(*((w, "NN") for w in lemmas))


def make_corpus(doc_sentences):
    """{doc_id: [sentence, ...]} -> AnnotatedCorpus."""
    docs = tuple(
        Document(doc_id, tuple(sentences))
        for doc_id, sentences in doc_sentences.items()
    )
    return AnnotatedCorpus(docs)


def random_corpus(rng, n_docs=3, sentences_per_doc=4, sentence_len=5,
                  vocab=WORDS):
    """Random all-noun corpus over the filter-safe vocabulary."""
    docs = {}
    for d in range(n_docs):
        sents = []
        for _ in range(sentences_per_doc):
            lemmas = [vocab[rng.integers(0, len(vocab))]
                      for _ in range(sentence_len)]
            sents.append(nn_sentence(*lemmas))
        docs[f"d{d:02d}"] = sents
    return make_corpus(docs)


def random_candidate_set(rng, max_candidates=20):
    """Random corpus run through the collector; never empty."""
    while True:
        corpus = random_corpus(
            rng,
            n_docs=int(rng.integers(2, 5)),
            sentences_per_doc=int(rng.integers(2, 5)),
            sentence_len=int(rng.integers(3, 7)),
            vocab=WORDS[: int(rng.integers(4, len(WORDS) + 1))],
        )
        cfg = CandidateFilterConfig(ngram_orders=(1, 2, 3),
                                    min_term_frequency=int(rng.integers(1, 3)))
        cset = collect_candidates(corpus, cfg)
        if 0 < len(cset) <= max_candidates:
            return corpus, cfg, cset


def build_candidate_set(spec):
    """Assemble a CandidateSet from {canonical: (tf, doc_tf)} by hand.

    Containment is enumerated over contiguous word spans, matching what
    the collector produces.
    """
    candidates = {}
    for canonical, (tf, doc_tf) in spec.items():
        occs = []
        for doc_id, count in doc_tf.items():
            occs.extend((doc_id, 0, i) for i in range(count))
        candidates[canonical] = TermCandidate(
            canonical=canonical,
            length_words=canonical.count("_") + 1,
            tf=tf,
            doc_tf=dict(doc_tf),
            occurrences=occs,
        )
    supers = {c: set() for c in candidates}
    subs = {c: set() for c in candidates}
    for canonical in candidates:
        words = canonical.split("_")
        for sub_len in range(1, len(words)):
            for start in range(len(words) - sub_len + 1):
                sub = "_".join(words[start:start + sub_len])
                if sub in candidates:
                    supers[sub].add(canonical)
                    subs[canonical].add(sub)
    return CandidateSet(
        candidates=candidates,
        supersequences={c: tuple(sorted(s)) for c, s in supers.items()},
        subsequences={c: tuple(sorted(s)) for c, s in subs.items()},
    )


def planted_pu_problem(seed=101, n=500, n_planted=50, noise=0.05,
                       n_features=6):
    """Synthetic PU setup: planted candidates carry an indicator feature
    (plus Gaussian noise) and the highest frequencies, so they are both
    separable and exactly the ComboBasic seeds."""
    rng = np.random.default_rng(seed)
    names = [f"c{i:03d}" for i in range(n)]
    planted = frozenset(names[:n_planted])
    spec = {}
    for i, name in enumerate(names):
        tf = 100 + i if name in planted else 2 + (i % 40)
        spec[name] = (tf, {"d1": tf})
    cset = build_candidate_set(spec)
    ordered = sorted(names)
    indicator = np.array([1.0 if nm in planted else 0.0 for nm in ordered])
    values = np.column_stack([
        indicator + rng.normal(0.0, noise, size=n) for _ in range(n_features)
    ])
    from termrank.ranking import FeatureMatrix
    matrix = FeatureMatrix(ordered, [f"f{j}" for j in range(n_features)], values)
    return matrix, cset, planted


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
