"""Scorers contrasting target-corpus frequencies with a reference corpus."""

import math
from dataclasses import dataclass, field
from pathlib import Path

from ..errors import DataError, ParseError
from ..scores import ScoreTable

__all__ = [
    "ReferenceTable",
    "load_reference_table",
    "build_reference_table",
    "score_domain_pertinence",
    "score_weirdness",
    "score_relevance",
]


@dataclass
class ReferenceTable:
    frequencies: dict          # canonical term -> count
    total_words: int
    smoothing: float = 1.0

    def __post_init__(self):
        if self.total_words <= 0:
            raise DataError("reference table total word count must be positive")
        if self.smoothing <= 0:
            raise DataError("reference smoothing must be positive")
        if self.frequencies and max(self.frequencies.values()) > self.total_words:
            raise DataError("reference frequency exceeds total word count")

    def freq(self, canonical):
        """Reference frequency with smoothing for missing or zero counts."""
        return max(self.frequencies.get(canonical, 0), self.smoothing)


def load_reference_table(path, smoothing=1.0):
    """Read a ``#total <N>`` header followed by ``term<TAB>count`` rows."""
    path = Path(path)
    frequencies = {}
    total = None
    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if not line.strip():
                continue
            if line.startswith("#total"):
                if total is not None:
                    raise ParseError(path, line_no, "duplicate '#total' header")
                try:
                    total = int(line.split()[1])
                except (IndexError, ValueError) as exc:
                    raise ParseError(path, line_no, "malformed '#total' header") from exc
                continue
            if total is None:
                raise ParseError(path, line_no, "missing '#total <N>' header")
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(path, line_no, "expected 'term<TAB>count'")
            term, count_str = fields
            try:
                count = int(count_str)
            except ValueError as exc:
                raise ParseError(path, line_no, f"non-integer count {count_str!r}") from exc
            if count < 0:
                raise ParseError(path, line_no, f"negative count for {term!r}")
            if term in frequencies:
                raise ParseError(path, line_no, f"duplicate term {term!r}")
            frequencies[term] = count
    if total is None:
        raise ParseError(path, 1, "missing '#total <N>' header")
    return ReferenceTable(frequencies, total, smoothing)


def build_reference_table(corpus, orders=(1, 2, 3, 4), smoothing=1.0):
    """Count every n-gram canonical of a corpus into a ReferenceTable.

    Plumbing for users who want to derive a reference from their own
    general-domain text instead of shipping one.
    """
    frequencies = {}
    for doc in corpus.documents:
        for sentence in doc.sentences:
            lemmas = [t.lemma for t in sentence]
            for order in orders:
                for start in range(len(lemmas) - order + 1):
                    key = "_".join(lemmas[start:start + order]).lower()
                    frequencies[key] = frequencies.get(key, 0) + 1
    return ReferenceTable(frequencies, max(corpus.total_word_count, 1), smoothing)


def score_domain_pertinence(cset, ref):
    """Target frequency over (smoothed) reference frequency."""
    scores = {c: tc.tf / ref.freq(c) for c, tc in cset.candidates.items()}
    return ScoreTable("domain_pertinence", scores, {"smoothing": ref.smoothing})


def score_weirdness(cset, corpus, ref):
    """Like domain pertinence but with both frequencies size-normalized."""
    n_target = corpus.total_word_count
    scores = {
        c: (tc.tf / n_target) / (ref.freq(c) / ref.total_words)
        for c, tc in cset.candidates.items()
    }
    return ScoreTable("weirdness", scores, {"smoothing": ref.smoothing})


def score_relevance(cset, corpus, ref):
    """Weirdness-style ratio damped into [0, 1), boosted by document spread."""
    n_target = corpus.total_word_count
    n_docs = len(corpus.documents)
    scores = {}
    for c, tc in cset.candidates.items():
        ntf_target = tc.tf / n_target
        ntf_ref = ref.freq(c) / ref.total_words
        df = len(tc.doc_tf) / n_docs
        scores[c] = 1.0 - 1.0 / math.log2(2.0 + ntf_target * df / ntf_ref)
    return ScoreTable("relevance", scores, {"smoothing": ref.smoothing})
