"""Term-candidate extraction, filtering and aggregation.

Candidates are consecutive word n-grams collected within sentences, passed
through three filters (noise, stop word, POS pattern), grouped by canonical
form (lemmas joined by ``_``) and pruned by a minimum corpus frequency.
A containment index over the surviving candidates records which candidates
are contiguous word-subsequences of which others.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
import re

from .errors import ConfigError
from ._parallel import parallel_map

__all__ = [
    "CandidateFilterConfig",
    "TermCandidate",
    "CandidateSet",
    "DEFAULT_POS_PATTERN",
    "DEFAULT_NOISE_PATTERN",
    "default_stop_words",
    "load_stop_words",
    "canonicalize",
    "pos_pattern_match",
    "collect_candidates",
    "export_candidates_tsv",
]

# Noun sequences with optional adjectives and prepositions between nouns.
DEFAULT_POS_PATTERN = r"(NN(S)?|JJ|NNP|NN(S?)IN)*(NN(S)?)"

# Lemmas made of anything but plain lowercase alphanumerics are noise.
DEFAULT_NOISE_PATTERN = r"^[a-z0-9]+$"

_stop_words_cache = None


def default_stop_words():
    """The bundled SMART stop-word list as a frozenset."""
    global _stop_words_cache
    if _stop_words_cache is None:
        data = resources.files("termrank.data").joinpath("smart_stopwords.txt")
        words = (w.strip() for w in data.read_text(encoding="utf-8").splitlines())
        _stop_words_cache = frozenset(w for w in words if w)
    return _stop_words_cache


def load_stop_words(path):
    """Read a stop-word file: one word per line, UTF-8."""
    words = Path(path).read_text(encoding="utf-8").splitlines()
    return frozenset(w.strip().lower() for w in words if w.strip())


@dataclass(frozen=True)
class CandidateFilterConfig:
    ngram_orders: tuple = (1, 2, 3, 4)
    min_lemma_length: int = 3
    noise_pattern: str = DEFAULT_NOISE_PATTERN
    stop_words: frozenset = field(default_factory=default_stop_words)
    pos_pattern: str = DEFAULT_POS_PATTERN
    min_term_frequency: int = 2

    def __post_init__(self):
        if not self.ngram_orders:
            raise ConfigError("ngram_orders must be nonempty")
        if self.min_term_frequency < 1:
            raise ConfigError("min_term_frequency must be >= 1")
        object.__setattr__(self, "ngram_orders", tuple(sorted(set(self.ngram_orders))))
        object.__setattr__(self, "stop_words", frozenset(self.stop_words))


@dataclass
class TermCandidate:
    canonical: str
    length_words: int
    tf: int
    doc_tf: dict
    occurrences: list  # (doc_id, sentence_index, token_offset)


@dataclass
class CandidateSet:
    candidates: dict           # canonical -> TermCandidate
    supersequences: dict       # canonical -> tuple of containing canonicals
    subsequences: dict         # canonical -> tuple of contained canonicals

    def __len__(self):
        return len(self.candidates)

    def canonicals(self):
        return list(self.candidates)

    def e(self, canonical):
        """Number of candidates containing ``canonical``."""
        return len(self.supersequences[canonical])

    def e_prime(self, canonical):
        """Number of candidates contained in ``canonical``."""
        return len(self.subsequences[canonical])


def canonicalize(lemmas):
    """Join lemmas with underscores, lowercased."""
    return "_".join(lemmas).lower()


_pattern_cache = {}


def _compiled(pattern):
    rx = _pattern_cache.get(pattern)
    if rx is None:
        rx = _pattern_cache[pattern] = re.compile(pattern)
    return rx


def pos_pattern_match(tags, pattern):
    """True iff the concatenated tags fully match ``pattern``."""
    return _compiled(pattern).fullmatch("".join(tags)) is not None


def _document_windows(doc, cfg, noise_rx, pos_rx):
    """All accepted (canonical, sentence_index, offset) windows of one document."""
    out = []
    min_len = cfg.min_lemma_length
    stop = cfg.stop_words
    orders = cfg.ngram_orders
    for s_idx, sentence in enumerate(doc.sentences):
        lemmas = [t.lemma for t in sentence]
        tags = [t.pos for t in sentence]
        lemma_ok = [
            len(lem) >= min_len and noise_rx.match(lem) is not None and lem not in stop
            for lem in lemmas
        ]
        n = len(sentence)
        for order in orders:
            for start in range(n - order + 1):
                if not all(lemma_ok[start:start + order]):
                    continue
                if pos_rx.fullmatch("".join(tags[start:start + order])) is None:
                    continue
                out.append((canonicalize(lemmas[start:start + order]), s_idx, start))
    return out


def collect_candidates(corpus, cfg=None, threads=1):
    """Collect filtered n-gram candidates from ``corpus``.

    Enumeration runs per document (optionally in parallel) and partial
    results merge in document order, so the outcome is thread-count
    independent.  Over-filtering yields an empty set, never an error.
    """
    cfg = cfg or CandidateFilterConfig()
    noise_rx = _compiled(cfg.noise_pattern)
    pos_rx = _compiled(cfg.pos_pattern)

    per_doc = parallel_map(
        lambda d: _document_windows(d, cfg, noise_rx, pos_rx),
        corpus.documents,
        threads,
    )

    occurrences = {}
    for doc, windows in zip(corpus.documents, per_doc):
        for canonical, s_idx, offset in windows:
            occurrences.setdefault(canonical, []).append((doc.id, s_idx, offset))

    candidates = {}
    for canonical in sorted(occurrences):
        occs = occurrences[canonical]
        if len(occs) < cfg.min_term_frequency:
            continue
        doc_tf = {}
        for doc_id, _, _ in occs:
            doc_tf[doc_id] = doc_tf.get(doc_id, 0) + 1
        candidates[canonical] = TermCandidate(
            canonical=canonical,
            length_words=canonical.count("_") + 1,
            tf=len(occs),
            doc_tf=doc_tf,
            occurrences=occs,
        )

    supers = {c: set() for c in candidates}
    subs = {c: set() for c in candidates}
    for canonical in candidates:
        words = canonical.split("_")
        length = len(words)
        for sub_len in range(1, length):
            for start in range(length - sub_len + 1):
                sub = "_".join(words[start:start + sub_len])
                if sub in candidates:
                    supers[sub].add(canonical)
                    subs[canonical].add(sub)
    return CandidateSet(
        candidates=candidates,
        supersequences={c: tuple(sorted(s)) for c, s in supers.items()},
        subsequences={c: tuple(sorted(s)) for c, s in subs.items()},
    )


def export_candidates_tsv(cset, path):
    """Write ``canonical<TAB>length<TAB>tf<TAB>dtf`` rows sorted by canonical."""
    with open(path, "w", encoding="utf-8") as fh:
        for canonical in sorted(cset.candidates):
            tc = cset.candidates[canonical]
            fh.write(f"{canonical}\t{tc.length_words}\t{tc.tf}\t{len(tc.doc_tf)}\n")
