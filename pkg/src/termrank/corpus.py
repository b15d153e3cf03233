"""Corpus loading and the fallback tokenizer/tagger.

Two input paths produce the same in-memory representation:

* pre-annotated files ("#doc <id>" headers, one "surface<TAB>lemma<TAB>pos"
  token per line, blank line between sentences) -- the recommended path,
  since results are sensitive to tagging quality;
* plain-text directories run through a small built-in tokenizer, lexicon
  tagger and rule-based lemmatizer, so the tool works standalone.

Documents are always kept sorted by id so that runs are deterministic
regardless of filesystem order or parallel scheduling.
"""

from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
import re

from .errors import DataError, EmptyCorpusError, ParseError
from ._parallel import parallel_map

__all__ = [
    "Token",
    "Document",
    "AnnotatedCorpus",
    "load_annotated_corpus",
    "save_annotated_corpus",
    "load_plain_corpus",
    "tokenize_and_tag",
    "lemmatize_word",
]


@dataclass(frozen=True)
class Token:
    surface: str
    lemma: str
    pos: str

    def __post_init__(self):
        if not self.lemma:
            raise DataError(f"token {self.surface!r} has an empty lemma")
        if not self.pos:
            raise DataError(f"token {self.surface!r} has an empty POS tag")
        if any(c.isspace() for c in self.lemma):
            raise DataError(f"lemma {self.lemma!r} contains whitespace")


@dataclass(frozen=True)
class Document:
    id: str
    sentences: tuple  # tuple of tuples of Token

    @property
    def n_tokens(self):
        return sum(len(s) for s in self.sentences)


@dataclass(frozen=True)
class AnnotatedCorpus:
    documents: tuple
    total_word_count: int = field(init=False, default=0)

    def __post_init__(self):
        ids = [d.id for d in self.documents]
        if len(set(ids)) != len(ids):
            dup = sorted(i for i in set(ids) if ids.count(i) > 1)[0]
            raise DataError(f"duplicate document id {dup!r}")
        docs = tuple(sorted(self.documents, key=lambda d: d.id))
        object.__setattr__(self, "documents", docs)
        object.__setattr__(
            self, "total_word_count", sum(d.n_tokens for d in docs)
        )

    def __len__(self):
        return len(self.documents)


# ---------------------------------------------------------------------------
# Annotated format
# ---------------------------------------------------------------------------

def load_annotated_corpus(path):
    """Read a pre-annotated corpus file into an :class:`AnnotatedCorpus`."""
    path = Path(path)
    documents = []
    doc_id = None
    sentences = []
    sentence = []

    def flush_sentence():
        if sentence:
            sentences.append(tuple(sentence))
            sentence.clear()

    def flush_document():
        flush_sentence()
        if doc_id is not None:
            documents.append(Document(doc_id, tuple(sentences)))
        sentences.clear()

    with open(path, encoding="utf-8") as fh:
        for line_no, raw in enumerate(fh, start=1):
            line = raw.rstrip("\n")
            if line.startswith("#doc"):
                flush_document()
                doc_id = line[4:].strip()
                if not doc_id:
                    raise ParseError(path, line_no, "document header without an id")
                continue
            if not line.strip():
                flush_sentence()
                continue
            fields = line.split("\t")
            if len(fields) < 3:
                raise ParseError(
                    path, line_no,
                    f"expected 3 tab-separated fields, got {len(fields)}",
                )
            if doc_id is None:
                raise ParseError(path, line_no, "token line before any '#doc' header")
            surface, lemma, pos = fields[0], fields[1], fields[2]
            try:
                sentence.append(Token(surface, lemma.lower(), pos))
            except DataError as exc:
                raise ParseError(path, line_no, str(exc)) from exc
    flush_document()

    corpus = AnnotatedCorpus(tuple(documents))
    if corpus.total_word_count == 0:
        raise EmptyCorpusError(f"{path}: corpus contains no tokens")
    return corpus


def save_annotated_corpus(corpus, path):
    """Write ``corpus`` in the annotated format; inverse of the loader."""
    with open(path, "w", encoding="utf-8") as fh:
        for doc in corpus.documents:
            fh.write(f"#doc {doc.id}\n")
            for sent in doc.sentences:
                for tok in sent:
                    fh.write(f"{tok.surface}\t{tok.lemma}\t{tok.pos}\n")
                fh.write("\n")


# ---------------------------------------------------------------------------
# Plain text fallback
# ---------------------------------------------------------------------------

def load_plain_corpus(dir_path, threads=1):
    """Tokenize and tag every ``*.txt`` file under ``dir_path``; one doc per file."""
    dir_path = Path(dir_path)
    files = sorted(dir_path.glob("*.txt"), key=lambda p: p.name)
    if not files:
        raise EmptyCorpusError(f"{dir_path}: no .txt files found")

    def load_one(txt):
        try:
            text = txt.read_text(encoding="utf-8")
        except OSError as exc:
            raise DataError(f"cannot read {txt}: {exc}") from exc
        doc = tokenize_and_tag(text)
        return Document(txt.name, doc.sentences)

    documents = parallel_map(load_one, files, threads)
    corpus = AnnotatedCorpus(tuple(documents))
    if corpus.total_word_count == 0:
        raise EmptyCorpusError(f"{dir_path}: corpus contains no tokens")
    return corpus


_WORD_RE = re.compile(r"[A-Za-z0-9]+|[^\sA-Za-z0-9]")
_NUM_RE = re.compile(r"^\d[\d.,]*$")
_SENT_BOUNDARY = re.compile(r"(?<=[.?!])\s+")

_PUNCT_TAGS = {".": ".", "!": ".", "?": ".", ",": ",", ":": ":", ";": ":"}

_lexicon_cache = None


def _lexicon():
    """word -> (pos, lemma) from the bundled lexicon file, cached."""
    global _lexicon_cache
    if _lexicon_cache is None:
        table = {}
        data = resources.files("termrank.data").joinpath("pos_lexicon.tsv")
        for line in data.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            fields = line.split("\t")
            word, pos = fields[0], fields[1]
            lemma = fields[2] if len(fields) > 2 else word
            table[word] = (pos, lemma)
        _lexicon_cache = table
    return _lexicon_cache


# Plural rules, applied in order (longest suffix first).
_PLURAL_RULES = (("sses", "ss"), ("ies", "y"), ("es", "e"), ("s", ""))

_SUFFIX_TAGS = (
    ("ly", "RB"),
    ("ing", "VBG"),
    ("ed", "VBD"),
    ("ous", "JJ"),
    ("ive", "JJ"),
    ("able", "JJ"),
    ("al", "JJ"),
    ("ic", "JJ"),
    ("tion", "NN"),
    ("sion", "NN"),
    ("ment", "NN"),
    ("ness", "NN"),
    ("ity", "NN"),
    ("ism", "NN"),
)


def _plural_stem(low, rules=_PLURAL_RULES):
    for suffix, repl in rules:
        if low.endswith(suffix) and len(low) > len(suffix):
            return low[: -len(suffix)] + repl
    return None


def _fallback_pos(low):
    """Guess a tag for a word the lexicon does not know."""
    lex = _lexicon()
    stem = _plural_stem(low)
    if stem is not None and stem in lex:
        stem_pos = lex[stem][0]
        if stem_pos.startswith("NN"):
            return "NNS"
        if stem_pos.startswith("VB"):
            return "VBZ"
    if low.endswith("ing") and len(low) > 4 and low[:-3] in lex:
        return "VBG"
    if low.endswith("ed") and len(low) > 3 and low[:-2] in lex:
        return "VBD"
    for suffix, tag in _SUFFIX_TAGS:
        if low.endswith(suffix) and len(low) > len(suffix) + 1:
            return tag
    if low.endswith("s") and not low.endswith("ss") and len(low) > 3:
        return "NNS"
    return "NN"


def _fallback_lemma(low, pos):
    """Rule-table lemmatizer: plural stripping for plural nouns and the
    -es family for VBZ; -ing/-ed stripped only when the stem is known."""
    lex = _lexicon()
    if pos in ("NNS", "NNPS"):
        stem = _plural_stem(low)
        if stem is not None:
            return stem
    elif pos == "VBZ":
        stem = _plural_stem(low, _PLURAL_RULES[:3])  # -s alone is nouns-only
        if stem is not None:
            return lex[stem][1] if stem in lex else stem
    elif pos == "VBG" and low.endswith("ing") and low[:-3] in lex:
        return lex[low[:-3]][1]
    elif pos in ("VBD", "VBN") and low.endswith("ed") and low[:-2] in lex:
        return lex[low[:-2]][1]
    return low


def _tag_token(surface):
    """Assign (lemma, pos) to one surface form."""
    low = surface.lower()
    lex = _lexicon()

    if not any(c.isalnum() for c in low):
        return low, _PUNCT_TAGS.get(low, "SYM")
    if _NUM_RE.match(low):
        return low, "CD"
    if low in lex:
        pos, lemma = lex[low]
        return lemma, pos
    pos = _fallback_pos(low)
    return _fallback_lemma(low, pos), pos


def lemmatize_word(word):
    """Lemma the fallback tagger would assign to a lone word."""
    return _tag_token(word)[0]


def tokenize_and_tag(text):
    """Turn raw text into a tagged :class:`Document` (id left empty).

    Sentences split after ``.?!`` followed by whitespace; tokens are
    alphanumeric runs or single punctuation characters.
    """
    sentences = []
    for chunk in _SENT_BOUNDARY.split(text):
        words = _WORD_RE.findall(chunk)
        if not words:
            continue
        tokens = []
        for surface in words:
            lemma, pos = _tag_token(surface)
            tokens.append(Token(surface, lemma, pos))
        sentences.append(tuple(tokens))
    return Document("", tuple(sentences))
