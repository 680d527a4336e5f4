"""Turn repository descriptions into timestamped token documents.

The pipeline is fixed: lowercase, strip URLs and punctuation (intra-word
hyphens and underscores survive), split, drop platform names, drop stopwords,
stem, then emit unigrams and underscore-joined n-grams. The same TF-IDF and
cosine primitives back both the stream clusterer and the topic model.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from datetime import datetime
from importlib import resources
from typing import Iterable, Mapping, Sequence

from .errors import ValidationError
from .schema import RepoRecord
from .stemming import stem

_URL_RE = re.compile(r"(?:https?://|www\.)\S+")
# anything that is not a word character, hyphen or whitespace becomes a space
_PUNCT_RE = re.compile(r"[^\w\s-]")
_EDGE_TRIM = "-_"

SparseVector = dict[str, float]


def load_stopwords(path: str | None = None) -> frozenset[str]:
    """Load a one-token-per-line stopword list; bundled English list by default."""
    if path is None:
        text = resources.files("repotrend.data").joinpath("stopwords_en.txt").read_text("utf-8")
    else:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    return frozenset(line.strip().lower() for line in text.splitlines() if line.strip())


@dataclass(frozen=True)
class TokenDoc:
    """A repository description reduced to tokens, keyed and timestamped."""

    doc_id: tuple[str, str]
    timestamp: datetime
    tokens: tuple[str, ...]

    def __post_init__(self) -> None:
        if self.timestamp.tzinfo is None:
            raise ValidationError(f"TokenDoc {self.doc_id}: timestamp must be timezone-aware")
        object.__setattr__(self, "tokens", tuple(self.tokens))
        for tok in self.tokens:
            if not tok:
                raise ValidationError(f"TokenDoc {self.doc_id}: empty token")
            if tok != tok.lower():
                raise ValidationError(f"TokenDoc {self.doc_id}: token {tok!r} is not lowercase")

    def counts(self) -> Counter[str]:
        return Counter(self.tokens)


@dataclass(frozen=True)
class IdfTable:
    """Smoothed inverse document frequencies over a fixed document count."""

    doc_count: int
    df: Mapping[str, int] = field(default_factory=dict)
    idf: Mapping[str, float] = field(default_factory=dict)

    def lookup(self, token: str) -> float:
        got = self.idf.get(token)
        if got is not None:
            return got
        return math.log(1 + self.doc_count) + 1.0


def _idf_value(doc_count: int, df: int) -> float:
    return math.log((1 + doc_count) / (1 + df)) + 1.0


def build_idf(corpus: Sequence[TokenDoc] | Sequence[Mapping[str, float]]) -> IdfTable:
    """Count per-token document frequencies and derive idf = ln((1+N)/(1+df)) + 1."""
    if not corpus:
        raise ValidationError("cannot build idf from an empty corpus")
    df: Counter[str] = Counter()
    for doc in corpus:
        tokens = doc.tokens if isinstance(doc, TokenDoc) else doc.keys()
        df.update(set(tokens))
    n = len(corpus)
    idf = {tok: _idf_value(n, count) for tok, count in df.items()}
    return IdfTable(doc_count=n, df=dict(df), idf=idf)


def tf_vector(doc: TokenDoc) -> SparseVector:
    return {tok: float(count) for tok, count in doc.counts().items()}


def tfidf(v: SparseVector, idf: IdfTable) -> SparseVector:
    return {tok: weight * idf.lookup(tok) for tok, weight in v.items() if weight != 0.0}


def cosine(v: SparseVector, w: SparseVector) -> float:
    if not v or not w:
        return 0.0
    if len(w) < len(v):
        v, w = w, v
    dot = sum(weight * w.get(tok, 0.0) for tok, weight in v.items())
    norm_v = math.sqrt(sum(x * x for x in v.values()))
    norm_w = math.sqrt(sum(x * x for x in w.values()))
    if norm_v == 0.0 or norm_w == 0.0:
        return 0.0
    return dot / (norm_v * norm_w)


def is_english_multiword(
    description: str,
    stopword_list: Iterable[str],
    stopword_threshold: float = 0.10,
    ascii_threshold: float = 0.9,
) -> bool:
    """Cheap English filter: multiword plus either stopword-rich or ASCII-dominant."""
    words = description.split()
    if len(words) < 2:
        return False
    stopwords = stopword_list if isinstance(stopword_list, (set, frozenset)) else set(stopword_list)
    hits = sum(1 for w in words if w.lower().strip(_EDGE_TRIM + ".,!?:;\"'()") in stopwords)
    if hits / len(words) >= stopword_threshold:
        return True
    letters = [ch for ch in description if ch.isalpha()]
    if not letters:
        return False
    ascii_letters = sum(1 for ch in letters if ch.isascii())
    return ascii_letters / len(letters) >= ascii_threshold


def _clean_split(description: str) -> list[str]:
    text = _URL_RE.sub(" ", description.lower())
    text = _PUNCT_RE.sub(" ", text)
    out = []
    for raw in text.split():
        tok = raw.strip(_EDGE_TRIM)
        if tok:
            out.append(tok)
    return out


def preprocess(
    description: str,
    platform_names: Iterable[str],
    stopwords: Iterable[str],
    n_min: int = 1,
    n_max: int = 2,
) -> list[str]:
    """Run the fixed pipeline and emit all n-grams for n in [n_min, n_max]."""
    if n_min < 1:
        raise ValidationError(f"n_min must be >= 1, got {n_min}")
    if n_max < n_min:
        raise ValidationError(f"n_max must be >= n_min, got {n_max} < {n_min}")
    platforms = {p.lower() for p in platform_names}
    stops = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)

    words = [w for w in _clean_split(description) if w not in platforms and w not in stops]
    stems = [stem(w) for w in words]
    # stemming can land on a stopword or platform name ("doing" -> "do");
    # the output must stay disjoint from both lists
    stems = [s for s in stems if s and s not in stops and s not in platforms]

    grams: list[str] = []
    for n in range(n_min, n_max + 1):
        if n == 1:
            grams.extend(stems)
        else:
            for i in range(len(stems) - n + 1):
                grams.append("_".join(stems[i : i + n]))
    return [g for g in grams if g not in stops and g not in platforms]


def term_to_token(term: str, platform_names: Iterable[str], stopwords: Iterable[str]) -> str:
    """Reduce a query phrase to the single token the pipeline would emit.

    Runs the same cleanup, list filtering and stemming as preprocess, then
    joins the surviving stems with underscores ("deep learning" and the
    bigram it produces match exactly).
    """
    platforms = {p.lower() for p in platform_names}
    stops = stopwords if isinstance(stopwords, (set, frozenset)) else set(stopwords)
    words = [w for w in _clean_split(term) if w not in platforms and w not in stops]
    stems = [s for s in (stem(w) for w in words) if s and s not in stops and s not in platforms]
    if not stems:
        raise ValidationError(f"term {term!r} is empty after preprocessing")
    return "_".join(stems)


def doc_from_record(
    record: RepoRecord,
    platform_names: Iterable[str],
    stopwords: Iterable[str],
    n_min: int = 1,
    n_max: int = 2,
) -> TokenDoc:
    tokens = preprocess(record.description, platform_names, stopwords, n_min, n_max)
    return TokenDoc(doc_id=record.key, timestamp=record.created_at, tokens=tuple(tokens))


def docs_from_corpus(
    records: Sequence[RepoRecord],
    platform_names: Iterable[str],
    stopwords: Iterable[str],
    n_min: int = 1,
    n_max: int = 2,
    english_only: bool = True,
) -> list[TokenDoc]:
    """Tokenize records in (timestamp, key) order, optionally dropping non-English ones."""
    platforms = list(platform_names)
    stops = stopwords if isinstance(stopwords, (set, frozenset)) else frozenset(stopwords)
    docs = []
    for record in sorted(records, key=lambda r: (r.created_at, r.key)):
        if english_only and not is_english_multiword(record.description, stops):
            continue
        docs.append(doc_from_record(record, platforms, stops, n_min, n_max))
    return docs
