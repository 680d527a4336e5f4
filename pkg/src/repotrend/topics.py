"""Batch topic modeling over token documents via collapsed Gibbs sampling.

The sampler keeps the usual count matrices (topic-word, document-topic,
topic totals) and resamples one token at a time with its own count removed:
p(z = k) proportional to (n_dk + alpha) * (n_kw + beta) / (n_k + V * beta).
Runs are deterministic for a fixed seed; documents are visited in order and
tokens inside a document in sorted order.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .textprep import TokenDoc


@dataclass
class TopicModel:
    k_topics: int
    alpha: float
    beta: float
    vocab: list[str]
    n_kw: np.ndarray  # K x V
    n_dk: np.ndarray  # D x K
    n_k: np.ndarray  # K
    assignments: list[np.ndarray]
    doc_ids: list[tuple[str, str]]
    doc_words: list[np.ndarray]
    seed: int
    perplexity_trace: list[tuple[int, float]] = field(default_factory=list)

    @property
    def vocab_size(self) -> int:
        return len(self.vocab)

    def check_counts(self) -> None:
        if not np.array_equal(self.n_kw.sum(axis=1), self.n_k):
            raise ValidationError("topic-word rows do not sum to topic totals")
        doc_lengths = np.array([len(w) for w in self.doc_words])
        if not np.array_equal(self.n_dk.sum(axis=1), doc_lengths):
            raise ValidationError("document-topic rows do not sum to document lengths")
        if (self.n_kw < 0).any() or (self.n_dk < 0).any():
            raise ValidationError("negative counts in topic model")


def _encode(corpus: Sequence[TokenDoc]) -> tuple[list[str], list[np.ndarray], list[tuple[str, str]]]:
    kept = [doc for doc in corpus if doc.tokens]
    vocab = sorted({tok for doc in kept for tok in doc.tokens})
    index = {tok: i for i, tok in enumerate(vocab)}
    docs = []
    ids = []
    for doc in kept:
        # expand counts in sorted token order so the chain is order-independent
        words: list[int] = []
        for tok, count in sorted(doc.counts().items()):
            words.extend([index[tok]] * count)
        docs.append(np.asarray(words, dtype=np.int64))
        ids.append(doc.doc_id)
    return vocab, docs, ids


def fit_lda(
    corpus: Sequence[TokenDoc],
    k_topics: int = 15,
    alpha: float | None = None,
    beta: float = 0.01,
    iterations: int = 1000,
    seed: int = 0,
    check_invariants: bool = False,
    trace_every: int = 0,
) -> TopicModel:
    """Fit by collapsed Gibbs sampling and return the final-state model."""
    if k_topics < 1:
        raise ValidationError(f"k_topics must be >= 1, got {k_topics}")
    if iterations < 1:
        raise ValidationError(f"iterations must be >= 1, got {iterations}")
    if beta <= 0:
        raise ValidationError(f"beta must be > 0, got {beta}")
    if alpha is None:
        alpha = 50.0 / k_topics
    if alpha <= 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")

    vocab, docs, doc_ids = _encode(corpus)
    if not docs:
        raise ValidationError("cannot fit a topic model on an empty corpus")
    total_tokens = sum(len(w) for w in docs)
    if k_topics > total_tokens:
        raise ValidationError(
            f"k_topics={k_topics} exceeds the corpus token count {total_tokens}"
        )

    k = k_topics
    v = len(vocab)
    rng = np.random.Generator(np.random.PCG64(seed))
    n_kw = np.zeros((k, v), dtype=np.int64)
    n_dk = np.zeros((len(docs), k), dtype=np.int64)
    n_k = np.zeros(k, dtype=np.int64)
    assignments = []
    for d, words in enumerate(docs):
        z = rng.integers(0, k, size=len(words))
        for w, topic in zip(words, z):
            n_kw[topic, w] += 1
            n_dk[d, topic] += 1
            n_k[topic] += 1
        assignments.append(z)

    model = TopicModel(
        k_topics=k, alpha=alpha, beta=beta, vocab=vocab,
        n_kw=n_kw, n_dk=n_dk, n_k=n_k,
        assignments=assignments, doc_ids=doc_ids, doc_words=docs, seed=seed,
    )

    v_beta = v * beta
    for sweep in range(1, iterations + 1):
        for d, words in enumerate(docs):
            z = assignments[d]
            row = n_dk[d]
            for i in range(len(words)):
                w = words[i]
                old = z[i]
                n_kw[old, w] -= 1
                row[old] -= 1
                n_k[old] -= 1
                p = (row + alpha) * (n_kw[:, w] + beta) / (n_k + v_beta)
                cum = np.cumsum(p)
                new = int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))
                if new >= k:
                    new = k - 1
                z[i] = new
                n_kw[new, w] += 1
                row[new] += 1
                n_k[new] += 1
        if check_invariants:
            model.check_counts()
        if trace_every and (sweep % trace_every == 0 or sweep == iterations):
            model.perplexity_trace.append((sweep, perplexity(model)))
    return model


def _phi(model: TopicModel) -> np.ndarray:
    return (model.n_kw + model.beta) / (
        model.n_k[:, None] + model.vocab_size * model.beta
    )


def _theta(model: TopicModel) -> np.ndarray:
    lengths = model.n_dk.sum(axis=1, keepdims=True)
    return (model.n_dk + model.alpha) / (lengths + model.k_topics * model.alpha)


def top_words(model: TopicModel, k: int, n: int = 10) -> list[tuple[str, float]]:
    """Most probable words of topic k, ties broken by token."""
    if not 0 <= k < model.k_topics:
        raise ValidationError(f"topic index {k} out of range [0, {model.k_topics})")
    if n < 1:
        raise ValidationError(f"n must be >= 1, got {n}")
    probs = _phi(model)[k]
    ranked = sorted(zip(model.vocab, probs), key=lambda item: (-item[1], item[0]))
    return [(tok, float(p)) for tok, p in ranked[:n]]


def perplexity(model: TopicModel, corpus: Sequence[TokenDoc] | None = None) -> float:
    """Held-in perplexity from the final counts; lower is better."""
    phi = _phi(model)
    theta = _theta(model)
    if corpus is None:
        pairs = list(enumerate(model.doc_words))
    else:
        by_id = {doc_id: d for d, doc_id in enumerate(model.doc_ids)}
        index = {tok: i for i, tok in enumerate(model.vocab)}
        pairs = []
        for doc in corpus:
            if not doc.tokens:
                continue
            if doc.doc_id not in by_id:
                raise ValidationError(f"document {doc.doc_id} was not part of the fit")
            words = [index[tok] for tok in doc.tokens if tok in index]
            pairs.append((by_id[doc.doc_id], np.asarray(words, dtype=np.int64)))
    log_total = 0.0
    token_total = 0
    for d, words in pairs:
        if len(words) == 0:
            continue
        probs = theta[d] @ phi[:, words]
        log_total += float(np.log(probs).sum())
        token_total += len(words)
    if token_total == 0:
        raise ValidationError("perplexity needs at least one token")
    return math.exp(-log_total / token_total)


def model_to_json_dict(model: TopicModel) -> dict:
    return {
        "k_topics": model.k_topics,
        "alpha": model.alpha,
        "beta": model.beta,
        "seed": model.seed,
        "vocab": list(model.vocab),
        "n_kw": model.n_kw.tolist(),
    }


def write_model_json(model: TopicModel, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(model_to_json_dict(model), fh, sort_keys=True)
        fh.write("\n")


def write_topics_csv(model: TopicModel, path: str, n_words: int = 10) -> None:
    """One row per topic with its n_words most probable words."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["topic"] + [f"word_{i}" for i in range(1, n_words + 1)])
        for k in range(model.k_topics):
            words = [tok for tok, _ in top_words(model, k, n_words)]
            words += [""] * (n_words - len(words))
            writer.writerow([k] + words)
