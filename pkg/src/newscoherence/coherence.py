"""Per-document coherence: mean pairwise similarity of sentence or entity vectors."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import embeddings as emb
from . import esa as esa_mod
from .corpus import Document, LabeledCorpus, Sentence
from .embeddings import EmbeddingTable
from .entitylink import build_gazetteer, entity_set, extract_entities
from .esa import EsaIndex

__all__ = [
    "CoherenceScore",
    "CoherenceError",
    "METHODS",
    "sentence_rep_embedding",
    "sentence_rep_esa",
    "coherence_sentences",
    "coherence_entities",
    "score_corpus",
    "write_scores_csv",
    "read_scores_csv",
]

METHODS = ("embedding", "esa", "entity")


class CoherenceError(Exception):
    """Raised for method/resource mismatches."""


@dataclass
class CoherenceScore:
    doc_id: str
    method: str
    value: float  # NaN when status is "undefined"
    element_count: int
    pair_count: int
    status: str  # "ok" | "undefined"

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _undefined(doc_id: str, method: str, element_count: int = 0) -> CoherenceScore:
    return CoherenceScore(
        doc_id=doc_id,
        method=method,
        value=float("nan"),
        element_count=element_count,
        pair_count=0,
        status="undefined",
    )


def sentence_rep_embedding(
    s: Sentence, table: EmbeddingTable, unique_tokens: bool = False
) -> np.ndarray | None:
    """Mean of the in-vocabulary token vectors (occurrence-weighted by default).

    None when no token is in-vocabulary or the mean is the zero vector.
    """
    tokens = sorted(set(s.tokens)) if unique_tokens else s.tokens
    vectors = [v for v in (table.lookup(t) for t in tokens) if v is not None]
    if not vectors:
        return None
    rep = emb.mean_vector(vectors)
    if not np.any(rep):
        return None
    return rep


def sentence_rep_esa(
    s: Sentence, index: EsaIndex, unique_tokens: bool = False
) -> dict | None:
    """Mean of the known ESA token vectors; None when the result is empty."""
    tokens = sorted(set(s.tokens)) if unique_tokens else s.tokens
    vectors = [v for v in (esa_mod.esa_word_vector(index, t) for t in tokens) if v is not None]
    if not vectors:
        return None
    rep = esa_mod.mean_sparse(vectors)
    return rep or None


def _sim(u, v) -> float:
    if isinstance(u, dict):
        return esa_mod.cosine_sparse(u, v)
    return emb.cosine(u, v)


def _mean_pairwise(reps: list) -> tuple[float, int]:
    """Mean cosine over all unordered pairs (equals the ordered i != j mean)."""
    k = len(reps)
    total = 0.0
    pairs = 0
    for i in range(k):
        for j in range(i + 1, k):
            total += _sim(reps[i], reps[j])
            pairs += 1
    return total / pairs, pairs


def _has_norm(rep) -> bool:
    if isinstance(rep, dict):
        return any(w != 0.0 for w in rep.values())
    return bool(np.any(rep))


def coherence_sentences(doc: Document, rep) -> CoherenceScore:
    """Mean pairwise cosine between sentence representations.

    Sentences with undefined or zero representations are dropped; fewer than
    two usable sentences makes the score undefined. `rep` maps a Sentence to a
    dense array, a sparse dict, or None.
    """
    method = "embedding"
    if doc.sentences is None:
        raise CoherenceError(f"document {doc.id!r} has not been segmented")
    reps = []
    for sentence in doc.sentences:
        r = rep(sentence)
        if r is not None and _has_norm(r):
            reps.append(r)
    if reps and isinstance(reps[0], dict):
        method = "esa"
    if len(reps) < 2:
        return _undefined(doc.id, method, element_count=len(reps))
    value, pairs = _mean_pairwise(reps)
    return CoherenceScore(
        doc_id=doc.id,
        method=method,
        value=value,
        element_count=len(reps),
        pair_count=pairs,
        status="ok",
    )


def coherence_entities(
    doc: Document, entity_table: EmbeddingTable, multiset: bool = False
) -> CoherenceScore:
    """Mean pairwise cosine between the document's distinct linked-entity vectors.

    `multiset` scores over the mention multiset instead of distinct entities.
    """
    if doc.entity_mentions is None:
        raise CoherenceError(f"document {doc.id!r} has not been entity-linked")
    if multiset:
        ids = [m.entity_id for m in doc.entity_mentions]
    else:
        ids = entity_set(doc.entity_mentions)
    vectors = [v for v in (entity_table.lookup(i) for i in ids) if v is not None and np.any(v)]
    if len(vectors) < 2:
        return _undefined(doc.id, "entity", element_count=len(vectors))
    value, pairs = _mean_pairwise(vectors)
    return CoherenceScore(
        doc_id=doc.id,
        method="entity",
        value=value,
        element_count=len(vectors),
        pair_count=pairs,
        status="ok",
    )


def _score_one(
    doc: Document,
    method: str,
    embedding_table: EmbeddingTable | None,
    esa_index: EsaIndex | None,
    entity_table: EmbeddingTable | None,
    unique_tokens: bool,
    entity_multiset: bool,
) -> CoherenceScore:
    if method == "embedding":
        score = coherence_sentences(
            doc, lambda s: sentence_rep_embedding(s, embedding_table, unique_tokens)
        )
    elif method == "esa":
        score = coherence_sentences(
            doc, lambda s: sentence_rep_esa(s, esa_index, unique_tokens)
        )
        score.method = "esa"
    else:
        score = coherence_entities(doc, entity_table, multiset=entity_multiset)
    score.method = method
    return score


def score_corpus(
    corpus: LabeledCorpus,
    method: str,
    embedding_table: EmbeddingTable | None = None,
    esa_index: EsaIndex | None = None,
    entity_table: EmbeddingTable | None = None,
    unique_tokens: bool = False,
    entity_multiset: bool = False,
    workers: int = 1,
) -> list[CoherenceScore]:
    """One CoherenceScore per document, ordered by doc id.

    Scoring is a pure function of (document, resources); with `workers` > 1
    documents are scored in parallel and results re-sorted, so output is
    identical to the serial run.
    """
    if method not in METHODS:
        raise CoherenceError(f"unknown method {method!r}")
    if method == "embedding" and embedding_table is None:
        raise CoherenceError("method 'embedding' requires an embedding table")
    if method == "esa" and esa_index is None:
        raise CoherenceError("method 'esa' requires an ESA index")
    if method == "entity" and entity_table is None:
        raise CoherenceError("method 'entity' requires an entity vector table")

    if method == "entity" and any(d.entity_mentions is None for d in corpus.documents):
        gaz = build_gazetteer(entity_table)
        for doc in corpus.documents:
            if doc.entity_mentions is None:
                doc.entity_mentions = extract_entities(doc, gaz)

    args = (embedding_table, esa_index, entity_table, unique_tokens, entity_multiset)
    if workers > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=workers) as pool:
            scores = list(pool.map(lambda d: _score_one(d, method, *args), corpus.documents))
    else:
        scores = [_score_one(doc, method, *args) for doc in corpus.documents]
    return sorted(scores, key=lambda s: s.doc_id)


def write_scores_csv(
    scores: list[CoherenceScore], labels: dict[str, str], path: str | Path
) -> None:
    """doc_id,label,method,value,element_count,pair_count,status with 6-decimal values."""
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(
            ["doc_id", "label", "method", "value", "element_count", "pair_count", "status"]
        )
        for s in scores:
            value = f"{s.value:.6f}" if s.ok else ""
            writer.writerow(
                [s.doc_id, labels.get(s.doc_id, ""), s.method, value,
                 s.element_count, s.pair_count, s.status]
            )


def read_scores_csv(path: str | Path) -> tuple[list[CoherenceScore], dict[str, str]]:
    scores: list[CoherenceScore] = []
    labels: dict[str, str] = {}
    with open(path, newline="", encoding="utf-8") as f:
        for row in csv.DictReader(f):
            value = float(row["value"]) if row["value"] else float("nan")
            scores.append(
                CoherenceScore(
                    doc_id=row["doc_id"],
                    method=row["method"],
                    value=value,
                    element_count=int(row["element_count"]),
                    pair_count=int(row["pair_count"]),
                    status=row["status"],
                )
            )
            labels[row["doc_id"]] = row["label"]
    return scores, labels
