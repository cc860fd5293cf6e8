"""Document vectors from sentence vectors: direct, averaged, and weighted.

Weighted averaging keeps the 1/n factor with unnormalized weights; cosine
rankings are unchanged by any uniform positive rescaling of the weights.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .errors import (
    ConfigurationError,
    DataError,
    EmptyDocumentError,
    MissingVectorError,
    UndefinedSimilarityError,
)
from .ingest import Document

METHODS = ("DE", "SA", "SL", "IDF", "SLIDF")


@dataclass(frozen=True)
class SentenceRecord:
    doc_id: str
    index: int
    text: str
    token_count: int


@dataclass
class EmbeddingStore:
    dim: int
    sentence_vectors: dict = field(default_factory=dict)
    whole_doc_vectors: dict = field(default_factory=dict)


@dataclass(frozen=True)
class DomainIndex:
    domain: str
    n_docs: int
    df: Mapping[str, int]


@dataclass(frozen=True)
class DocumentVector:
    doc_id: str
    vector: np.ndarray
    method: str


def segment(doc: Document) -> list[SentenceRecord]:
    """Split content on newlines, trim each line, and drop empties."""
    records: list[SentenceRecord] = []
    for line in doc.content.split("\n"):
        text = line.strip()
        if not text:
            continue
        records.append(
            SentenceRecord(doc.doc_id, len(records), text, len(text.split()))
        )
    return records


def whole_document_text(records: Sequence[SentenceRecord]) -> str:
    """Canonical full text for whole-document vectors."""
    return "\n".join(r.text for r in records)


def build_domain_index(domain: str, docs: Iterable[Document]) -> DomainIndex:
    """Count, per distinct sentence text, the domain documents containing it."""
    df: dict[str, int] = {}
    n = 0
    for doc in docs:
        n += 1
        for text in {r.text for r in segment(doc)}:
            df[text] = df.get(text, 0) + 1
    return DomainIndex(domain=domain, n_docs=n, df=df)


def sentence_average(vectors: Sequence) -> np.ndarray:
    vecs = [np.asarray(v, dtype=np.float64) for v in vectors]
    if not vecs:
        raise EmptyDocumentError("no sentence vectors to average")
    return np.mean(np.stack(vecs), axis=0)


def weighted_average(vectors: Sequence, weights: Sequence[float]) -> np.ndarray:
    vecs = [np.asarray(v, dtype=np.float64) for v in vectors]
    w = [float(x) for x in weights]
    if not vecs:
        raise EmptyDocumentError("no sentence vectors to average")
    if len(vecs) != len(w):
        raise DataError("%d vectors but %d weights" % (len(vecs), len(w)))
    for x in w:
        if not math.isfinite(x) or x < 0.0:
            raise DataError("weights must be finite and non-negative")
    acc = np.zeros_like(vecs[0])
    for v, wi in zip(vecs, w):
        acc = acc + wi * v
    return acc / len(vecs)


def sl_weight(sentence: SentenceRecord, doc_sentences: Sequence[SentenceRecord]) -> float:
    """Sentence share of the document's tokens.

    Summing token counts over all instances equals the count-weighted sum
    over distinct texts, so repeats need no special casing.
    """
    total = sum(r.token_count for r in doc_sentences)
    if total <= 0:
        raise EmptyDocumentError("document has no tokens")
    return sentence.token_count / total


def idf_weight(sentence_text: str, index: DomainIndex) -> float:
    """log((N + 1) / (1 + df)); unseen sentences use df = 0."""
    return math.log((index.n_docs + 1) / (1 + index.df.get(sentence_text, 0)))


def slidf_weight(
    sentence: SentenceRecord,
    doc_sentences: Sequence[SentenceRecord],
    index: DomainIndex,
) -> float:
    return sl_weight(sentence, doc_sentences) * idf_weight(sentence.text, index)


def embed_document(
    doc: Document,
    method: str,
    store: EmbeddingStore,
    index: Optional[DomainIndex] = None,
) -> DocumentVector:
    """Build one document vector with the requested method."""
    method = method.upper()
    if method not in METHODS:
        raise ConfigurationError("unknown embedding method %r" % method)
    if method == "DE":
        vec = store.whole_doc_vectors.get(doc.doc_id)
        if vec is None:
            raise MissingVectorError("no whole-document vector for %s" % doc.doc_id)
        return DocumentVector(doc.doc_id, np.asarray(vec, dtype=np.float64), "DE")
    sentences = segment(doc)
    if not sentences:
        raise EmptyDocumentError("document %s has no sentences" % doc.doc_id)
    vectors = []
    for rec in sentences:
        v = store.sentence_vectors.get((doc.doc_id, rec.index))
        if v is None:
            raise MissingVectorError("no vector for %s[%d]" % (doc.doc_id, rec.index))
        vectors.append(v)
    if method == "SA":
        return DocumentVector(doc.doc_id, sentence_average(vectors), "SA")
    if method in ("IDF", "SLIDF") and index is None:
        raise ConfigurationError("method %s needs a domain index" % method)
    if method == "SL":
        weights = [sl_weight(r, sentences) for r in sentences]
    elif method == "IDF":
        weights = [idf_weight(r.text, index) for r in sentences]
    else:
        weights = [slidf_weight(r, sentences, index) for r in sentences]
    return DocumentVector(doc.doc_id, weighted_average(vectors, weights), method)


def cosine(a, b) -> float:
    """Cosine similarity in [-1, 1]; zero vectors have no similarity."""
    x = np.asarray(a, dtype=np.float64)
    y = np.asarray(b, dtype=np.float64)
    if x.shape != y.shape:
        raise DataError("dimension mismatch: %s vs %s" % (x.shape, y.shape))
    nx = math.sqrt(float(np.dot(x, x)))
    ny = math.sqrt(float(np.dot(y, y)))
    if nx == 0.0 or ny == 0.0:
        raise UndefinedSimilarityError("cosine undefined for a zero vector")
    value = float(np.dot(x, y)) / (nx * ny)
    return min(1.0, max(-1.0, value))
