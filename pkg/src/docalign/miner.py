"""Margin-based parallel sentence mining from aligned document pairs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Optional

import numpy as np

from .embed import EmbeddingStore, segment
from .errors import ConfigurationError, MissingVectorError
from .ingest import Document

DEFAULT_K = 4
DEFAULT_THRESHOLD = 1.06


@dataclass(frozen=True)
class MarginParams:
    k: int = DEFAULT_K
    threshold: float = DEFAULT_THRESHOLD
    variant: str = "ratio"

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ConfigurationError("k must be at least 1")
        if not self.threshold > 0.0:
            raise ConfigurationError("threshold must be positive")
        if self.variant != "ratio":
            raise ConfigurationError("unknown margin variant %r" % self.variant)


@dataclass(frozen=True)
class BitextPair:
    src_text: str
    tgt_text: str
    margin_score: float
    provenance: tuple[str, str]


def _doc_rows(doc: Document, store: EmbeddingStore):
    """Sentence records and unit-normalized vectors; zero vectors are dropped."""
    records = segment(doc)
    kept_records = []
    kept_rows = []
    for rec in records:
        vec = store.sentence_vectors.get((doc.doc_id, rec.index))
        if vec is None:
            raise MissingVectorError("no vector for %s[%d]" % (doc.doc_id, rec.index))
        v = np.asarray(vec, dtype=np.float64)
        norm = math.sqrt(float(np.dot(v, v)))
        if norm == 0.0:
            continue
        kept_records.append(rec)
        kept_rows.append(v / norm)
    return kept_records, kept_rows


def mine_sentences(
    src_doc: Document,
    tgt_doc: Document,
    store: EmbeddingStore,
    params: Optional[MarginParams] = None,
) -> list[BitextPair]:
    """Pair each source sentence with its best target by ratio margin.

    The margin divides cos(x, y) by the mean similarity of each side to
    its k nearest neighbors in the opposite document, k capped at that
    document's sentence count. Pairs at or above the threshold are kept;
    ties go to the lower target index.
    """
    if params is None:
        params = MarginParams()
    src_recs, src_rows = _doc_rows(src_doc, store)
    tgt_recs, tgt_rows = _doc_rows(tgt_doc, store)
    if not src_recs or not tgt_recs:
        return []
    x_mat = np.stack(src_rows)
    y_mat = np.stack(tgt_rows)
    cos = np.clip(x_mat @ y_mat.T, -1.0, 1.0)
    n_src, n_tgt = cos.shape
    k_src = min(params.k, n_tgt)
    k_tgt = min(params.k, n_src)
    row_top = np.partition(cos, n_tgt - k_src, axis=1)[:, n_tgt - k_src :]
    row_mean = row_top.mean(axis=1)
    col_top = np.partition(cos, n_src - k_tgt, axis=0)[n_src - k_tgt :, :]
    col_mean = col_top.mean(axis=0)
    denom = (row_mean[:, None] + col_mean[None, :]) / 2.0
    with np.errstate(divide="ignore", invalid="ignore"):
        margins = np.where(denom > 0.0, cos / denom, -np.inf)
    out = []
    for i in range(n_src):
        j = int(np.argmax(margins[i]))
        margin = float(margins[i, j])
        if margin >= params.threshold:
            out.append(
                BitextPair(
                    src_text=src_recs[i].text,
                    tgt_text=tgt_recs[j].text,
                    margin_score=margin,
                    provenance=(src_doc.doc_id, tgt_doc.doc_id),
                )
            )
    return out


def dedup_bitext(pairs: Iterable[BitextPair]) -> list[BitextPair]:
    """Collapse duplicate (src, tgt) texts, keeping the highest margin."""
    best: dict[tuple[str, str], tuple[tuple, BitextPair]] = {}
    for pair in pairs:
        key = (pair.src_text, pair.tgt_text)
        rank = (-pair.margin_score, pair.provenance)
        prior = best.get(key)
        if prior is None or rank < prior[0]:
            best[key] = (rank, pair)
    return [best[key][1] for key in sorted(best)]
