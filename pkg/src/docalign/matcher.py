"""Complete-bipartite scoring per web domain and greedy competitive matching."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence

import numpy as np

from .embed import DocumentVector
from .errors import DataError


@dataclass(frozen=True)
class DocumentSet:
    domain: str
    language: str
    doc_ids: tuple[str, ...]

    def __post_init__(self) -> None:
        if len(set(self.doc_ids)) != len(self.doc_ids):
            raise DataError("duplicate doc ids in %s/%s" % (self.domain, self.language))


@dataclass(frozen=True)
class ScoredPair:
    source_doc_id: str
    target_doc_id: str
    score: float


@dataclass(frozen=True)
class Alignment:
    pairs: tuple[tuple[str, str, float], ...]


def _usable(doc_ids: Sequence[str], vectors: Mapping[str, DocumentVector]):
    """Unit-normalized rows for documents that have a nonzero vector."""
    kept = []
    dropped = 0
    for doc_id in doc_ids:
        dv = vectors.get(doc_id)
        if dv is None:
            dropped += 1
            continue
        v = np.asarray(dv.vector, dtype=np.float64)
        norm = float(np.sqrt(np.dot(v, v)))
        if norm == 0.0 or not np.isfinite(norm):
            dropped += 1
            continue
        kept.append((doc_id, v / norm))
    return kept, dropped


def score_domain(
    src: DocumentSet,
    tgt: DocumentSet,
    vectors: Mapping[str, DocumentVector],
    stats: Optional[dict] = None,
) -> list[ScoredPair]:
    """Cosine scores for the complete bipartite graph over usable docs."""
    if src.language == tgt.language:
        raise DataError("source and target sets share language %r" % src.language)
    s_kept, s_dropped = _usable(src.doc_ids, vectors)
    t_kept, t_dropped = _usable(tgt.doc_ids, vectors)
    if stats is not None:
        stats["dropped_src"] = s_dropped
        stats["dropped_tgt"] = t_dropped
    if not s_kept or not t_kept:
        return []
    s_mat = np.stack([v for _, v in s_kept])
    t_mat = np.stack([v for _, v in t_kept])
    if s_mat.shape[1] != t_mat.shape[1]:
        raise DataError(
            "dimension mismatch: %d vs %d" % (s_mat.shape[1], t_mat.shape[1])
        )
    scores = np.clip(s_mat @ t_mat.T, -1.0, 1.0)
    pairs = []
    for a, (src_id, _) in enumerate(s_kept):
        row = scores[a]
        for b, (tgt_id, _) in enumerate(t_kept):
            pairs.append(ScoredPair(src_id, tgt_id, float(row[b])))
    return pairs


def competitive_match(
    pairs: Iterable[ScoredPair],
    stats: Optional[dict] = None,
) -> Alignment:
    """Greedy one-to-one matching over pairs sorted by descending score.

    Ties break by ascending source then target id. The sort dominates the
    runtime; the selection scan stops once min(|sources|, |targets|) pairs
    are accepted.
    """
    seq = pairs if isinstance(pairs, list) else list(pairs)
    if not seq:
        if stats is not None:
            stats.update(sort_s=0.0, select_s=0.0, pairs_in=0, pairs_out=0)
        return Alignment(pairs=())
    t0 = time.perf_counter()
    scores = np.array([p.score for p in seq], dtype=np.float64)
    if not np.all(np.isfinite(scores)):
        raise DataError("pair scores must be finite")
    src_names, src_codes = np.unique(
        np.array([p.source_doc_id for p in seq]), return_inverse=True
    )
    tgt_names, tgt_codes = np.unique(
        np.array([p.target_doc_id for p in seq]), return_inverse=True
    )
    order = np.lexsort((tgt_codes, src_codes, -scores))
    sort_s = time.perf_counter() - t0

    t1 = time.perf_counter()
    target = min(len(src_names), len(tgt_names))
    used_src = bytearray(len(src_names))
    used_tgt = bytearray(len(tgt_names))
    order_list = order.tolist()
    src_list = src_codes.tolist()
    tgt_list = tgt_codes.tolist()
    score_list = scores.tolist()
    chosen: list[tuple[str, str, float]] = []
    for idx in order_list:
        a = src_list[idx]
        b = tgt_list[idx]
        if used_src[a] or used_tgt[b]:
            continue
        used_src[a] = 1
        used_tgt[b] = 1
        chosen.append((str(src_names[a]), str(tgt_names[b]), score_list[idx]))
        if len(chosen) == target:
            break
    select_s = time.perf_counter() - t1
    if stats is not None:
        stats["sort_s"] = sort_s
        stats["select_s"] = select_s
        stats["pairs_in"] = len(seq)
        stats["pairs_out"] = len(chosen)
    return Alignment(pairs=tuple(chosen))
