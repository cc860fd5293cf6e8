"""File-level pipeline stages with atomic outputs and a run manifest.

Every stage writes through a temp file plus rename, so an interrupted
run never leaves a partial file at its final path, and appends a JSON
report line to the run manifest.
"""

from __future__ import annotations

import csv
import json
import logging
import os
import time
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .embed import (
    build_domain_index,
    embed_document,
    segment,
    whole_document_text,
)
from .errors import (
    DataError,
    EmptyDocumentError,
    MissingVectorError,
    UntaggableError,
)
from .evaluate import evaluate, krippendorff_alpha, make_annotation_table, make_gold
from .hashvec import hash_vector
from .ingest import Document, RawDocument, dedup
from .langdata import canonical_code
from .langid import LangTag, load_profiles, tag_language
from .matcher import DocumentSet, competitive_match, score_domain
from .miner import MarginParams, dedup_bitext, mine_sentences
from .urlmatch import default_patterns, load_patterns, match_candidates
from .vecfile import (
    WHOLE_DOC_INDEX,
    load_store,
    load_store_with_sidecar,
    read_sentences,
    write_embeddings,
    write_sentences,
)

logger = logging.getLogger("docalign")


def atomic_write_text(path: str | Path, text: str) -> None:
    path = Path(path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp.%d" % os.getpid())
    with open(tmp, "w", encoding="utf-8") as fh:
        fh.write(text)
    os.replace(tmp, path)


def append_manifest(manifest_path: Optional[str | Path], record: dict) -> None:
    if not manifest_path:
        return
    path = Path(manifest_path)
    if path.parent != Path(""):
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(record, ensure_ascii=False, sort_keys=True) + "\n")


def _finish(stage: str, t0: float, counts: dict, manifest_path) -> dict:
    report = dict(counts)
    report["stage"] = stage
    report["seconds"] = round(time.perf_counter() - t0, 6)
    append_manifest(manifest_path, report)
    logger.info("%s: %s", stage, json.dumps(report, sort_keys=True))
    return report


def read_raw_documents(path: str | Path) -> list[RawDocument]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError("%s:%d: bad JSON: %s" % (path, ln, exc))
            if not isinstance(obj, dict) or "url" not in obj or "content" not in obj:
                raise DataError("%s:%d: need url and content fields" % (path, ln))
            records.append(
                RawDocument(
                    url=obj["url"],
                    content=obj["content"],
                    snapshot_id=obj.get("snapshot"),
                    lang=obj.get("lang"),
                )
            )
    return records


def read_documents(path: str | Path) -> list[Document]:
    docs = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DataError("%s:%d: bad JSON: %s" % (path, ln, exc))
            try:
                docs.append(
                    Document(
                        doc_id=obj["doc_id"],
                        url=obj["url"],
                        normalized_url=obj["normalized_url"],
                        domain=obj["domain"],
                        content=obj["content"],
                        lang=obj.get("lang"),
                    )
                )
            except KeyError as exc:
                raise DataError("%s:%d: missing field %s" % (path, ln, exc))
    seen = set()
    for doc in docs:
        if doc.doc_id in seen:
            raise DataError("%s: duplicate doc_id %s" % (path, doc.doc_id))
        seen.add(doc.doc_id)
    return docs


def _doc_line(doc: Document, confidence: Optional[float] = None) -> str:
    obj = {"url": doc.url}
    if doc.lang is not None:
        obj["lang"] = doc.lang
    if confidence is not None:
        obj["lang_confidence"] = confidence
    obj["content"] = doc.content
    obj["doc_id"] = doc.doc_id
    obj["normalized_url"] = doc.normalized_url
    obj["domain"] = doc.domain
    return json.dumps(obj, ensure_ascii=False)


def read_pair_tsv(path: str | Path, min_cols: int = 2) -> list[list[str]]:
    rows = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.rstrip("\n")
            if not line:
                continue
            cols = line.split("\t")
            if len(cols) < min_cols:
                raise DataError("%s:%d: expected at least %d columns" % (path, ln, min_cols))
            rows.append(cols)
    return rows


def run_dedup(
    in_path: str,
    out_path: str,
    report_path: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    raw = read_raw_documents(in_path)
    stats: dict = {}
    docs = dedup(raw, stats)
    atomic_write_text(out_path, "".join(_doc_line(d) + "\n" for d in docs))
    counts = {
        "in": stats["raw"],
        "out": stats["distinct"],
        "malformed": stats["malformed"],
        "reduction_pct": round(stats["reduction_pct"], 4),
    }
    if report_path:
        atomic_write_text(report_path, json.dumps(counts, sort_keys=True) + "\n")
    return _finish("dedup", t0, counts, manifest_path)


def run_langid(
    profiles_dir: str,
    in_path: str,
    out_path: str,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    docs = read_documents(in_path)
    profiles = load_profiles(profiles_dir)
    lines = []
    untaggable = 0
    passthrough = 0
    for doc in docs:
        if doc.lang:
            passthrough += 1
        try:
            tag = tag_language(doc, profiles)
        except UntaggableError:
            untaggable += 1
            continue
        tagged = Document(
            doc_id=doc.doc_id,
            url=doc.url,
            normalized_url=doc.normalized_url,
            domain=doc.domain,
            content=doc.content,
            lang=tag.code,
        )
        lines.append(_doc_line(tagged, confidence=tag.confidence))
    atomic_write_text(out_path, "".join(line + "\n" for line in lines))
    counts = {
        "in": len(docs),
        "out": len(docs) - untaggable,
        "untaggable": untaggable,
        "passthrough": passthrough,
    }
    return _finish("langid", t0, counts, manifest_path)


def run_match_urls(
    in_path: str,
    out_path: str,
    patterns_path: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    docs = read_documents(in_path)
    patterns = load_patterns(patterns_path) if patterns_path else default_patterns()
    tagged = [d for d in docs if d.lang]
    tags = {d.doc_id: LangTag(code=d.lang, confidence=1.0) for d in tagged}
    stats: dict = {}
    pairs = match_candidates(tagged, patterns, tags, stats)
    url_of = {d.doc_id: d.normalized_url for d in docs}
    lang_of = {d.doc_id: canonical_code(d.lang) for d in tagged}
    lines = []
    for p in pairs:
        lines.append(
            "\t".join(
                (
                    url_of[p.source_doc_id],
                    url_of[p.target_doc_id],
                    p.skeleton,
                    lang_of[p.source_doc_id],
                    lang_of[p.target_doc_id],
                )
            )
        )
    atomic_write_text(out_path, "".join(line + "\n" for line in lines))
    counts = {"in": len(docs), "out": len(pairs), **stats}
    return _finish("match-urls", t0, counts, manifest_path)


def run_segment(
    in_path: str,
    out_path: str,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    docs = read_documents(in_path)
    records = []
    for doc in docs:
        records.extend(segment(doc))
    tmp = out_path + ".tmp.%d" % os.getpid()
    write_sentences(tmp, records)
    os.replace(tmp, out_path)
    counts = {"in": len(docs), "out": len(records)}
    return _finish("segment", t0, counts, manifest_path)


def run_hash_embed(
    in_path: str,
    out_path: str,
    dim: int,
    sidecar_path: Optional[str] = None,
    manifest_out: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    sentences = read_sentences(in_path)
    order: list[str] = []
    by_doc: dict[str, list] = {}
    for rec in sentences:
        if rec.doc_id not in by_doc:
            order.append(rec.doc_id)
            by_doc[rec.doc_id] = []
        by_doc[rec.doc_id].append(rec)
    for doc_id in order:
        recs = sorted(by_doc[doc_id], key=lambda r: r.index)
        if [r.index for r in recs] != list(range(len(recs))):
            raise DataError("sentence indices for %s are not contiguous" % doc_id)
        by_doc[doc_id] = recs

    def records():
        for doc_id in order:
            recs = by_doc[doc_id]
            for rec in recs:
                yield doc_id, rec.index, hash_vector(rec.text, dim)
            yield doc_id, WHOLE_DOC_INDEX, hash_vector(whole_document_text(recs), dim)

    tmp_out = out_path + ".tmp.%d" % os.getpid()
    tmp_sidecar = sidecar_path + ".tmp.%d" % os.getpid() if sidecar_path else None
    info = write_embeddings(tmp_out, dim, records(), sidecar_path=tmp_sidecar)
    os.replace(tmp_out, out_path)
    if sidecar_path:
        os.replace(tmp_sidecar, sidecar_path)
    if manifest_out:
        manifest = {
            "encoder": "hash-sha256",
            "dim": info["dim"],
            "truncation": "none",
            "count": info["count"],
            "checksum": info["checksum"],
        }
        atomic_write_text(manifest_out, json.dumps(manifest, sort_keys=True) + "\n")
    counts = {"in": len(sentences), "out": info["count"], "dim": dim}
    return _finish("hash-embed", t0, counts, manifest_path)


def _load_store_for_docs(embeddings_path, sidecar_path, docs, need_whole_doc):
    if sidecar_path:
        return load_store_with_sidecar(embeddings_path, sidecar_path)
    keys = []
    for doc in docs:
        n = len(segment(doc))
        keys.extend((doc.doc_id, i) for i in range(n))
        if need_whole_doc:
            keys.append((doc.doc_id, WHOLE_DOC_INDEX))
    return load_store(embeddings_path, keys)


def run_align(
    docs_path: str,
    embeddings_path: str,
    method: str,
    src_lang: str,
    tgt_lang: str,
    out_path: str,
    sidecar_path: Optional[str] = None,
    parallelism: int = 1,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    docs = read_documents(docs_path)
    src_code = canonical_code(src_lang)
    tgt_code = canonical_code(tgt_lang)
    if src_code == tgt_code:
        raise DataError("source and target languages must differ")
    src_docs = [d for d in docs if d.lang and canonical_code(d.lang) == src_code]
    tgt_docs = [d for d in docs if d.lang and canonical_code(d.lang) == tgt_code]
    src_by_domain: dict[str, list[Document]] = {}
    for d in src_docs:
        src_by_domain.setdefault(d.domain, []).append(d)
    tgt_by_domain: dict[str, list[Document]] = {}
    for d in tgt_docs:
        tgt_by_domain.setdefault(d.domain, []).append(d)
    domains = sorted(set(src_by_domain) & set(tgt_by_domain))
    universe = [
        d for d in src_docs + tgt_docs if d.domain in set(domains)
    ]
    store = _load_store_for_docs(
        embeddings_path, sidecar_path, universe, need_whole_doc=method.upper() == "DE"
    )

    def do_domain(domain: str):
        member_docs = sorted(
            src_by_domain[domain] + tgt_by_domain[domain], key=lambda d: d.doc_id
        )
        index = build_domain_index(domain, member_docs)
        vectors = {}
        dropped = 0
        for doc in member_docs:
            try:
                dv = embed_document(doc, method, store, index)
            except (MissingVectorError, EmptyDocumentError):
                dropped += 1
                continue
            vectors[doc.doc_id] = dv
        src_set = DocumentSet(
            domain, src_code, tuple(sorted(d.doc_id for d in src_by_domain[domain]))
        )
        tgt_set = DocumentSet(
            domain, tgt_code, tuple(sorted(d.doc_id for d in tgt_by_domain[domain]))
        )
        stats: dict = {}
        scored = score_domain(src_set, tgt_set, vectors, stats)
        alignment = competitive_match(scored, stats)
        return alignment, stats, dropped

    results = {}
    if parallelism > 1 and len(domains) > 1:
        with ThreadPoolExecutor(max_workers=parallelism) as pool:
            for domain, res in zip(domains, pool.map(do_domain, domains)):
                results[domain] = res
    else:
        for domain in domains:
            results[domain] = do_domain(domain)

    url_of = {d.doc_id: d.normalized_url for d in docs}
    lines = []
    total_pairs = 0
    total_dropped = 0
    sort_s = 0.0
    select_s = 0.0
    for domain in domains:
        alignment, stats, dropped = results[domain]
        total_dropped += dropped
        sort_s += stats.get("sort_s", 0.0)
        select_s += stats.get("select_s", 0.0)
        for src_id, tgt_id, score in alignment.pairs:
            lines.append("%s\t%s\t%.12g" % (url_of[src_id], url_of[tgt_id], score))
            total_pairs += 1
    atomic_write_text(out_path, "".join(line + "\n" for line in lines))
    counts = {
        "in": len(docs),
        "out": total_pairs,
        "src_docs": len(src_docs),
        "tgt_docs": len(tgt_docs),
        "domains": len(domains),
        "dropped": total_dropped,
        "method": method.upper(),
        "sort_s": round(sort_s, 6),
        "select_s": round(select_s, 6),
    }
    return _finish("align", t0, counts, manifest_path)


def run_eval(
    pred_paths: Sequence[str],
    gold_paths: Sequence[str],
    langs: Sequence[str],
    report_path: Optional[str] = None,
    tier_map_path: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    if len(pred_paths) != len(gold_paths):
        raise DataError("need one --gold per --pred")
    if langs and len(langs) != len(pred_paths):
        raise DataError("need one --lang per --pred/--gold pair")
    if not langs:
        if len(pred_paths) != 1:
            raise DataError("multiple prediction files need explicit --lang values")
        langs = ["all"]
    if len(set(langs)) != len(langs):
        raise DataError("duplicate --lang values")
    predicted_by_language = {}
    gold_by_language = {}
    for pred_path, gold_path, lang in zip(pred_paths, gold_paths, langs):
        predicted_by_language[lang] = [
            (row[0], row[1]) for row in read_pair_tsv(pred_path)
        ]
        gold_by_language[lang] = make_gold(
            ((row[0], row[1]) for row in read_pair_tsv(gold_path)), lang
        )
    tier_map = None
    if tier_map_path:
        with open(tier_map_path, encoding="utf-8") as fh:
            tier_map = json.load(fh)
        if not isinstance(tier_map, dict):
            raise DataError("tier map must be a JSON object")
    report = evaluate(predicted_by_language, gold_by_language, tier_map)
    payload = json.dumps(report, sort_keys=True, indent=2) + "\n"
    if report_path:
        atomic_write_text(report_path, payload)
    counts = {
        "in": sum(len(v) for v in predicted_by_language.values()),
        "out": len(report["languages"]),
        "macro_avg": report["macro_avg"],
    }
    _finish("eval", t0, counts, manifest_path)
    return report


def run_mine(
    aligned_path: str,
    docs_path: str,
    embeddings_path: str,
    out_path: str,
    k: int = 4,
    threshold: float = 1.06,
    sidecar_path: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    params = MarginParams(k=k, threshold=threshold)
    docs = read_documents(docs_path)
    by_url = {d.normalized_url: d for d in docs}
    rows = read_pair_tsv(aligned_path)
    doc_pairs = []
    for row in rows:
        src = by_url.get(row[0])
        tgt = by_url.get(row[1])
        if src is None or tgt is None:
            raise DataError(
                "%s: aligned pair references unknown url %r"
                % (aligned_path, row[0] if src is None else row[1])
            )
        doc_pairs.append((src, tgt))
    needed = []
    seen = set()
    for src, tgt in doc_pairs:
        for doc in (src, tgt):
            if doc.doc_id not in seen:
                seen.add(doc.doc_id)
                needed.append(doc)
    store = _load_store_for_docs(embeddings_path, sidecar_path, needed, need_whole_doc=False)
    mined = []
    skipped = 0
    for src, tgt in doc_pairs:
        try:
            mined.extend(mine_sentences(src, tgt, store, params))
        except MissingVectorError:
            skipped += 1
    unique = dedup_bitext(mined)
    url_of = {d.doc_id: d.normalized_url for d in docs}
    lines = []
    for pair in unique:
        lines.append(
            "\t".join(
                (
                    pair.src_text.replace("\t", " "),
                    pair.tgt_text.replace("\t", " "),
                    "%.6f" % pair.margin_score,
                    url_of[pair.provenance[0]],
                    url_of[pair.provenance[1]],
                )
            )
        )
    atomic_write_text(out_path, "".join(line + "\n" for line in lines))
    counts = {
        "in": len(doc_pairs),
        "out": len(unique),
        "mined": len(mined),
        "skipped_pairs": skipped,
        "k": params.k,
        "threshold": params.threshold,
    }
    return _finish("mine", t0, counts, manifest_path)


HEADER_ROW = ["unit_id", "rater_id", "label"]


def run_agreement(
    in_path: str,
    report_path: Optional[str] = None,
    manifest_path: Optional[str] = None,
) -> dict:
    t0 = time.perf_counter()
    rows = []
    with open(in_path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        for i, row in enumerate(reader):
            if not row or all(not c.strip() for c in row):
                continue
            cells = [c.strip() for c in row]
            if i == 0 and [c.lower() for c in cells[:3]] == HEADER_ROW:
                continue
            if len(cells) < 3:
                raise DataError("%s: row %d has fewer than 3 columns" % (in_path, i + 1))
            rows.append((cells[0], cells[1], cells[2]))
    table = make_annotation_table(rows)
    alpha = krippendorff_alpha(table)
    report = {
        "alpha": alpha,
        "units": len(table.items),
        "raters": len(table.raters),
        "ratings": len(table.ratings),
    }
    if report_path:
        atomic_write_text(report_path, json.dumps(report, sort_keys=True, indent=2) + "\n")
    counts = {"in": len(rows), "out": 1, "alpha": alpha}
    _finish("agreement", t0, counts, manifest_path)
    return report
