"""Binary embedding file format plus the sentences JSONL schema.

Layout: 8 magic bytes, uint32 LE dim, uint64 LE record count; each record
is a 64-bit FNV-1a key hash followed by dim little-endian float32 values.
The key bytes are utf8(doc_id) + "\\t" + int64 LE index; index -1 marks a
whole-document vector. An optional sidecar JSONL maps doc_id/index to the
byte offset of each record.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path
from typing import Iterable, Iterator, Optional, Sequence

import numpy as np

from .embed import EmbeddingStore, SentenceRecord
from .errors import DataError, EmbeddingFormatError

MAGIC = b"CCAEMB1\x00"
HEADER = struct.Struct("<8sIQ")
WHOLE_DOC_INDEX = -1
FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
MASK64 = 0xFFFFFFFFFFFFFFFF


def fnv1a_64(data: bytes) -> int:
    h = FNV_OFFSET
    for b in data:
        h ^= b
        h = (h * FNV_PRIME) & MASK64
    return h


def record_key(doc_id: str, index: int) -> int:
    """64-bit hash key for one record."""
    return fnv1a_64(doc_id.encode("utf-8") + b"\t" + struct.pack("<q", index))


def write_embeddings(
    path: str | Path,
    dim: int,
    records: Iterable[tuple[str, int, np.ndarray]],
    sidecar_path: Optional[str | Path] = None,
) -> dict:
    """Write (doc_id, index, vector) records; returns count and checksum.

    The checksum is SHA-256 over every byte after the fixed header.
    """
    if dim < 1:
        raise EmbeddingFormatError("dim must be positive")
    count = 0
    payload = hashlib.sha256()
    sidecar = open(sidecar_path, "w", encoding="utf-8") if sidecar_path else None
    try:
        with open(path, "wb") as fh:
            fh.write(HEADER.pack(MAGIC, dim, 0))
            offset = HEADER.size
            for doc_id, index, vec in records:
                arr = np.asarray(vec, dtype="<f4")
                if arr.shape != (dim,):
                    raise EmbeddingFormatError(
                        "vector for %s[%d] has shape %s, want (%d,)"
                        % (doc_id, index, arr.shape, dim)
                    )
                rec = struct.pack("<Q", record_key(doc_id, index)) + arr.tobytes()
                fh.write(rec)
                payload.update(rec)
                if sidecar is not None:
                    sidecar.write(
                        json.dumps(
                            {"doc_id": doc_id, "index": index, "offset": offset},
                            ensure_ascii=False,
                        )
                        + "\n"
                    )
                offset += len(rec)
                count += 1
            fh.seek(0)
            fh.write(HEADER.pack(MAGIC, dim, count))
    finally:
        if sidecar is not None:
            sidecar.close()
    return {"dim": dim, "count": count, "checksum": payload.hexdigest()}


def _read_header(fh) -> tuple[int, int]:
    raw = fh.read(HEADER.size)
    if len(raw) != HEADER.size:
        raise EmbeddingFormatError("truncated header")
    magic, dim, count = HEADER.unpack(raw)
    if magic != MAGIC:
        raise EmbeddingFormatError("bad magic bytes %r" % magic)
    if dim == 0:
        raise EmbeddingFormatError("zero dimension in header")
    return dim, count


def read_header(path: str | Path) -> tuple[int, int]:
    """Return (dim, record count) after validating the magic bytes."""
    with open(path, "rb") as fh:
        return _read_header(fh)


def iter_records(path: str | Path) -> Iterator[tuple[int, np.ndarray]]:
    """Yield (key hash, float32 vector) for every record in file order."""
    with open(path, "rb") as fh:
        dim, count = _read_header(fh)
        rec_size = 8 + 4 * dim
        for i in range(count):
            raw = fh.read(rec_size)
            if len(raw) != rec_size:
                raise EmbeddingFormatError("truncated record %d of %d" % (i, count))
            (key,) = struct.unpack_from("<Q", raw)
            yield key, np.frombuffer(raw, dtype="<f4", count=dim, offset=8).copy()
        if fh.read(1):
            raise EmbeddingFormatError("trailing bytes after %d records" % count)


def checksum(path: str | Path) -> str:
    """SHA-256 hex digest over everything after the header."""
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        _read_header(fh)
        while True:
            chunk = fh.read(1 << 20)
            if not chunk:
                break
            digest.update(chunk)
    return digest.hexdigest()


def validate_embeddings(path: str | Path, manifest_path: Optional[str | Path] = None) -> dict:
    """Walk the file, checking sizes; optionally compare with a manifest."""
    dim, count = read_header(path)
    n = 0
    for _key, _vec in iter_records(path):
        n += 1
    if n != count:
        raise EmbeddingFormatError("header count %d but %d records" % (count, n))
    info = {"dim": dim, "count": count, "checksum": checksum(path)}
    if manifest_path is not None:
        with open(manifest_path, encoding="utf-8") as fh:
            manifest = json.load(fh)
        for key in ("dim", "count", "checksum"):
            if manifest.get(key) != info[key]:
                raise EmbeddingFormatError(
                    "manifest %s=%r does not match file %s=%r"
                    % (key, manifest.get(key), key, info[key])
                )
    return info


def load_store(path: str | Path, keys: Iterable[tuple[str, int]]) -> EmbeddingStore:
    """Load the vectors for the given (doc_id, index) keys.

    Keys are matched through their hashes; a hash shared by two distinct
    requested keys is refused rather than silently misassigned.
    """
    expect: dict[int, tuple[str, int]] = {}
    for doc_id, index in keys:
        h = record_key(doc_id, index)
        prior = expect.get(h)
        if prior is not None and prior != (doc_id, index):
            raise EmbeddingFormatError(
                "key hash collision between %r and %r" % (prior, (doc_id, index))
            )
        expect[h] = (doc_id, index)
    dim, _count = read_header(path)
    store = EmbeddingStore(dim=dim)
    for key, vec in iter_records(path):
        target = expect.get(key)
        if target is None:
            continue
        doc_id, index = target
        if index == WHOLE_DOC_INDEX:
            store.whole_doc_vectors[doc_id] = vec
        else:
            store.sentence_vectors[(doc_id, index)] = vec
    return store


def load_sidecar(path: str | Path) -> list[tuple[str, int, int]]:
    entries = []
    with open(path, encoding="utf-8") as fh:
        for ln, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                obj = json.loads(line)
                entries.append((obj["doc_id"], int(obj["index"]), int(obj["offset"])))
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise DataError("%s:%d: bad sidecar entry: %s" % (path, ln, exc))
    return entries


def load_store_with_sidecar(path: str | Path, sidecar_path: str | Path) -> EmbeddingStore:
    """Random-access load of every record listed in the sidecar."""
    entries = load_sidecar(sidecar_path)
    with open(path, "rb") as fh:
        dim, _count = _read_header(fh)
        rec_size = 8 + 4 * dim
        store = EmbeddingStore(dim=dim)
        for doc_id, index, offset in entries:
            fh.seek(offset)
            raw = fh.read(rec_size)
            if len(raw) != rec_size:
                raise EmbeddingFormatError("truncated record at offset %d" % offset)
            (key,) = struct.unpack_from("<Q", raw)
            if key != record_key(doc_id, index):
                raise EmbeddingFormatError(
                    "record at offset %d does not hash to %s[%d]" % (offset, doc_id, index)
                )
            vec = np.frombuffer(raw, dtype="<f4", count=dim, offset=8).copy()
            if index == WHOLE_DOC_INDEX:
                store.whole_doc_vectors[doc_id] = vec
            else:
                store.sentence_vectors[(doc_id, index)] = vec
    return store


def write_sentences(path: str | Path, records: Iterable[SentenceRecord]) -> int:
    """Write the sentences JSONL consumed by the exporters."""
    n = 0
    with open(path, "w", encoding="utf-8") as fh:
        for r in records:
            fh.write(
                json.dumps(
                    {"doc_id": r.doc_id, "index": r.index, "text": r.text, "tokens": r.token_count},
                    ensure_ascii=False,
                )
                + "\n"
            )
            n += 1
    return n


def read_sentences(path: str | Path) -> list[SentenceRecord]:
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
            try:
                records.append(
                    SentenceRecord(
                        doc_id=obj["doc_id"],
                        index=int(obj["index"]),
                        text=obj["text"],
                        token_count=int(obj["tokens"]),
                    )
                )
            except (KeyError, TypeError, ValueError) as exc:
                raise DataError("%s:%d: bad sentence record: %s" % (path, ln, exc))
    return records
