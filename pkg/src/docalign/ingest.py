"""URL normalization and streaming deduplication of raw web documents.

Raw records are keyed by normalized URL; one survivor is kept per key,
preferring the longest content in UTF-8 bytes.
"""

from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass
from typing import Iterable, Optional

from .errors import MalformedUrlError

SCHEME_RE = re.compile(r"^[A-Za-z][A-Za-z0-9+.\-]*://")
HOST_END_CHARS = "/?#"
DOMAIN_END_CHARS = "/?&#"
DOC_ID_HEX_LEN = 16


@dataclass(frozen=True)
class RawDocument:
    """One crawl record before deduplication."""

    url: str
    content: str
    snapshot_id: Optional[str] = None
    lang: Optional[str] = None


@dataclass(frozen=True)
class Document:
    """A deduplicated web page."""

    doc_id: str
    url: str
    normalized_url: str
    domain: str
    content: str
    lang: Optional[str] = None


def _split_host_tail(url: str) -> tuple[str, str]:
    """Split a scheme-less URL into (host, tail-starting-at-separator)."""
    cut = len(url)
    for ch in HOST_END_CHARS:
        pos = url.find(ch)
        if pos != -1:
            cut = min(cut, pos)
    return url[:cut], url[cut:]


def normalize_url(url: str) -> str:
    """Strip scheme and leading "www.", lowercase the host, keep the tail.

    The path and query are preserved byte-for-byte; a trailing "/" on an
    otherwise-empty path is dropped. Raises MalformedUrlError for inputs
    that yield no usable host.
    """
    if not isinstance(url, str):
        raise MalformedUrlError("url is not a string")
    stripped = url.strip()
    if not stripped:
        raise MalformedUrlError("empty url")
    if any(c.isspace() or ord(c) < 0x20 for c in stripped):
        raise MalformedUrlError("whitespace or control character in url: %r" % url)
    rest = SCHEME_RE.sub("", stripped)
    if rest.startswith("//"):
        # Protocol-relative form.
        rest = rest[2:]
    if not rest:
        raise MalformedUrlError("no host in url: %r" % url)
    host, tail = _split_host_tail(rest)
    host = host.lower()
    while host.startswith("www."):
        host = host[4:]
    if not host or not any(c.isalnum() for c in host):
        raise MalformedUrlError("no host in url: %r" % url)
    if tail == "/":
        tail = ""
    return host + tail


def extract_domain(normalized_url: str) -> str:
    """Return the host portion of an already-normalized URL."""
    if not normalized_url:
        raise MalformedUrlError("empty normalized url")
    cut = len(normalized_url)
    for ch in DOMAIN_END_CHARS:
        pos = normalized_url.find(ch)
        if pos != -1:
            cut = min(cut, pos)
    host = normalized_url[:cut]
    if not host:
        raise MalformedUrlError("empty host in %r" % normalized_url)
    return host


def content_hash(content: str) -> str:
    """Hex digest used for deterministic tie-breaking between equal lengths."""
    return hashlib.sha256(content.encode("utf-8")).hexdigest()


def make_doc_id(normalized_url: str) -> str:
    """Stable short identifier derived from the normalized URL."""
    digest = hashlib.sha256(normalized_url.encode("utf-8")).hexdigest()
    return digest[:DOC_ID_HEX_LEN]


def dedup(records: Iterable[RawDocument], stats: Optional[dict] = None) -> list[Document]:
    """Collapse a record stream to one Document per distinct normalized URL.

    The survivor has the longest content in UTF-8 bytes; ties go to the
    lexicographically smallest content hash. Output is sorted by
    normalized_url. Unparseable URLs are skipped and counted in stats.
    """
    raw_count = 0
    malformed = 0
    # Key fields beyond (length, hash) keep the survivor independent of
    # input order even when distinct raw records carry identical content.
    best: dict[str, tuple[tuple[int, str, str, str, str], RawDocument]] = {}
    for rec in records:
        raw_count += 1
        try:
            norm = normalize_url(rec.url)
        except MalformedUrlError:
            malformed += 1
            continue
        rank = (
            -len(rec.content.encode("utf-8")),
            content_hash(rec.content),
            rec.url,
            rec.snapshot_id or "",
            rec.lang or "",
        )
        kept = best.get(norm)
        if kept is None or rank < kept[0]:
            best[norm] = (rank, rec)
    docs = []
    for norm in sorted(best):
        rec = best[norm][1]
        docs.append(
            Document(
                doc_id=make_doc_id(norm),
                url=rec.url,
                normalized_url=norm,
                domain=extract_domain(norm),
                content=rec.content,
                lang=rec.lang,
            )
        )
    if stats is not None:
        stats["raw"] = raw_count
        stats["malformed"] = malformed
        stats["distinct"] = len(docs)
        stats["reduction_pct"] = (
            100.0 * (raw_count - len(docs)) / raw_count if raw_count else 0.0
        )
    return docs
