"""Language-identifier stripping and skeleton-based candidate pairing.

A normalized URL is scanned in three regions: subdomain labels, path
segments, and lang-keyed parameters. Recognized identifiers are removed
together with one adjoining separator; the residue is the skeleton.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional, Sequence

from .errors import ConfigurationError
from .ingest import Document
from .langdata import (
    AMBIGUOUS_CODES,
    ISO_639_1,
    ISO_639_3_TO_1,
    LANGUAGE_NAMES,
    LEGACY_CODES,
    canonical_code,
)
from .langid import LangTag, verify_pair_language

POSITIONS = ("subdomain", "path-segment", "query-param", "joined-param")
VALUE_CLASSES = ("iso-code", "locale-code", "language-name", "numeric")
DEFAULT_PARAM_KEYS = ("lang", "language", "locale", "l", "lng")

LOCALE_RE = re.compile(r"^([A-Za-z]{2,3})[-_]([A-Za-z]{2}|[A-Za-z]{4}|\d{2,3})$")
PARAM_RE = re.compile(r"([?&])([^?&#=/]+)=([^?&#]*)")
NUMERIC_RE = re.compile(r"^\d+$")
HOST_END_CHARS = "/?&#"


@dataclass(frozen=True)
class LangIdentifierPattern:
    position: str
    value_class: str
    key: Optional[str] = None

    def __post_init__(self) -> None:
        if self.position not in POSITIONS:
            raise ConfigurationError("unknown position %r" % self.position)
        if self.value_class not in VALUE_CLASSES:
            raise ConfigurationError("unknown value class %r" % self.value_class)
        if self.position in ("query-param", "joined-param") and not self.key:
            raise ConfigurationError("%s patterns need a key" % self.position)


@dataclass(frozen=True)
class UrlIdentifier:
    """One stripped identifier plus what it takes to undo the removal."""

    position: str
    raw_text: str
    inferred_lang: Optional[str]
    offset: int
    removed: str


@dataclass(frozen=True)
class StrippedUrl:
    skeleton: str
    identifiers: tuple[UrlIdentifier, ...]


@dataclass(frozen=True)
class CandidatePair:
    source_doc_id: str
    target_doc_id: str
    skeleton: str
    evidence: str
    source_identifiers: tuple[UrlIdentifier, ...] = ()
    target_identifiers: tuple[UrlIdentifier, ...] = ()


def default_patterns() -> tuple[LangIdentifierPattern, ...]:
    pats = []
    for pos in ("subdomain", "path-segment"):
        for vc in ("iso-code", "locale-code", "language-name"):
            pats.append(LangIdentifierPattern(pos, vc))
    for pos in ("query-param", "joined-param"):
        for key in DEFAULT_PARAM_KEYS:
            for vc in VALUE_CLASSES:
                pats.append(LangIdentifierPattern(pos, vc, key))
    return tuple(pats)


def load_patterns(path: str | Path) -> tuple[LangIdentifierPattern, ...]:
    """Read a JSON list of {"position", "value_class", "key"?} objects."""
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    if not isinstance(data, list) or not data:
        raise ConfigurationError("pattern table must be a non-empty list")
    pats = []
    for obj in data:
        pats.append(
            LangIdentifierPattern(
                position=obj.get("position", ""),
                value_class=obj.get("value_class", ""),
                key=obj.get("key"),
            )
        )
    return tuple(pats)


class _Compiled:
    """Pattern table folded into per-position lookup sets."""

    def __init__(self, patterns: Iterable[LangIdentifierPattern]):
        self.subdomain: set[str] = set()
        self.path: set[str] = set()
        self.params: dict[tuple[str, str], set[str]] = {}
        for pat in patterns:
            if pat.position == "subdomain":
                self.subdomain.add(pat.value_class)
            elif pat.position == "path-segment":
                self.path.add(pat.value_class)
            else:
                key = (pat.position, pat.key.lower())
                self.params.setdefault(key, set()).add(pat.value_class)


def _iso_code(value: str) -> Optional[str]:
    v = value.lower()
    if v in LEGACY_CODES:
        return LEGACY_CODES[v]
    if len(v) == 2 and v in ISO_639_1:
        return v
    if len(v) == 3 and v in ISO_639_3_TO_1:
        return ISO_639_3_TO_1[v]
    return None


def _classify(value: str, allowed: set[str]) -> Optional[tuple[str, Optional[str]]]:
    """Return (value_class, inferred code) for a recognized value."""
    if not value:
        return None
    if "iso-code" in allowed:
        code = _iso_code(value)
        if code is not None:
            return "iso-code", code
    if "locale-code" in allowed:
        m = LOCALE_RE.match(value)
        if m:
            code = _iso_code(m.group(1))
            if code is not None:
                return "locale-code", code
    if "language-name" in allowed:
        code = LANGUAGE_NAMES.get(value.lower())
        if code is not None:
            return "language-name", code
    if "numeric" in allowed and NUMERIC_RE.match(value):
        return "numeric", None
    return None


def strip_language_identifiers(
    normalized_url: str,
    patterns: Optional[Sequence[LangIdentifierPattern]] = None,
) -> StrippedUrl:
    """Remove every recognized identifier with one adjoining separator.

    Returns the skeleton and the identifiers in offset order; a URL with
    no identifiers comes back unchanged with an empty identifier list.
    """
    url = normalized_url
    compiled = _Compiled(patterns if patterns is not None else default_patterns())
    host_end = len(url)
    for ch in HOST_END_CHARS:
        pos = url.find(ch)
        if pos != -1:
            host_end = min(host_end, pos)
    frag = url.find("#")

    spans: list[tuple[int, int, UrlIdentifier]] = []

    # Subdomain labels; the registrable last two labels are never stripped.
    labels = url[:host_end].split(".")
    if len(labels) >= 3 and compiled.subdomain:
        pos = 0
        for label in labels[:-2]:
            res = _classify(label, compiled.subdomain)
            if res is not None:
                ident = UrlIdentifier("subdomain", label, res[1], pos, label + ".")
                spans.append((pos, pos + len(label) + 1, ident))
            pos += len(label) + 1

    # Lang-keyed parameters, both "?"-introduced and "&"-joined.
    param_spans: list[tuple[int, int, UrlIdentifier]] = []
    if compiled.params:
        qmark = url.find("?")
        for m in PARAM_RE.finditer(url, host_end):
            if frag != -1 and m.start() >= frag:
                break
            sep, key, value = m.group(1), m.group(2), m.group(3)
            joined = sep == "&" and (qmark == -1 or m.start() < qmark)
            position = "joined-param" if joined else "query-param"
            allowed = compiled.params.get((position, key.lower()))
            if not allowed:
                continue
            res = _classify(value, allowed)
            if res is None:
                continue
            ident = UrlIdentifier(position, key + "=" + value, res[1], m.start(), m.group(0))
            param_spans.append((m.start(), m.end(), ident))

    # Path segments between host and the query (or the first stripped param).
    path_end = len(url)
    for ch in "?#":
        pos = url.find(ch, host_end)
        if pos != -1:
            path_end = min(path_end, pos)
    if param_spans:
        path_end = min(path_end, min(s for s, _e, _i in param_spans))
    if compiled.path:
        i = host_end
        while i < path_end:
            if url[i] != "/":
                i += 1
                continue
            j = url.find("/", i + 1)
            if j == -1 or j > path_end:
                j = path_end
            seg = url[i + 1 : j]
            res = _classify(seg, compiled.path) if seg else None
            if res is not None:
                closed = j < len(url) and url[j] == "/"
                if seg.lower() not in AMBIGUOUS_CODES or closed:
                    ident = UrlIdentifier("path-segment", seg, res[1], i, "/" + seg)
                    spans.append((i, j, ident))
            i = j

    spans.extend(param_spans)
    spans.sort(key=lambda t: t[0])
    parts = []
    idents = []
    prev = 0
    for start, end, ident in spans:
        parts.append(url[prev:start])
        idents.append(ident)
        prev = end
    parts.append(url[prev:])
    return StrippedUrl(skeleton="".join(parts), identifiers=tuple(idents))


def reconstruct_url(stripped: StrippedUrl) -> str:
    """Reinsert every removed span; inverse of strip_language_identifiers."""
    parts = []
    consumed = 0
    removed_before = 0
    for ident in sorted(stripped.identifiers, key=lambda i: i.offset):
        pos = ident.offset - removed_before
        parts.append(stripped.skeleton[consumed:pos])
        parts.append(ident.removed)
        consumed = pos
        removed_before += len(ident.removed)
    parts.append(stripped.skeleton[consumed:])
    return "".join(parts)


def match_candidates(
    docs: Iterable[Document],
    patterns: Optional[Sequence[LangIdentifierPattern]] = None,
    tags: Optional[Mapping[str, LangTag]] = None,
    stats: Optional[dict] = None,
) -> list[CandidatePair]:
    """Bucket tagged documents by skeleton and emit verified pairs.

    Buckets with more than one document in any language are discarded
    whole. Each emitted pair has distinct tags, at least one identifier,
    and passes verify_pair_language. Output is sorted by
    (skeleton, source_doc_id); source is the smaller doc_id.
    """
    pats = tuple(patterns) if patterns is not None else default_patterns()
    doc_list = list(docs)
    if tags is None:
        tags = {
            d.doc_id: LangTag(code=canonical_code(d.lang), confidence=1.0)
            for d in doc_list
            if d.lang
        }
    buckets: dict[str, list[Document]] = {}
    stripped: dict[str, StrippedUrl] = {}
    for doc in doc_list:
        if doc.doc_id not in tags:
            continue
        s = strip_language_identifiers(doc.normalized_url, pats)
        stripped[doc.doc_id] = s
        buckets.setdefault(s.skeleton, []).append(doc)

    pairs: list[CandidatePair] = []
    discarded_buckets = 0
    rejected = 0
    for skeleton in sorted(buckets):
        members = sorted(buckets[skeleton], key=lambda d: d.doc_id)
        if len(members) < 2:
            continue
        langs = [canonical_code(tags[d.doc_id].code) for d in members]
        if len(set(langs)) < len(langs):
            discarded_buckets += 1
            continue
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                a, b = members[i], members[j]
                ia = stripped[a.doc_id].identifiers
                ib = stripped[b.doc_id].identifiers
                if not ia and not ib:
                    continue
                evidence = "both" if ia and ib else ("source" if ia else "target")
                pair = CandidatePair(
                    source_doc_id=a.doc_id,
                    target_doc_id=b.doc_id,
                    skeleton=skeleton,
                    evidence=evidence,
                    source_identifiers=ia,
                    target_identifiers=ib,
                )
                if verify_pair_language(pair, tags):
                    pairs.append(pair)
                else:
                    rejected += 1
    if stats is not None:
        stats["discarded_buckets"] = discarded_buckets
        stats["rejected_pairs"] = rejected
        stats["buckets"] = len(buckets)
    return pairs
