"""Identifier stripping, skeleton reconstruction, and candidate pairing."""

import json
import random

import pytest

from docalign import (
    ConfigurationError,
    Document,
    LangIdentifierPattern,
    LangTag,
    default_patterns,
    load_patterns,
    make_doc_id,
    match_candidates,
    reconstruct_url,
    strip_language_identifiers,
)


def strip(url):
    return strip_language_identifiers(url)


def test_pattern_validation():
    LangIdentifierPattern("subdomain", "iso-code")
    LangIdentifierPattern("query-param", "numeric", key="lang")
    with pytest.raises(ConfigurationError):
        LangIdentifierPattern("fragment", "iso-code")
    with pytest.raises(ConfigurationError):
        LangIdentifierPattern("subdomain", "regex")
    with pytest.raises(ConfigurationError):
        LangIdentifierPattern("query-param", "iso-code")


def test_default_patterns_cover_positions():
    pats = default_patterns()
    positions = {p.position for p in pats}
    assert positions == {"subdomain", "path-segment", "query-param", "joined-param"}
    keyed = [p for p in pats if p.key]
    assert all(p.position in ("query-param", "joined-param") for p in keyed)


def test_load_patterns(tmp_path):
    path = tmp_path / "patterns.json"
    path.write_text(
        json.dumps(
            [
                {"position": "path-segment", "value_class": "iso-code"},
                {"position": "query-param", "value_class": "numeric", "key": "hl"},
            ]
        ),
        encoding="utf-8",
    )
    pats = load_patterns(path)
    assert len(pats) == 2
    assert pats[1].key == "hl"
    bad = tmp_path / "bad.json"
    bad.write_text("[]", encoding="utf-8")
    with pytest.raises(ConfigurationError):
        load_patterns(bad)


@pytest.mark.parametrize(
    "url,skeleton,idents",
    [
        ("eng.aaa.com", "aaa.com", [("subdomain", "eng", "en")]),
        ("thai.aaa.com/b/", "aaa.com/b/", [("subdomain", "thai", "th")]),
        ("aaa.com/en-gb/b", "aaa.com/b", [("path-segment", "en-gb", "en")]),
        ("aaa.com/zh-cn/b", "aaa.com/b", [("path-segment", "zh-cn", "zh")]),
        ("aaa.com/English/b", "aaa.com/b", [("path-segment", "English", "en")]),
        ("aaa.com/Yoruba/b", "aaa.com/b", [("path-segment", "Yoruba", "yo")]),
        ("aaa.com/b/en", "aaa.com/b", [("path-segment", "en", "en")]),
        ("aaa.com/b/vi", "aaa.com/b", [("path-segment", "vi", "vi")]),
        ("aaa.com/b&lang=english", "aaa.com/b", [("joined-param", "lang=english", "en")]),
        ("aaa.com/b&lang=arabic", "aaa.com/b", [("joined-param", "lang=arabic", "ar")]),
        ("aaa.com/b?lang=en", "aaa.com/b", [("query-param", "lang=en", "en")]),
        ("aaa.com/b?lang=fr", "aaa.com/b", [("query-param", "lang=fr", "fr")]),
        ("aaa.com/b?lang=1", "aaa.com/b", [("query-param", "lang=1", None)]),
        ("aaa.com/b", "aaa.com/b", []),
        ("fr.de.aaa.com/x", "aaa.com/x", [("subdomain", "fr", "fr"), ("subdomain", "de", "de")]),
        ("aaa.com/en/fr/x", "aaa.com/x", [("path-segment", "en", "en"), ("path-segment", "fr", "fr")]),
        ("aaa.com/x?lang=en&lang=fr", "aaa.com/x", [("query-param", "lang=en", "en"), ("query-param", "lang=fr", "fr")]),
        ("aaa.com/b?page=2&lang=de", "aaa.com/b?page=2", [("query-param", "lang=de", "de")]),
        ("aaa.com/deu/x", "aaa.com/x", [("path-segment", "deu", "de")]),
    ],
)
def test_strip_positive(url, skeleton, idents):
    result = strip(url)
    assert result.skeleton == skeleton
    got = [(i.position, i.raw_text, i.inferred_lang) for i in result.identifiers]
    assert got == idents
    assert reconstruct_url(result) == url


@pytest.mark.parametrize(
    "url",
    [
        "aaa.com",
        "aaa.com/b/c",
        "en.com",                 # bare two-label host, nothing to spare
        "aaa.com/bend/x",         # not a whole segment
        "aaa.com/xx/x",           # not a language code
        "aaa.com/b?page=2",       # unknown key
        "aaa.com/b?langer=en",    # unknown key
        "aaa.com/12/x",           # numeric path segments stay
        "aaa.com/it",             # ambiguous code without a closing slash
        "aaa.com/b#lang=en",      # fragment is out of scope
    ],
)
def test_strip_negative(url):
    result = strip(url)
    assert result.skeleton == url
    assert result.identifiers == ()


def test_strip_ambiguous_code_needs_closing_slash():
    assert strip("aaa.com/it").identifiers == ()
    closed = strip("aaa.com/it/x")
    assert closed.skeleton == "aaa.com/x"
    assert [i.raw_text for i in closed.identifiers] == ["it"]
    open_code = strip("aaa.com/fr")
    assert open_code.skeleton == "aaa.com"
    assert [i.raw_text for i in open_code.identifiers] == ["fr"]


def test_strip_offsets_support_reconstruction():
    result = strip("aaa.com/en-gb/b")
    ident = result.identifiers[0]
    assert ident.offset == len("aaa.com")
    assert ident.removed == "/en-gb"
    assert reconstruct_url(result) == "aaa.com/en-gb/b"


def test_reconstruct_randomized():
    rng = random.Random(23)
    hosts = ["aaa.com", "files.bbb.org", "c.dd"]
    codes = ["en", "fr", "de", "vi", "zh-cn", "English", "thai"]
    plain = ["b", "page", "item7", "x-y"]
    for _ in range(300):
        parts = [rng.choice(plain) for _ in range(rng.randrange(0, 3))]
        where = rng.randrange(0, len(parts) + 1)
        parts.insert(where, rng.choice(codes))
        url = rng.choice(hosts) + "/" + "/".join(parts)
        if rng.random() < 0.5:
            url += "?lang=" + rng.choice(["en", "fr", "1"])
        result = strip(url)
        assert reconstruct_url(result) == url


def make_doc(url, lang):
    return Document(
        doc_id=make_doc_id(url),
        url="http://" + url,
        normalized_url=url,
        domain=url.split("/")[0],
        content="text",
        lang=lang,
    )


def test_match_candidates_basic():
    docs = [
        make_doc("aaa.com/en/p1", "en"),
        make_doc("aaa.com/fr/p1", "fr"),
        make_doc("aaa.com/en/p2", "en"),
        make_doc("aaa.com/fr/p2", "fr"),
    ]
    pairs = match_candidates(docs)
    assert len(pairs) == 2
    skeletons = [p.skeleton for p in pairs]
    assert skeletons == sorted(skeletons)
    for p in pairs:
        assert p.source_doc_id < p.target_doc_id
        assert p.evidence == "both"


def test_match_candidates_single_sided_evidence():
    docs = [make_doc("eng.aaa.com", "en"), make_doc("aaa.com", "fr")]
    pairs = match_candidates(docs)
    assert len(pairs) == 1
    assert pairs[0].evidence in ("source", "target")
    with_ident = (
        pairs[0].source_identifiers
        if pairs[0].evidence == "source"
        else pairs[0].target_identifiers
    )
    assert [i.raw_text for i in with_ident] == ["eng"]


def test_match_candidates_discards_crowded_buckets():
    docs = [
        make_doc("aaa.com/en/p1", "en"),
        make_doc("aaa.com/fr/p1", "fr"),
        make_doc("aaa.com/es/p1", "fr"),
    ]
    stats = {}
    assert match_candidates(docs, stats=stats) == []
    assert stats["discarded_buckets"] == 1


def test_match_candidates_requires_evidence():
    docs = [make_doc("aaa.com/b", "en"), make_doc("bbb.com/b", "fr")]
    assert match_candidates(docs) == []


def test_match_candidates_rejects_same_language():
    docs = [make_doc("aaa.com/en/p1", "en"), make_doc("aaa.com/fr/p1", "en")]
    stats = {}
    assert match_candidates(docs, stats=stats) == []


def test_match_candidates_skips_untagged():
    docs = [make_doc("aaa.com/en/p1", "en"), make_doc("aaa.com/fr/p1", None)]
    assert match_candidates(docs) == []


def test_match_candidates_explicit_tags_override():
    docs = [make_doc("aaa.com/en/p1", None), make_doc("aaa.com/fr/p1", None)]
    tags = {
        docs[0].doc_id: LangTag("en", 0.8),
        docs[1].doc_id: LangTag("fr", 0.8),
    }
    pairs = match_candidates(docs, tags=tags)
    assert len(pairs) == 1
