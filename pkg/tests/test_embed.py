"""Segmentation, weighting schemes, and document vectors."""

import math
import random

import numpy as np
import pytest

from docalign import (
    ConfigurationError,
    DataError,
    Document,
    DomainIndex,
    EmbeddingStore,
    EmptyDocumentError,
    MissingVectorError,
    SentenceRecord,
    UndefinedSimilarityError,
    build_domain_index,
    cosine,
    embed_document,
    hash_vector,
    idf_weight,
    segment,
    sentence_average,
    sl_weight,
    slidf_weight,
    weighted_average,
    whole_document_text,
)


def make_doc(content, doc_id="d1"):
    return Document(
        doc_id=doc_id,
        url="http://x.com/" + doc_id,
        normalized_url="x.com/" + doc_id,
        domain="x.com",
        content=content,
        lang="en",
    )


def test_segment_splits_trims_drops():
    doc = make_doc("  first line \n\n second line\n   \nthird")
    records = segment(doc)
    assert [r.text for r in records] == ["first line", "second line", "third"]
    assert [r.index for r in records] == [0, 1, 2]
    assert [r.token_count for r in records] == [2, 2, 1]
    assert whole_document_text(records) == "first line\nsecond line\nthird"


def test_segment_empty_doc():
    assert segment(make_doc("  \n \n")) == []


def test_build_domain_index_counts_documents_not_instances():
    docs = [
        make_doc("shared\nshared\nonly one", "a"),
        make_doc("shared\nother", "b"),
        make_doc("third body", "c"),
    ]
    index = build_domain_index("x.com", docs)
    assert index.n_docs == 3
    assert index.df["shared"] == 2
    assert index.df["only one"] == 1
    assert "missing" not in index.df


def test_sentence_average_matches_numpy():
    rng = np.random.default_rng(5)
    for _ in range(20):
        vecs = [rng.normal(size=6) for _ in range(rng.integers(1, 8))]
        got = sentence_average(vecs)
        assert np.allclose(got, np.mean(np.stack(vecs), axis=0), atol=1e-12)


def test_sentence_average_empty():
    with pytest.raises(EmptyDocumentError):
        sentence_average([])


def test_weighted_average_keeps_instance_count_normalizer():
    vecs = [np.array([1.0, 0.0]), np.array([0.0, 1.0])]
    got = weighted_average(vecs, [0.4, 0.2])
    assert got == pytest.approx([0.2, 0.1], abs=1e-12)


def test_weighted_average_scaling_weights_scales_output():
    rng = np.random.default_rng(9)
    vecs = [rng.normal(size=4) for _ in range(5)]
    weights = [0.1, 0.7, 0.0, 2.0, 0.3]
    base = weighted_average(vecs, weights)
    doubled = weighted_average(vecs, [2 * w for w in weights])
    assert np.allclose(doubled, 2 * base, atol=1e-12)


def test_weighted_average_rejects_bad_weights():
    vecs = [np.ones(3)]
    with pytest.raises(DataError):
        weighted_average(vecs, [-0.1])
    with pytest.raises(DataError):
        weighted_average(vecs, [float("nan")])
    with pytest.raises(DataError):
        weighted_average(vecs, [0.5, 0.5])
    with pytest.raises(EmptyDocumentError):
        weighted_average([], [])


def rec(text, doc_id="d1", index=0):
    return SentenceRecord(doc_id, index, text, len(text.split()))


def test_sl_weight_shares():
    sentences = [rec("a b c d", index=0), rec("a b c d", index=1), rec("x y", index=2)]
    assert sl_weight(sentences[0], sentences) == pytest.approx(0.4, abs=1e-12)
    assert sl_weight(sentences[2], sentences) == pytest.approx(0.2, abs=1e-12)


def test_sl_weight_zero_tokens():
    empty = SentenceRecord("d1", 0, "", 0)
    with pytest.raises(EmptyDocumentError):
        sl_weight(empty, [empty])


def test_idf_weight_values():
    index = DomainIndex("x.com", 3, {"seen once": 1, "seen everywhere": 3})
    assert idf_weight("seen once", index) == pytest.approx(math.log(2.0), abs=1e-12)
    assert idf_weight("never seen", index) == pytest.approx(math.log(4.0), abs=1e-12)
    assert idf_weight("seen everywhere", index) == 0.0


def test_slidf_weight_is_product():
    index = DomainIndex("x.com", 3, {"a b c d": 1})
    sentences = [rec("a b c d", index=0), rec("x y z w q p", index=1)]
    got = slidf_weight(sentences[0], sentences, index)
    assert got == pytest.approx(0.4 * math.log(2.0), abs=1e-12)


def store_for(doc, dim=16):
    store = EmbeddingStore(dim=dim)
    records = segment(doc)
    for r in records:
        store.sentence_vectors[(doc.doc_id, r.index)] = hash_vector(r.text, dim)
    store.whole_doc_vectors[doc.doc_id] = hash_vector(
        whole_document_text(records), dim
    )
    return store


def test_embed_document_de_uses_whole_doc_vector():
    doc = make_doc("one line\nand two")
    store = store_for(doc)
    dv = embed_document(doc, "DE", store)
    assert dv.method == "DE"
    assert np.allclose(dv.vector, store.whole_doc_vectors[doc.doc_id], atol=0)


def test_embed_document_sa_is_plain_mean():
    doc = make_doc("one line\nand two\nthree more")
    store = store_for(doc)
    dv = embed_document(doc, "sa", store)
    expected = np.mean(
        [store.sentence_vectors[(doc.doc_id, i)] for i in range(3)], axis=0
    )
    assert np.allclose(dv.vector, expected, atol=1e-12)


def test_embed_document_weighted_methods():
    doc = make_doc("common line\nrare line here")
    store = store_for(doc)
    index = DomainIndex("x.com", 4, {"common line": 4, "rare line here": 1})
    sentences = segment(doc)
    vecs = [store.sentence_vectors[(doc.doc_id, r.index)] for r in sentences]
    for method, weights in [
        ("SL", [sl_weight(r, sentences) for r in sentences]),
        ("IDF", [idf_weight(r.text, index) for r in sentences]),
        ("SLIDF", [slidf_weight(r, sentences, index) for r in sentences]),
    ]:
        dv = embed_document(doc, method, store, index)
        assert np.allclose(dv.vector, weighted_average(vecs, weights), atol=1e-12)


def test_embed_document_errors():
    doc = make_doc("one line")
    store = store_for(doc)
    with pytest.raises(ConfigurationError):
        embed_document(doc, "magic", store)
    with pytest.raises(ConfigurationError):
        embed_document(doc, "IDF", store)
    other = make_doc("different", doc_id="d2")
    with pytest.raises(MissingVectorError):
        embed_document(other, "SA", store)
    with pytest.raises(MissingVectorError):
        embed_document(other, "DE", store)
    empty = make_doc("", doc_id="d3")
    with pytest.raises(EmptyDocumentError):
        embed_document(empty, "SA", store)


def test_cosine_basics():
    assert cosine([1.0, 0.0], [0.0, 1.0]) == 0.0
    assert cosine([1.0, 0.0], [1.0, 0.0]) == 1.0
    assert cosine([1.0, 0.0], [-2.0, 0.0]) == -1.0
    with pytest.raises(UndefinedSimilarityError):
        cosine([0.0, 0.0], [1.0, 0.0])
    with pytest.raises(DataError):
        cosine([1.0, 0.0], [1.0, 0.0, 0.0])


def test_cosine_random_properties():
    rng = random.Random(13)
    for _ in range(300):
        dim = rng.randrange(2, 12)
        a = [rng.uniform(-1, 1) for _ in range(dim)]
        b = [rng.uniform(-1, 1) for _ in range(dim)]
        if all(x == 0 for x in a) or all(x == 0 for x in b):
            continue
        c = cosine(a, b)
        assert -1.0 <= c <= 1.0
        assert cosine(b, a) == pytest.approx(c, abs=1e-12)
        assert cosine([3.5 * x for x in a], b) == pytest.approx(c, abs=1e-9)


def test_hash_vector_contract():
    v = hash_vector("hello", 32)
    assert v.dtype == np.float32
    assert v.shape == (32,)
    assert float(np.linalg.norm(v.astype(np.float64))) == pytest.approx(1.0, abs=1e-6)
    assert np.array_equal(v, hash_vector("hello", 32))
    assert not np.array_equal(v, hash_vector("hellp", 32))
    assert hash_vector("hello", 12).shape == (12,)
    # A shorter request is a prefix of a longer one before normalization,
    # not after, so lengths must be agreed on ahead of time.
    assert hash_vector("", 8).shape == (8,)
    with pytest.raises(ValueError):
        hash_vector("hello", 0)
