"""Cross-lingual document alignment toolkit.

Dedupe web documents, pair translated pages by URL structure, score and
align documents with embedding similarity, evaluate recall, and mine
parallel sentences.
"""

__version__ = "0.1.0"
FORMAT_VERSION = "CCAEMB1"

from .errors import (
    ConfigurationError,
    DataError,
    DocalignError,
    EmbeddingFormatError,
    EmptyDocumentError,
    InsufficientDataError,
    MalformedUrlError,
    MissingVectorError,
    UndefinedMetricError,
    UndefinedSimilarityError,
    UntaggableError,
)
from .ingest import (
    Document,
    RawDocument,
    content_hash,
    dedup,
    extract_domain,
    make_doc_id,
    normalize_url,
)
from .langdata import canonical_code
from .langid import (
    LangProfile,
    LangTag,
    build_profile,
    load_profiles,
    save_profile,
    tag_language,
    verify_pair_language,
)
from .urlmatch import (
    CandidatePair,
    LangIdentifierPattern,
    StrippedUrl,
    UrlIdentifier,
    default_patterns,
    load_patterns,
    match_candidates,
    reconstruct_url,
    strip_language_identifiers,
)
from .embed import (
    METHODS,
    DocumentVector,
    DomainIndex,
    EmbeddingStore,
    SentenceRecord,
    build_domain_index,
    cosine,
    embed_document,
    idf_weight,
    segment,
    sentence_average,
    sl_weight,
    slidf_weight,
    weighted_average,
    whole_document_text,
)
from .hashvec import hash_vector
from .vecfile import (
    MAGIC,
    WHOLE_DOC_INDEX,
    fnv1a_64,
    iter_records,
    load_sidecar,
    load_store,
    load_store_with_sidecar,
    read_header,
    read_sentences,
    record_key,
    validate_embeddings,
    write_embeddings,
    write_sentences,
)
from .matcher import Alignment, DocumentSet, ScoredPair, competitive_match, score_domain
from .evaluate import (
    AnnotationTable,
    GoldSet,
    evaluate,
    krippendorff_alpha,
    macro_average,
    make_annotation_table,
    make_gold,
    recall,
)
from .miner import BitextPair, MarginParams, dedup_bitext, mine_sentences
