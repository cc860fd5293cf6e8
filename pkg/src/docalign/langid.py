"""Character-trigram language tagging and pair language verification."""

from __future__ import annotations

import json
import math
from collections import Counter
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Optional

from .errors import ConfigurationError, UntaggableError
from .ingest import Document
from .langdata import canonical_code

SAMPLE_CHARS = 4000
NGRAM_ORDER = 3


@dataclass(frozen=True)
class LangTag:
    code: str
    confidence: float


@dataclass(frozen=True)
class LangProfile:
    code: str
    ngram_logprobs: Mapping[str, float]

    def backoff(self) -> float:
        """Logprob charged for trigrams absent from the profile."""
        return min(self.ngram_logprobs.values()) - math.log(2.0)


def _prepare(text: str) -> str:
    return " ".join(text.lower().split())


def _trigrams(text: str) -> list[str]:
    return [text[i : i + NGRAM_ORDER] for i in range(len(text) - NGRAM_ORDER + 1)]


def build_profile(code: str, corpus: str) -> LangProfile:
    """Fit a trigram profile from sample text; probabilities are normalized."""
    counts = Counter(_trigrams(_prepare(corpus)))
    total = sum(counts.values())
    if total == 0:
        raise ConfigurationError("corpus for %r yields no trigrams" % code)
    logprobs = {g: math.log(c / total) for g, c in counts.items()}
    return LangProfile(code=code, ngram_logprobs=logprobs)


def load_profiles(directory: str | Path) -> list[LangProfile]:
    """Read {"code", "ngrams"} JSON files from a profile directory."""
    profiles = []
    for path in sorted(Path(directory).glob("*.json")):
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
        if "code" not in obj or "ngrams" not in obj or not obj["ngrams"]:
            raise ConfigurationError("bad profile file: %s" % path)
        profiles.append(
            LangProfile(code=obj["code"], ngram_logprobs=dict(obj["ngrams"]))
        )
    return profiles


def save_profile(profile: LangProfile, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(
            {"code": profile.code, "ngrams": dict(profile.ngram_logprobs)},
            fh,
            ensure_ascii=False,
            sort_keys=True,
        )


def tag_language(doc: Document, profiles: Iterable[LangProfile]) -> LangTag:
    """Assign the most likely profile code to a document.

    Documents arriving with a language already set pass through untouched
    (reduced to the primary subtag). Scores are summed trigram logprobs
    over the first SAMPLE_CHARS characters; confidence is the softmax
    share of the winner; ties break to the lexicographically smaller code.
    """
    if doc.lang:
        return LangTag(code=canonical_code(doc.lang), confidence=1.0)
    profs = sorted(profiles, key=lambda p: p.code)
    if len(profs) < 2:
        raise ConfigurationError("need at least two language profiles")
    if not doc.content:
        raise UntaggableError("document %s has empty content" % doc.doc_id)
    grams = _trigrams(_prepare(doc.content[:SAMPLE_CHARS]))
    scores = []
    for prof in profs:
        backoff = prof.backoff()
        table = prof.ngram_logprobs
        scores.append(sum(table.get(g, backoff) for g in grams))
    best = max(range(len(profs)), key=lambda i: (scores[i], -i))
    # Shifted softmax keeps exp() in range for long samples.
    top = scores[best]
    denom = sum(math.exp(s - top) for s in scores)
    return LangTag(code=profs[best].code, confidence=1.0 / denom)


def verify_pair_language(pair, tags: Mapping[str, LangTag]) -> bool:
    """Check URL language evidence against document tags.

    True iff both documents are tagged, their tags differ, and every
    identifier carrying an inferable code agrees with its own side's tag.
    Missing tags fail closed.
    """
    src_tag = tags.get(pair.source_doc_id)
    tgt_tag = tags.get(pair.target_doc_id)
    if src_tag is None or tgt_tag is None:
        return False
    src_code = canonical_code(src_tag.code)
    tgt_code = canonical_code(tgt_tag.code)
    if src_code == tgt_code:
        return False
    for idents, code in (
        (pair.source_identifiers, src_code),
        (pair.target_identifiers, tgt_code),
    ):
        for ident in idents:
            if ident.inferred_lang is not None:
                if canonical_code(ident.inferred_lang) != code:
                    return False
    return True
