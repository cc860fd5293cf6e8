"""Recall against URL-aligned gold pairs, macro-averages, and rater agreement."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional

from .errors import DataError, InsufficientDataError, UndefinedMetricError


def _norm_pair(a: str, b: str) -> tuple[str, str]:
    return (a, b) if a <= b else (b, a)


@dataclass(frozen=True)
class GoldSet:
    pairs: frozenset
    language: str


def make_gold(pairs: Iterable[tuple[str, str]], language: str) -> GoldSet:
    """Build a GoldSet of unordered URL pairs."""
    return GoldSet(pairs=frozenset(_norm_pair(a, b) for a, b in pairs), language=language)


def recall(predicted: Iterable[tuple[str, str]], gold: GoldSet) -> float:
    """Fraction of gold pairs present among the predictions, order-blind."""
    if not gold.pairs:
        raise UndefinedMetricError("empty gold set")
    pred = {_norm_pair(a, b) for a, b in predicted}
    return len(pred & gold.pairs) / len(gold.pairs)


def macro_average(per_language: Mapping[str, float]) -> float:
    if not per_language:
        raise UndefinedMetricError("no languages to average")
    return sum(per_language.values()) / len(per_language)


@dataclass(frozen=True)
class AnnotationTable:
    items: tuple
    raters: tuple
    ratings: Mapping


def make_annotation_table(rows: Iterable[tuple[Hashable, Hashable, Hashable]]) -> AnnotationTable:
    """Build a table from (unit, rater, label) rows."""
    ratings: dict = {}
    items: dict = {}
    raters: dict = {}
    for unit, rater, label in rows:
        key = (unit, rater)
        if key in ratings and ratings[key] != label:
            raise DataError("conflicting ratings for unit %r by rater %r" % (unit, rater))
        ratings[key] = label
        items[unit] = None
        raters[rater] = None
    return AnnotationTable(
        items=tuple(items), raters=tuple(raters), ratings=ratings
    )


def krippendorff_alpha(table: AnnotationTable) -> float:
    """Nominal-metric alpha from the coincidence matrix.

    Each unit with m ratings contributes its ordered value pairs with
    weight 1/(m - 1); units with fewer than two ratings are excluded.
    """
    by_unit: dict = {}
    for (unit, _rater), label in table.ratings.items():
        by_unit.setdefault(unit, []).append(label)
    usable = [labels for labels in by_unit.values() if len(labels) >= 2]
    if len(table.raters) < 2 or len(usable) < 2:
        raise InsufficientDataError("need two raters and two units with two ratings each")

    n_total = 0
    observed_mismatch = 0.0
    label_totals: Counter = Counter()
    for labels in usable:
        m = len(labels)
        counts = Counter(labels)
        for label, c in counts.items():
            label_totals[label] += c
        n_total += m
        # Ordered mismatching pairs within the unit: m^2 - sum of c^2.
        mismatch = m * m - sum(c * c for c in counts.values())
        observed_mismatch += mismatch / (m - 1)
    observed = observed_mismatch / n_total
    if observed == 0.0:
        return 1.0
    expected_mismatch = n_total * n_total - sum(c * c for c in label_totals.values())
    expected = expected_mismatch / (n_total * (n_total - 1))
    if expected == 0.0:
        raise InsufficientDataError("no label variation in the table")
    return 1.0 - observed / expected


def evaluate(
    predicted_by_language: Mapping[str, Iterable[tuple[str, str]]],
    gold_by_language: Mapping[str, GoldSet],
    tier_map: Optional[Mapping[str, str]] = None,
) -> dict:
    """Per-language recall with macro-averages, optionally grouped by tier."""
    if not gold_by_language:
        raise UndefinedMetricError("no gold languages")
    languages = {}
    warnings = []
    for code in sorted(gold_by_language):
        gold = gold_by_language[code]
        preds = predicted_by_language.get(code)
        if preds is None:
            warnings.append("no predictions for language %s" % code)
            preds = []
        if not gold.pairs:
            raise UndefinedMetricError("empty gold set for language %s" % code)
        pred_set = {_norm_pair(a, b) for a, b in preds}
        matched = len(pred_set & gold.pairs)
        languages[code] = {
            "recall": matched / len(gold.pairs),
            "gold": len(gold.pairs),
            "matched": matched,
            "predicted": len(pred_set),
        }
    for code in sorted(predicted_by_language):
        if code not in gold_by_language:
            warnings.append("no gold for language %s; ignored" % code)
    recalls = {code: entry["recall"] for code, entry in languages.items()}
    report = {
        "languages": languages,
        "macro_avg": macro_average(recalls),
        "warnings": warnings,
    }
    if tier_map:
        tiers: dict[str, dict[str, float]] = {}
        for code, value in recalls.items():
            tier = tier_map.get(code)
            if tier is not None:
                tiers.setdefault(tier, {})[code] = value
        report["tier_macro_avg"] = {
            tier: macro_average(values) for tier, values in sorted(tiers.items())
        }
    return report
