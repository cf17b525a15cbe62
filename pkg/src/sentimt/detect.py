"""Discrepancy extraction (rating vs. translated sentiment) and the five-way
error typology classifier, plus the frequency histogram behind the error
reports.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Callable, Optional

from .corpus import Corpus
from .lexicons import (
    ContronymLexicon,
    PhraseEntry,
    find_contronyms,
    load_function_words,
    load_seed_contronyms,
    load_seed_phrases,
    load_seed_sentiment,
    load_seed_verb_stems,
    match_phrases,
)
from .normalize import TokenSequence, normalize_arabic, tokenize
from .sentiment import SentimentScore, detect_negators

HIGH_RATING = 4
LOW_RATING = 2
SCORE_CUTOFF = 0.5


class ErrorCategory(enum.Enum):
    CONTRONYM = "Contronym"
    DIACRITIC = "Diacritic"
    IDIOM = "Idiom"
    DIALECT_EXPRESSION = "DialectExpression"
    NEGATION = "Negation"
    UNKNOWN = "Unknown"


# Fixed priority for choosing the primary category: a missed negation flips
# polarity regardless of anything else in the sentence.
CATEGORY_PRIORITY = (
    ErrorCategory.NEGATION,
    ErrorCategory.CONTRONYM,
    ErrorCategory.IDIOM,
    ErrorCategory.DIACRITIC,
    ErrorCategory.DIALECT_EXPRESSION,
)


@dataclass(frozen=True)
class DiscrepancyFlag:
    item_id: str
    direction: str  # wrong_negative | wrong_positive
    rating: int
    score: SentimentScore
    categories: tuple[ErrorCategory, ...] = ()
    primary_category: Optional[ErrorCategory] = None

    def __post_init__(self) -> None:
        if self.direction == "wrong_negative":
            if not (self.rating >= HIGH_RATING and self.score.negative >= SCORE_CUTOFF):
                raise ValueError(f"{self.item_id}: wrong_negative flag violates thresholds")
        elif self.direction == "wrong_positive":
            if not (self.rating <= LOW_RATING and self.score.positive >= SCORE_CUTOFF):
                raise ValueError(f"{self.item_id}: wrong_positive flag violates thresholds")
        else:
            raise ValueError(f"unknown direction: {self.direction!r}")
        if self.categories and self.primary_category not in self.categories:
            raise ValueError(f"{self.item_id}: primary_category not in categories")

    def to_json(self) -> dict:
        return {
            "item_id": self.item_id,
            "direction": self.direction,
            "rating": self.rating,
            "score": self.score.to_json(),
            "categories": [c.value for c in self.categories],
            "primary_category": self.primary_category.value if self.primary_category else None,
        }

    @classmethod
    def from_json(cls, d: dict) -> "DiscrepancyFlag":
        return cls(
            item_id=d["item_id"],
            direction=d["direction"],
            rating=int(d["rating"]),
            score=SentimentScore.from_json(d["score"]),
            categories=tuple(ErrorCategory(c) for c in d.get("categories", [])),
            primary_category=ErrorCategory(d["primary_category"]) if d.get("primary_category") else None,
        )


@dataclass(frozen=True)
class LexiconSet:
    """All lexica the typology classifier consults."""

    contronyms: ContronymLexicon
    phrases: list[PhraseEntry]
    sentiment: dict
    verb_stems: set[str]
    function_words: set[str] = field(default_factory=set)

    @classmethod
    def seed(cls) -> "LexiconSet":
        return cls(
            contronyms=load_seed_contronyms(),
            phrases=load_seed_phrases(),
            sentiment=load_seed_sentiment(),
            verb_stems=load_seed_verb_stems(),
            function_words=load_function_words(),
        )


Scorer = Callable[[str], SentimentScore]


def flag_discrepancies(corpus: Corpus, scorer: Scorer) -> list[DiscrepancyFlag]:
    """Flag records whose MT sentiment contradicts the review rating.

    wrong_negative: rating >= 4 and negative confidence >= 0.5;
    wrong_positive: rating <= 2 and positive confidence >= 0.5.
    Output follows corpus order.
    """
    flags = []
    for rec in corpus.records:
        if rec.mt_text is None:
            raise ValueError(f"record {rec.id!r} has no mt_text")
        score = scorer(rec.mt_text)
        if rec.rating >= HIGH_RATING and score.negative >= SCORE_CUTOFF:
            flags.append(DiscrepancyFlag(rec.id, "wrong_negative", rec.rating, score))
        elif rec.rating <= LOW_RATING and score.positive >= SCORE_CUTOFF:
            flags.append(DiscrepancyFlag(rec.id, "wrong_positive", rec.rating, score))
    return flags


_PHRASE_KIND_TO_CATEGORY = {
    "idiom": ErrorCategory.IDIOM,
    "diacritic_ambiguous": ErrorCategory.DIACRITIC,
    "dialect_expression": ErrorCategory.DIALECT_EXPRESSION,
}


def _looks_transliterated(target_text: str, lexica: LexiconSet) -> bool:
    # A dialect word mistaken for a proper noun shows up in the target as a
    # capitalized non-dictionary token of >= 4 letters.
    for token in tokenize(target_text):
        if len(token) >= 4 and token[0].isupper() and token.isalpha():
            low = token.lower()
            if low not in lexica.sentiment and low not in lexica.function_words:
                return True
    return False


def classify_error(flag: DiscrepancyFlag, source_tokens: TokenSequence, target_text: str,
                   lexica: LexiconSet) -> tuple[tuple[ErrorCategory, ...], ErrorCategory]:
    """Assign typology categories to a flagged item.

    Returns all triggered categories in priority order plus the primary one
    (first trigger); UNKNOWN when nothing triggers.
    """
    triggered: set[ErrorCategory] = set()
    arabic_negators = [
        s for s in detect_negators(source_tokens, verb_stems=lexica.verb_stems)
        if s.circumfix or source_tokens[s.negator_index] == "مش"
    ]
    if arabic_negators:
        triggered.add(ErrorCategory.NEGATION)
    if find_contronyms(source_tokens, lexica.contronyms):
        triggered.add(ErrorCategory.CONTRONYM)
    for _, _, entry in match_phrases(source_tokens, lexica.phrases):
        triggered.add(_PHRASE_KIND_TO_CATEGORY[entry.kind])
    if ErrorCategory.DIALECT_EXPRESSION not in triggered and _looks_transliterated(target_text, lexica):
        triggered.add(ErrorCategory.DIALECT_EXPRESSION)
    ordered = tuple(c for c in CATEGORY_PRIORITY if c in triggered)
    if not ordered:
        return (ErrorCategory.UNKNOWN,), ErrorCategory.UNKNOWN
    return ordered, ordered[0]


def classify_flags(corpus: Corpus, flags: list[DiscrepancyFlag],
                   lexica: Optional[LexiconSet] = None) -> list[DiscrepancyFlag]:
    """Attach typology categories to every flag, using normalized sources."""
    if lexica is None:
        lexica = LexiconSet.seed()
    out = []
    for flag in flags:
        rec = corpus.get(flag.item_id)
        tokens = tokenize(normalize_arabic(rec.source_text))
        categories, primary = classify_error(flag, tokens, rec.mt_text or "", lexica)
        out.append(replace(flag, categories=categories, primary_category=primary))
    return out


def frequency_report(flags: list[DiscrepancyFlag]) -> dict[ErrorCategory, tuple[int, float]]:
    """Histogram of primary categories: category -> (count, proportion)."""
    counts: dict[ErrorCategory, int] = {}
    for flag in flags:
        cat = flag.primary_category or ErrorCategory.UNKNOWN
        counts[cat] = counts.get(cat, 0) + 1
    total = sum(counts.values())
    return {cat: (n, n / total) for cat, n in counts.items()}


def write_flags(flags: list[DiscrepancyFlag], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for flag in flags:
            fh.write(json.dumps(flag.to_json(), ensure_ascii=False) + "\n")


def load_flags(path: str | Path) -> list[DiscrepancyFlag]:
    flags = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            if line.strip():
                flags.append(DiscrepancyFlag.from_json(json.loads(line)))
    return flags


def write_histogram_csv(report: dict[ErrorCategory, tuple[int, float]], path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["category", "count", "proportion"])
        for cat in list(CATEGORY_PRIORITY) + [ErrorCategory.UNKNOWN]:
            if cat in report:
                n, p = report[cat]
                writer.writerow([cat.value, n, f"{p:.6f}"])
