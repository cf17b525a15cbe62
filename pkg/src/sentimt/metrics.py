"""Evaluation metrics: corpus BLEU, word-level contronym-polarity P/R/F1,
and the sentence-level sentiment cost (mean squared distance between target
and reference sentiment scalars).
"""

from __future__ import annotations

import json
import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .corpus import Corpus
from .lexicons import ContronymEntry, ContronymLexicon, PolarityTag, find_contronyms, untag
from .normalize import normalize_arabic, tokenize
from .sentiment import SentimentScore, polarity_scalar

BLEU_MAX_ORDER = 4


@dataclass(frozen=True)
class PRFCounts:
    tp: int
    fp: int
    fn: int
    unmatched: int


@dataclass(frozen=True)
class EvalReport:
    bleu: float
    cost_positive: float
    cost_negative: float
    scalar_mode: str
    word_precision: Optional[float] = None
    word_recall: Optional[float] = None
    word_f1: Optional[float] = None
    counts: Optional[PRFCounts] = None

    def to_json(self) -> dict:
        d = {
            "bleu": self.bleu,
            "cost_positive": self.cost_positive,
            "cost_negative": self.cost_negative,
            "scalar_mode": self.scalar_mode,
        }
        if self.counts is not None:
            d.update(
                word_precision=self.word_precision,
                word_recall=self.word_recall,
                word_f1=self.word_f1,
                counts={
                    "tp": self.counts.tp,
                    "fp": self.counts.fp,
                    "fn": self.counts.fn,
                    "unmatched": self.counts.unmatched,
                },
            )
        return d

    def to_table(self) -> str:
        lines = [
            f"BLEU            {self.bleu:8.2f}",
            f"cost (positive) {self.cost_positive:8.4f}",
            f"cost (negative) {self.cost_negative:8.4f}",
            f"scalar mode     {self.scalar_mode:>8}",
        ]
        if self.counts is not None:
            lines += [
                f"word precision  {self.word_precision:8.4f}",
                f"word recall     {self.word_recall:8.4f}",
                f"word F1         {self.word_f1:8.4f}",
                f"counts          TP={self.counts.tp} FP={self.counts.fp} "
                f"FN={self.counts.fn} unmatched={self.counts.unmatched}",
            ]
        else:
            lines.append("word metrics    (no contronym items)")
        return "\n".join(lines)


def _bleu_tokens(text: str) -> list[str]:
    return tokenize(text.lower())


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def corpus_bleu(hypotheses: list[str], references: list[str], smooth: bool = False) -> float:
    """Corpus-level BLEU on the 0-100 scale.

    Modified n-gram precisions for n=1..4, geometric mean, multiplicative
    brevity penalty. Internal tokenization lowercases and splits punctuation.
    ``smooth`` enables add-one smoothing on the n>1 precisions.
    """
    if len(hypotheses) != len(references):
        raise ValueError(f"length mismatch: {len(hypotheses)} hypotheses vs {len(references)} references")
    if not hypotheses:
        raise ValueError("empty corpus")
    matches = [0] * BLEU_MAX_ORDER
    totals = [0] * BLEU_MAX_ORDER
    hyp_len = ref_len = 0
    for hyp, ref in zip(hypotheses, references):
        h = _bleu_tokens(hyp)
        r = _bleu_tokens(ref)
        hyp_len += len(h)
        ref_len += len(r)
        for n in range(1, BLEU_MAX_ORDER + 1):
            hgrams = _ngrams(h, n)
            rgrams = _ngrams(r, n)
            totals[n - 1] += sum(hgrams.values())
            matches[n - 1] += sum(min(c, rgrams[g]) for g, c in hgrams.items())
    # orders with no candidate n-grams at all (corpus shorter than n) are
    # skipped, so identical corpora score 100 regardless of sentence length
    log_sum = 0.0
    orders = 0
    for n in range(1, BLEU_MAX_ORDER + 1):
        m, t = matches[n - 1], totals[n - 1]
        if smooth and n > 1:
            m, t = m + 1, t + 1
        if t == 0:
            continue
        if m == 0:
            return 0.0
        log_sum += math.log(m / t)
        orders += 1
    if orders == 0:
        return 0.0
    precision_mean = math.exp(log_sum / orders)
    bp = 1.0 if hyp_len >= ref_len else math.exp(1.0 - ref_len / max(hyp_len, 1))
    return 100.0 * bp * precision_mean


def _gloss_found(text_lower: str, glosses) -> bool:
    return any(re.search(r"\b" + re.escape(g) + r"\b", text_lower) for g in glosses)


def predict_polarity(target_text: str, entry: ContronymEntry) -> Optional[PolarityTag]:
    """Predict the translated contronym sense from the target glosses.

    POS if any positive gloss appears, NEG if any negative gloss appears,
    None (unmatched) if neither or both appear. Matching is on lowercased
    word boundaries.
    """
    low = target_text.lower()
    has_pos = _gloss_found(low, entry.positive_glosses)
    has_neg = _gloss_found(low, entry.negative_glosses)
    if has_pos == has_neg:
        return None
    return PolarityTag.POS if has_pos else PolarityTag.NEG


def word_polarity_prf(
    items: list[tuple[PolarityTag, str, ContronymEntry]],
) -> tuple[float, float, float, PRFCounts]:
    """Precision/recall/F1 of contronym polarity transfer, POS as the
    positive class. Unmatched predictions count against recall only.
    """
    tp = fp = fn = unmatched = 0
    for gold, target_text, entry in items:
        pred = predict_polarity(target_text, entry)
        if pred is None:
            unmatched += 1
        if gold is PolarityTag.POS:
            if pred is PolarityTag.POS:
                tp += 1
            else:
                fn += 1
        else:
            if pred is PolarityTag.POS:
                fp += 1
    precision = tp / (tp + fp) if tp + fp else 0.0
    recall = tp / (tp + fn) if tp + fn else 0.0
    f1 = 2 * precision * recall / (precision + recall) if precision + recall else 0.0
    return precision, recall, f1, PRFCounts(tp, fp, fn, unmatched)


def sentiment_cost(target_texts: list[str], reference_texts: list[str], scorer, mode: str) -> float:
    """Mean squared distance between target and reference sentiment scalars."""
    if len(target_texts) != len(reference_texts):
        raise ValueError(
            f"length mismatch: {len(target_texts)} targets vs {len(reference_texts)} references"
        )
    if not target_texts:
        raise ValueError("empty input")
    total = 0.0
    for tgt, ref in zip(target_texts, reference_texts):
        s_t = polarity_scalar(scorer(tgt), mode)
        s_r = polarity_scalar(scorer(ref), mode)
        total += (s_t - s_r) ** 2
    return total / len(target_texts)


def per_sentence_costs(target_texts: list[str], reference_texts: list[str], scorer, mode: str) -> list[float]:
    return [
        (polarity_scalar(scorer(t), mode) - polarity_scalar(scorer(r), mode)) ** 2
        for t, r in zip(target_texts, reference_texts)
    ]


def gold_polarities(corpus: Corpus, lexicon: ContronymLexicon) -> list[tuple[PolarityTag, str, ContronymEntry]]:
    """Derive word-level evaluation items from a corpus.

    A contronym occurrence contributes an item when a gold polarity exists,
    either as a ``__POS``/``__NEG`` tag in the source or as the latest
    polarity_tag annotation at that token index.
    """
    items = []
    for rec in corpus.records:
        tokens = tokenize(normalize_arabic(rec.source_text))
        bases, source_tags = untag(tokens)
        tag_by_index = dict(source_tags)
        for ann in sorted(rec_annotations(corpus, rec.id), key=lambda a: a.timestamp):
            if ann.kind == "polarity_tag":
                tag_by_index[ann.token_index] = PolarityTag(ann.polarity)
        for idx, lemma in find_contronyms(bases, lexicon):
            gold = tag_by_index.get(idx)
            if gold is not None and rec.mt_text is not None:
                items.append((gold, rec.mt_text, lexicon.entries[lemma]))
    return items


def rec_annotations(corpus: Corpus, record_id: str):
    return [a for a in corpus.annotations if a.item_id == record_id]


def evaluate(corpus: Corpus, lexicon: ContronymLexicon, scorer, mode: str = "signed") -> EvalReport:
    """Aggregate the three metrics over one corpus.

    Every record must carry mt_text and reference_text. Word metrics are
    reported as absent (None) when the corpus yields no contronym items.
    """
    missing = [r.id for r in corpus.records if r.reference_text is None or r.mt_text is None]
    if missing:
        raise ValueError(f"records missing mt_text/reference_text: {missing}")
    targets = [r.mt_text for r in corpus.records]
    refs = [r.reference_text for r in corpus.records]
    bleu = corpus_bleu(targets, refs)
    cost_pos = sentiment_cost(targets, refs, scorer, "positive_class")
    cost_neg = sentiment_cost(targets, refs, scorer, "negative_class")
    items = gold_polarities(corpus, lexicon)
    if items:
        p, r, f1, counts = word_polarity_prf(items)
        return EvalReport(bleu, cost_pos, cost_neg, mode, p, r, f1, counts)
    return EvalReport(bleu, cost_pos, cost_neg, mode)


def write_report_json(report: EvalReport, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report.to_json(), fh, indent=2)
        fh.write("\n")
