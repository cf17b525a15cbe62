import pytest

from sentimt.corpus import Corpus, ReviewRecord
from sentimt.detect import (
    DiscrepancyFlag,
    ErrorCategory,
    LexiconSet,
    classify_error,
    classify_flags,
    flag_discrepancies,
    frequency_report,
    load_flags,
    write_flags,
)
from sentimt.normalize import normalize_arabic, tokenize
from sentimt.sentiment import SentimentScore, score_sentence

LEXICA = LexiconSet.seed()


def scorer(text):
    return score_sentence(text, LEXICA.sentiment, verb_stems=LEXICA.verb_stems)


def record(i, rating, mt, source="كتاب رهيبه"):
    return ReviewRecord(id=f"r{i}", source_text=source, rating=rating,
                        origin_id=f"r{i}", segment_index=0, mt_text=mt)


def test_wrong_negative_flag():
    corpus = Corpus((record(1, 5, "a terrible book"),))
    flags = flag_discrepancies(corpus, scorer)
    assert len(flags) == 1
    assert flags[0].direction == "wrong_negative"
    assert flags[0].score.negative >= 0.5


def test_wrong_positive_flag():
    corpus = Corpus((record(1, 1, "a great book"),))
    flags = flag_discrepancies(corpus, scorer)
    assert [f.direction for f in flags] == ["wrong_positive"]


def test_mid_rating_never_flags():
    corpus = Corpus((record(1, 3, "a terrible book"), record(2, 3, "a great book")))
    assert flag_discrepancies(corpus, scorer) == []


def test_consistent_records_not_flagged():
    corpus = Corpus((record(1, 5, "a great book"), record(2, 1, "a terrible book")))
    assert flag_discrepancies(corpus, scorer) == []


def test_missing_mt_text_errors():
    rec = ReviewRecord(id="r1", source_text="كتاب", rating=5, origin_id="r1")
    with pytest.raises(ValueError, match="'r1' has no mt_text"):
        flag_discrepancies(Corpus((rec,)), scorer)


def test_flag_invariants_enforced():
    with pytest.raises(ValueError, match="violates thresholds"):
        DiscrepancyFlag("x", "wrong_negative", rating=2, score=SentimentScore(0, 0, 1))
    with pytest.raises(ValueError, match="violates thresholds"):
        DiscrepancyFlag("x", "wrong_positive", rating=1, score=SentimentScore(0.2, 0.8, 0))


def test_flag_count_monotone():
    records = [record(1, 5, "a terrible book")]
    base = flag_discrepancies(Corpus(tuple(records)), scorer)
    records.append(record(2, 5, "a nice book"))
    extended = flag_discrepancies(Corpus(tuple(records)), scorer)
    assert base == [f for f in extended if f.item_id == "r1"]


def _classify(source, target, rating=5, direction="wrong_negative"):
    score = SentimentScore(0, 0.4, 0.6) if direction == "wrong_negative" else SentimentScore(0.6, 0.4, 0)
    flag = DiscrepancyFlag("x", direction, rating, score)
    tokens = tokenize(normalize_arabic(source))
    return classify_error(flag, tokens, target, LEXICA)


def test_negation_primary():
    categories, primary = _classify("معجبنيش ان البطل ضعيف", "I admire that the hero is weak")
    assert primary is ErrorCategory.NEGATION
    assert ErrorCategory.NEGATION in categories


def test_contronym_primary():
    categories, primary = _classify("الروايه رهيبه", "narration is terrible")
    assert primary is ErrorCategory.CONTRONYM


def test_idiom_primary():
    categories, primary = _classify("كتاب خفيف الظل", "light-shaded book")
    assert primary is ErrorCategory.IDIOM


def test_diacritic_category():
    _, primary = _classify("متعبه هذه الروايه", "Tired of this narration")
    assert primary is ErrorCategory.DIACRITIC


def test_dialect_expression_by_phrase():
    _, primary = _classify("كتاب عبيط", "a book by Abit")
    assert primary is ErrorCategory.DIALECT_EXPRESSION


def test_dialect_expression_by_transliteration():
    # no phrase hit: dialect word absent from the phrase lexicon but
    # transliterated as a capitalized non-dictionary token
    _, primary = _classify("كتاب جميل اوي", "a book by Hayel")
    assert primary is ErrorCategory.DIALECT_EXPRESSION


def test_unknown_when_nothing_triggers():
    categories, primary = _classify("كتاب جميل", "a strange book")
    assert categories == (ErrorCategory.UNKNOWN,)
    assert primary is ErrorCategory.UNKNOWN


def test_priority_order():
    # negation + contronym in one sentence: negation wins
    categories, primary = _classify("مش رهيبه", "not terrible")
    assert primary is ErrorCategory.NEGATION
    assert categories == (ErrorCategory.NEGATION, ErrorCategory.CONTRONYM)


def test_frequency_report_counts():
    def flag_with(cat):
        return DiscrepancyFlag("x", "wrong_negative", 5, SentimentScore(0, 0.4, 0.6),
                               categories=(cat,), primary_category=cat)

    flags = [flag_with(ErrorCategory.CONTRONYM), flag_with(ErrorCategory.CONTRONYM),
             flag_with(ErrorCategory.IDIOM)]
    report = frequency_report(flags)
    assert report[ErrorCategory.CONTRONYM] == (2, pytest.approx(2 / 3))
    assert report[ErrorCategory.IDIOM] == (1, pytest.approx(1 / 3))
    assert frequency_report([]) == {}


def test_frequency_report_proportions_sum_to_one():
    flags = []
    for i, cat in enumerate([ErrorCategory.NEGATION] * 3 + [ErrorCategory.IDIOM] * 7):
        flags.append(DiscrepancyFlag(f"r{i}", "wrong_negative", 4, SentimentScore(0, 0.5, 0.5),
                                     categories=(cat,), primary_category=cat))
    report = frequency_report(flags)
    assert sum(p for _, p in report.values()) == pytest.approx(1.0, abs=1e-9)


def test_flags_serialize_roundtrip(tmp_path):
    corpus = Corpus((record(1, 5, "a terrible book"),))
    flags = classify_flags(corpus, flag_discrepancies(corpus, scorer), LEXICA)
    path = tmp_path / "flags.jsonl"
    write_flags(flags, path)
    assert load_flags(path) == flags
