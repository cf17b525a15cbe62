import pytest
from hypothesis import given
from hypothesis import strategies as st

from sentimt.lexicons import (
    LexiconError,
    PolarityTag,
    find_contronyms,
    load_lexicon,
    load_seed_contronyms,
    load_seed_phrases,
    match_phrases,
    tag,
    untag,
)


@pytest.fixture(scope="module")
def contronyms():
    return load_seed_contronyms()


@pytest.fixture(scope="module")
def phrases():
    return load_seed_phrases()


def test_seed_contronym_glosses(contronyms):
    entry = contronyms.entries["رهيبه"]
    assert {"great", "awesome"} <= entry.positive_glosses
    assert "terrible" in entry.negative_glosses
    jamed = contronyms.entries["جامد"]
    assert "rigid" in jamed.negative_glosses


def test_contronym_row_parsing(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("رهيبه\tرهيبه\tgreat|awesome\tterrible\n", encoding="utf-8")
    lex = load_lexicon(path, "contronym")
    entry = lex.entries["رهيبه"]
    assert len(entry.positive_glosses) == 2
    assert len(entry.negative_glosses) == 1


def test_duplicate_lemma_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("رهيبه\tرهيبه\tgreat\tterrible\nرهيبه\tرهيبه\tgood\tbad\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="duplicate lemma"):
        load_lexicon(path, "contronym")


def test_overlapping_glosses_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("x\tx\tgreat\tgreat\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="gloss sets overlap"):
        load_lexicon(path, "contronym")


def test_unnormalized_surface_rejected(tmp_path):
    path = tmp_path / "c.tsv"
    path.write_text("رهيبة\tرهيبة\tgreat\tterrible\n", encoding="utf-8")
    with pytest.raises(LexiconError, match="not normalized"):
        load_lexicon(path, "contronym")


def test_find_contronyms(contronyms):
    assert find_contronyms(["الروايه", "رهيبه"], contronyms) == [(1, "رهيبه")]
    assert find_contronyms(["كتاب", "جميل"], contronyms) == []
    assert find_contronyms(["رهيبه", "و", "رهيبه"], contronyms) == [(0, "رهيبه"), (2, "رهيبه")]


def test_find_contronyms_sees_through_tags(contronyms):
    assert find_contronyms(["كتاب", "رهيبه__POS"], contronyms) == [(1, "رهيبه")]


def test_tag_formats(contronyms):
    assert tag(["كتاب", "رهيبه"], 1, PolarityTag.POS, contronyms) == ["كتاب", "رهيبه__POS"]
    assert tag(["كتاب", "رهيبه"], 1, PolarityTag.NEG, contronyms) == ["كتاب", "رهيبه__NEG"]


def test_tag_errors(contronyms):
    with pytest.raises(LexiconError, match="already tagged"):
        tag(["كتاب", "رهيبه__POS"], 1, PolarityTag.NEG, contronyms)
    with pytest.raises(IndexError):
        tag(["كتاب"], 5, PolarityTag.POS, contronyms)
    with pytest.raises(LexiconError, match="not a contronym"):
        tag(["كتاب", "جميل"], 1, PolarityTag.POS, contronyms)


def test_untag_examples():
    assert untag(["رهيبه__POS", "جدا"]) == (["رهيبه", "جدا"], [(0, PolarityTag.POS)])
    assert untag(["a", "b"]) == (["a", "b"], [])
    assert untag(["a__NEG", "b", "c__POS"]) == (
        ["a", "b", "c"], [(0, PolarityTag.NEG), (2, PolarityTag.POS)])


@given(st.data())
def test_tag_untag_roundtrip(data):
    lexicon = load_seed_contronyms()
    surfaces = sorted(lexicon.surface_to_lemma)
    fillers = ["كتاب", "جدا", "قرات"]
    tokens = data.draw(st.lists(st.sampled_from(surfaces + fillers), min_size=1, max_size=10))
    taggable = [i for i, t in enumerate(tokens) if t in lexicon.surface_to_lemma]
    applied = []
    out = list(tokens)
    for i in data.draw(st.permutations(taggable)):
        polarity = data.draw(st.sampled_from([PolarityTag.POS, PolarityTag.NEG]))
        out = tag(out, i, polarity, lexicon)
        applied.append((i, polarity))
    untagged, reported = untag(out)
    assert untagged == tokens
    assert sorted(reported) == sorted(applied, key=lambda p: p[0])


def test_find_contronyms_stable_under_tagging(contronyms):
    tokens = ["الروايه", "رهيبه", "و", "جامد"]
    before = find_contronyms(tokens, contronyms)
    tagged = tag(tokens, 1, PolarityTag.POS, contronyms)
    assert find_contronyms(tagged, contronyms) == before


def test_match_phrases_idioms(phrases):
    matches = match_phrases(["كتاب", "خفيف", "الظل"], phrases)
    assert [(m[0], m[1]) for m in matches] == [(1, 2)]
    assert matches[0][2].gloss == "funny"
    matches = match_phrases(["كتاب", "دمه", "خفيف"], phrases)
    assert [(m[0], m[1]) for m in matches] == [(1, 2)]
    assert match_phrases(["كتاب", "جميل"], phrases) == []


def test_match_phrases_longest_first():
    # a single-token pattern must not shadow a longer one starting at the same index
    from sentimt.lexicons import PhraseEntry

    lex = [PhraseEntry(("خفيف",), "dialect_expression", "light", "NEUTRAL"),
           PhraseEntry(("خفيف", "الظل"), "idiom", "funny", "POS")]
    matches = match_phrases(["خفيف", "الظل"], lex)
    assert len(matches) == 1
    assert matches[0][1] == 2


def test_match_phrases_non_overlapping(phrases):
    tokens = ["خفيف", "الظل", "خفيف", "الظل"]
    matches = match_phrases(tokens, phrases)
    spans = [(s, s + n) for s, n, _ in matches]
    assert spans == [(0, 2), (2, 4)]


def test_sentiment_lexicon_weights(tmp_path):
    path = tmp_path / "s.tsv"
    path.write_text("great\t+1\nbad\t-1\n", encoding="utf-8")
    assert load_lexicon(path, "sentiment") == {"great": 1, "bad": -1}
    path.write_text("zero\t0\n", encoding="utf-8")
    with pytest.raises(LexiconError, match=r"\+1 or -1"):
        load_lexicon(path, "sentiment")
