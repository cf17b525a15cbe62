"""Lexica: contronyms, sentiment-bearing phrases, English sentiment weights,
and the polarity-tagging mechanism that yields dual-polarity vocabulary items.

All lexicon files are UTF-8 TSV with ``#`` comment lines; Arabic entries are
stored pre-normalized. Seed files ship in ``sentimt/data``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Optional

from .normalize import TAG_SUFFIXES, TokenSequence, normalize_arabic


class LexiconError(ValueError):
    """Malformed or inconsistent lexicon content."""


class PolarityTag(enum.Enum):
    POS = "POS"
    NEG = "NEG"


PHRASE_KINDS = ("idiom", "dialect_expression", "diacritic_ambiguous")
PHRASE_POLARITIES = ("POS", "NEG", "NEUTRAL")


@dataclass(frozen=True)
class ContronymEntry:
    lemma: str
    surface_forms: frozenset[str]
    positive_glosses: frozenset[str]
    negative_glosses: frozenset[str]
    notes: str = ""

    def __post_init__(self) -> None:
        if self.positive_glosses & self.negative_glosses:
            raise LexiconError(f"{self.lemma!r}: gloss sets overlap")
        for form in self.surface_forms | {self.lemma}:
            if normalize_arabic(form) != form:
                raise LexiconError(f"{self.lemma!r}: surface form {form!r} is not normalized")


@dataclass(frozen=True)
class PhraseEntry:
    pattern: tuple[str, ...]
    kind: str
    gloss: str
    polarity: str

    def __post_init__(self) -> None:
        if not self.pattern:
            raise LexiconError("phrase pattern must be non-empty")
        if self.kind not in PHRASE_KINDS:
            raise LexiconError(f"unknown phrase kind: {self.kind!r}")
        if self.polarity not in PHRASE_POLARITIES:
            raise LexiconError(f"unknown phrase polarity: {self.polarity!r}")


@dataclass(frozen=True)
class ContronymLexicon:
    entries: dict[str, ContronymEntry]
    surface_to_lemma: dict[str, str] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.surface_to_lemma:
            mapping: dict[str, str] = {}
            for lemma, entry in self.entries.items():
                for form in entry.surface_forms | {lemma}:
                    mapping[form] = lemma
            object.__setattr__(self, "surface_to_lemma", mapping)

    def __iter__(self):
        return iter(self.entries.values())

    def __len__(self) -> int:
        return len(self.entries)


# Type of the English sentiment lexicon: token -> weight in {-1, +1}.
SentimentLexicon = dict


def _rows(path: Path):
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line.strip() or line.lstrip().startswith("#"):
                continue
            yield lineno, line.split("\t")


def _split_set(cell: str) -> frozenset[str]:
    return frozenset(p.strip() for p in cell.split("|") if p.strip())


def load_lexicon(path: str | Path, kind: str):
    """Load a lexicon TSV of the given kind.

    kind: "contronym" -> ContronymLexicon; "phrase" -> list[PhraseEntry];
    "sentiment" -> dict token->weight; "verb_stem" -> set of stems.
    """
    path = Path(path)
    if kind == "contronym":
        entries: dict[str, ContronymEntry] = {}
        for lineno, cols in _rows(path):
            if len(cols) < 4:
                raise LexiconError(f"{path}:{lineno}: expected >= 4 columns")
            lemma = cols[0].strip()
            if lemma in entries:
                raise LexiconError(f"{path}:{lineno}: duplicate lemma {lemma!r}")
            try:
                entries[lemma] = ContronymEntry(
                    lemma=lemma,
                    surface_forms=_split_set(cols[1]),
                    positive_glosses=frozenset(g.lower() for g in _split_set(cols[2])),
                    negative_glosses=frozenset(g.lower() for g in _split_set(cols[3])),
                    notes=cols[4].strip() if len(cols) > 4 else "",
                )
            except LexiconError as e:
                raise LexiconError(f"{path}:{lineno}: {e}") from None
        return ContronymLexicon(entries)
    if kind == "phrase":
        phrases: list[PhraseEntry] = []
        seen = set()
        for lineno, cols in _rows(path):
            if len(cols) < 4:
                raise LexiconError(f"{path}:{lineno}: expected 4 columns")
            pattern = tuple(cols[0].split())
            if pattern in seen:
                raise LexiconError(f"{path}:{lineno}: duplicate pattern {' '.join(pattern)!r}")
            seen.add(pattern)
            try:
                phrases.append(PhraseEntry(pattern, cols[1].strip(), cols[2].strip(), cols[3].strip()))
            except LexiconError as e:
                raise LexiconError(f"{path}:{lineno}: {e}") from None
        return phrases
    if kind == "sentiment":
        weights: dict[str, int] = {}
        for lineno, cols in _rows(path):
            if len(cols) < 2:
                raise LexiconError(f"{path}:{lineno}: expected 2 columns")
            token = cols[0].strip().lower()
            if token in weights:
                raise LexiconError(f"{path}:{lineno}: duplicate token {token!r}")
            try:
                w = int(cols[1])
            except ValueError:
                raise LexiconError(f"{path}:{lineno}: weight must be +1 or -1") from None
            if w not in (-1, 1):
                raise LexiconError(f"{path}:{lineno}: weight must be +1 or -1, got {w}")
            weights[token] = w
        return weights
    if kind == "verb_stem":
        stems: set[str] = set()
        for lineno, cols in _rows(path):
            stem = cols[0].strip()
            if stem in stems:
                raise LexiconError(f"{path}:{lineno}: duplicate stem {stem!r}")
            stems.add(stem)
        return stems
    raise LexiconError(f"unknown lexicon kind: {kind!r}")


def _seed_path(name: str) -> Path:
    return Path(str(resources.files("sentimt.data").joinpath(name)))


def load_seed_contronyms() -> ContronymLexicon:
    return load_lexicon(_seed_path("contronyms.tsv"), "contronym")


def load_seed_phrases() -> list[PhraseEntry]:
    return load_lexicon(_seed_path("phrases.tsv"), "phrase")


def load_seed_sentiment() -> dict[str, int]:
    return load_lexicon(_seed_path("sentiment_en.tsv"), "sentiment")


def load_seed_verb_stems() -> set[str]:
    return load_lexicon(_seed_path("verb_stems.tsv"), "verb_stem")


def load_function_words() -> set[str]:
    raw = resources.files("sentimt.data").joinpath("english_function_words.txt").read_text("utf-8")
    return {w.strip().lower() for w in raw.splitlines() if w.strip()}


def split_tag(token: str) -> tuple[str, Optional[PolarityTag]]:
    """Split a token into (base form, polarity tag or None)."""
    for suffix in TAG_SUFFIXES:
        if token.endswith(suffix):
            return token[: -len(suffix)], PolarityTag(suffix[2:])
    return token, None


def find_contronyms(tokens: TokenSequence, lexicon: ContronymLexicon) -> list[tuple[int, str]]:
    """Locate contronym occurrences as (token_index, lemma), left to right.

    Already-tagged tokens are matched on their base form.
    """
    hits = []
    for i, token in enumerate(tokens):
        base, _ = split_tag(token)
        lemma = lexicon.surface_to_lemma.get(base)
        if lemma is not None:
            hits.append((i, lemma))
    return hits


def tag(tokens: TokenSequence, token_index: int, polarity: PolarityTag,
        lexicon: Optional[ContronymLexicon] = None) -> TokenSequence:
    """Fuse a polarity tag onto the token at ``token_index``.

    The tagged form is a single vocabulary item for any whitespace tokenizer
    downstream, which is what induces two embedding vectors per contronym.
    """
    if not 0 <= token_index < len(tokens):
        raise IndexError(f"token_index {token_index} out of range for {len(tokens)} tokens")
    base, existing = split_tag(tokens[token_index])
    if existing is not None:
        raise LexiconError(f"token {tokens[token_index]!r} is already tagged")
    if lexicon is not None and base not in lexicon.surface_to_lemma:
        raise LexiconError(f"token {base!r} is not a contronym surface form")
    out = list(tokens)
    out[token_index] = f"{base}__{polarity.value}"
    return out


def untag(tokens: TokenSequence) -> tuple[TokenSequence, list[tuple[int, PolarityTag]]]:
    """Strip all polarity tags, reporting (index, tag) pairs. Inverse of tag."""
    out: TokenSequence = []
    tags: list[tuple[int, PolarityTag]] = []
    for i, token in enumerate(tokens):
        base, polarity = split_tag(token)
        out.append(base)
        if polarity is not None:
            tags.append((i, polarity))
    return out, tags


def match_phrases(tokens: TokenSequence, lexicon: list[PhraseEntry]) -> list[tuple[int, int, PhraseEntry]]:
    """Find non-overlapping phrase matches, longest-first, left to right."""
    by_length = sorted(lexicon, key=lambda e: -len(e.pattern))
    matches: list[tuple[int, int, PhraseEntry]] = []
    bases = [split_tag(t)[0] for t in tokens]
    i = 0
    while i < len(bases):
        hit = None
        for entry in by_length:
            n = len(entry.pattern)
            if tuple(bases[i : i + n]) == entry.pattern:
                hit = (i, n, entry)
                break
        if hit:
            matches.append(hit)
            i += hit[1]
        else:
            i += 1
    return matches
