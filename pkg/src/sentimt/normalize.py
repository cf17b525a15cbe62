"""Arabic orthographic normalization, tokenization, and segment splitting.

The normalization table lives in ``data/arabic_normalization.json`` so it can
be pinned by tests and replaced without code changes.
"""

from __future__ import annotations

import json
import re
from importlib import resources
from typing import List

# A token sequence is a plain list of non-empty, whitespace-free strings.
TokenSequence = List[str]

TAG_SUFFIXES = ("__POS", "__NEG")

# ASCII punctuation plus Arabic comma / semicolon / question mark.
PUNCTUATION = set(".,!?;:()\"'") | {"،", "؛", "؟"}

# Arabic letters, for the elongation rule.
_ARABIC_LETTER = re.compile(r"[ء-ي]")


def _load_table() -> tuple[dict[str, str], set[str]]:
    raw = resources.files("sentimt.data").joinpath("arabic_normalization.json").read_text("utf-8")
    table = json.loads(raw)
    char_map = dict(table["char_map"])
    remove = set(table["remove_chars"])
    for lo, hi in table["remove_ranges"]:
        for cp in range(ord(lo), ord(hi) + 1):
            remove.add(chr(cp))
    return char_map, remove


_CHAR_MAP, _REMOVE = _load_table()


def normalize_arabic(text: str) -> str:
    """Normalize Arabic orthography.

    Maps alef variants / alef maqsura / taa marbuta / hamza carriers to
    canonical letters, strips tatweel and diacritic combining marks, collapses
    whitespace runs to single spaces, and trims. Total and idempotent.
    """
    out = []
    for ch in text:
        if ch in _REMOVE:
            continue
        out.append(_CHAR_MAP.get(ch, ch))
    return " ".join("".join(out).split())


def strip_elongation(text: str) -> str:
    """Reduce runs of >=3 identical Arabic letters to a single occurrence.

    Runs of length <= 2 are kept as written (doubled letters are meaningful).
    """
    out: list[str] = []
    run_char = ""
    run_len = 0
    for ch in text:
        if ch == run_char:
            run_len += 1
        else:
            _flush_run(out, run_char, run_len)
            run_char = ch
            run_len = 1
    _flush_run(out, run_char, run_len)
    return "".join(out)


def _flush_run(out: list[str], ch: str, n: int) -> None:
    if n == 0:
        return
    if n >= 3 and _ARABIC_LETTER.match(ch):
        out.append(ch)
    else:
        out.append(ch * n)


def tokenize(text: str) -> TokenSequence:
    """Split text into tokens: whitespace-separated, punctuation isolated.

    Each punctuation character becomes its own token. The ``__POS``/``__NEG``
    polarity-tag suffix is never split from its host token.
    """
    tokens: TokenSequence = []
    for chunk in text.split():
        buf = []
        for ch in chunk:
            if ch in PUNCTUATION:
                if buf:
                    tokens.append("".join(buf))
                    buf = []
                tokens.append(ch)
            else:
                buf.append(ch)
        if buf:
            tokens.append("".join(buf))
    return tokens


def join_tokens(tokens: TokenSequence) -> str:
    return " ".join(tokens)


def split_segments(tokens: TokenSequence, max_len: int = 20) -> List[TokenSequence]:
    """Chunk a token sequence into segments of at most ``max_len`` tokens.

    All segments except possibly the last have exactly ``max_len`` tokens;
    concatenating the output restores the input.
    """
    if max_len < 1:
        raise ValueError(f"max_len must be >= 1, got {max_len}")
    return [tokens[i : i + max_len] for i in range(0, len(tokens), max_len)]
