"""Deterministic suffix-stripping stemmer for English tokens.

Aggressive enough to collapse inflection families (run/runs/running/runner,
message/messages/messaging) while staying dependency-free. Rule passes repeat
until the token stops changing, so ``stem(stem(w)) == stem(w)`` holds by
construction.
"""

from __future__ import annotations

_VOWELS = set("aeiouy")
_NO_UNDOUBLE = set("lsz")  # call, miss, buzz keep their double letter

_NOUN_SUFFIXES = (
    ("ization", "ize"),
    ("ation", "ate"),
    ("tion", "t"),
    ("ness", ""),
    ("ment", ""),
)


def _has_vowel(s: str) -> bool:
    return any(ch in _VOWELS for ch in s)


def _undouble(s: str) -> str:
    if len(s) >= 2 and s[-1] == s[-2] and s[-1] not in _VOWELS and s[-1] not in _NO_UNDOUBLE:
        return s[:-1]
    return s


def _pass(w: str) -> str:
    # plurals
    if w.endswith("sses"):
        w = w[:-2]
    elif w.endswith("ies") and len(w) >= 4:
        w = w[:-3] + "y"
    elif w.endswith("ss"):
        pass
    elif w.endswith("s") and len(w) >= 4 and w[-2] != "s" and _has_vowel(w[:-1]):
        w = w[:-1]

    # -eed keeps one e (agreed -> agree), plain -ed/-ing strip with undoubling
    if w.endswith("eed"):
        if _has_vowel(w[:-3]):
            w = w[:-1]
    else:
        for suffix in ("ing", "ed"):
            stem = w[: -len(suffix)]
            if w.endswith(suffix) and len(stem) >= 2 and _has_vowel(stem):
                w = _undouble(stem)
                break

    # comparatives and adverbs
    for suffix in ("est", "er", "ly"):
        stem = w[: -len(suffix)]
        if w.endswith(suffix) and len(stem) >= 4 and _has_vowel(stem):
            w = _undouble(stem)
            break

    # common noun derivations
    for suffix, replacement in _NOUN_SUFFIXES:
        stem = w[: -len(suffix)]
        if w.endswith(suffix) and len(stem) >= 2 and _has_vowel(stem):
            w = stem + replacement
            break

    # final e, then y -> i so happy/happiness and pony/ponies collide
    if w.endswith("e") and len(w) >= 3 and _has_vowel(w[:-1]):
        w = w[:-1]
    if w.endswith("y") and len(w) >= 3 and _has_vowel(w[:-1]):
        w = w[:-1] + "i"

    return w


def stem(token: str) -> str:
    """Stem a single lowercase token."""
    w = token
    while True:
        out = _pass(w)
        if out == w:
            return out
        w = out
