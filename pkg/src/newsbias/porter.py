"""Porter suffix-stripping stemmer.

Implements the classic Porter algorithm in the form used by the common
reference implementations: the step-2 rules use "bli" -> "ble" and
include "logi" -> "log", and words of length 1 or 2 are returned
unchanged. Input is expected to be a lowercase word; anything shorter
than three letters, or containing no letters, comes back as-is.

The measure m of a stem counts vowel-consonant alternations: writing
the stem as [C](VC)^m[V] with C a consonant run and V a vowel run,
m is the number of VC pairs. 'y' counts as a consonant at the start
of the word or after a vowel, and as a vowel after a consonant.
"""

from __future__ import annotations

_VOWELS = "aeiou"


def _is_cons(word: str, i: int) -> bool:
    ch = word[i]
    if ch in _VOWELS:
        return False
    if ch == "y":
        return i == 0 or not _is_cons(word, i - 1)
    return True


def _measure(stem: str) -> int:
    n = 0
    prev_cons = None
    for i in range(len(stem)):
        cons = _is_cons(stem, i)
        if prev_cons is False and cons:
            n += 1
        prev_cons = cons
    return n


def _has_vowel(stem: str) -> bool:
    return any(not _is_cons(stem, i) for i in range(len(stem)))


def _ends_double_cons(stem: str) -> bool:
    return len(stem) >= 2 and stem[-1] == stem[-2] and _is_cons(stem, len(stem) - 1)


def _ends_cvc(stem: str) -> bool:
    # consonant-vowel-consonant, final consonant not w, x or y;
    # used to decide whether a trailing e belongs to a short syllable
    if len(stem) < 3:
        return False
    i = len(stem) - 1
    if stem[i] in "wxy":
        return False
    return _is_cons(stem, i) and not _is_cons(stem, i - 1) and _is_cons(stem, i - 2)


def _step1a(w: str) -> str:
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("ies"):
        return w[:-2]
    if w.endswith("ss"):
        return w
    if w.endswith("s"):
        return w[:-1]
    return w


def _step1b(w: str) -> str:
    if w.endswith("eed"):
        if _measure(w[:-3]) > 0:
            return w[:-1]
        return w
    if w.endswith("ed") and _has_vowel(w[:-2]):
        stem = w[:-2]
    elif w.endswith("ing") and _has_vowel(w[:-3]):
        stem = w[:-3]
    else:
        return w
    # cleanup after a successful -ed / -ing removal
    if stem.endswith(("at", "bl", "iz")):
        return stem + "e"
    if _ends_double_cons(stem) and stem[-1] not in "lsz":
        return stem[:-1]
    if _measure(stem) == 1 and _ends_cvc(stem):
        return stem + "e"
    return stem


def _step1c(w: str) -> str:
    if w.endswith("y") and _has_vowel(w[:-1]):
        return w[:-1] + "i"
    return w


# (suffix, replacement) pairs; within each step the longest matching
# suffix is the only rule attempted, mirroring the reference scan order
_STEP2_RULES = (
    ("ational", "ate"), ("tional", "tion"),
    ("enci", "ence"), ("anci", "ance"),
    ("izer", "ize"),
    ("bli", "ble"),
    ("alli", "al"), ("entli", "ent"), ("eli", "e"), ("ousli", "ous"),
    ("ization", "ize"), ("ation", "ate"), ("ator", "ate"),
    ("alism", "al"), ("iveness", "ive"), ("fulness", "ful"), ("ousness", "ous"),
    ("aliti", "al"), ("iviti", "ive"), ("biliti", "ble"),
    ("logi", "log"),
)

_STEP3_RULES = (
    ("icate", "ic"), ("ative", ""), ("alize", "al"),
    ("iciti", "ic"), ("ical", "ic"), ("ful", ""), ("ness", ""),
)

_STEP4_SUFFIXES = (
    "al", "ance", "ence", "er", "ic", "able", "ible", "ant",
    "ement", "ment", "ent", "ion", "ou", "ism", "ate", "iti",
    "ous", "ive", "ize",
)


def _apply_longest(w: str, rules, min_measure: int) -> str:
    best = None
    for suffix, repl in rules:
        if w.endswith(suffix) and (best is None or len(suffix) > len(best[0])):
            best = (suffix, repl)
    if best is None:
        return w
    suffix, repl = best
    stem = w[: len(w) - len(suffix)]
    if _measure(stem) > min_measure - 1:
        return stem + repl
    return w


def _step4(w: str) -> str:
    best = None
    for suffix in _STEP4_SUFFIXES:
        if w.endswith(suffix) and (best is None or len(suffix) > len(best)):
            best = suffix
    if best is None:
        return w
    stem = w[: len(w) - len(best)]
    if best == "ion" and (not stem or stem[-1] not in "st"):
        return w
    if _measure(stem) > 1:
        return stem
    return w


def _step5a(w: str) -> str:
    if w.endswith("e"):
        m = _measure(w)
        if m > 1 or (m == 1 and not _ends_cvc(w[:-1])):
            return w[:-1]
    return w


def _step5b(w: str) -> str:
    if w.endswith("ll") and _measure(w) > 1:
        return w[:-1]
    return w


def stem(word: str) -> str:
    """Return the Porter stem of a lowercase word."""
    if len(word) <= 2:
        return word
    w = _step1a(word)
    w = _step1b(w)
    w = _step1c(w)
    w = _apply_longest(w, _STEP2_RULES, 1)
    w = _apply_longest(w, _STEP3_RULES, 1)
    w = _step4(w)
    w = _step5a(w)
    w = _step5b(w)
    return w
