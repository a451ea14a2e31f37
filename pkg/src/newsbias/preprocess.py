"""Tokenization, sentence splitting, and gender-signal masking.

The pipeline order is: tokenize -> split_sentences -> mask_gender_signals
-> (optionally) remove_stopwords -> (optionally) stem. All operations are
pure and return new TokenStream values, so they are safe to run
data-parallel per article.

Masking deletes grammatical gender signals (pronouns and titles, see
DEFAULT_GENDERED_SIGNALS) and replaces each politician mention with a
single neutral marker that records the form of the name used
(full name, surname only, or given name only). Content words that merely
relate to gender ("husband", "female", ...) are deliberately left in
place: they are analysis targets, not leakage.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

from . import porter
from .errors import DataError, InvariantError

# token kinds
WORD = "word"
NUMBER = "number"
PUNCT = "punct"
MARKER = "marker"

# name-form markers; the only surfaces a marker token may carry
FORM_FULL = "full"
FORM_SURNAME = "surname"
FORM_GIVEN = "given"
MARKER_FOR_FORM = {
    FORM_FULL: "NAMEFORM_FULL",
    FORM_SURNAME: "NAMEFORM_SURNAME",
    FORM_GIVEN: "NAMEFORM_GIVEN",
}
MARKER_SURFACES = frozenset(MARKER_FOR_FORM.values())

# grammatical gender signals deleted outright by masking; titles included,
# gendered content nouns (wife, husband, female, ...) deliberately excluded
DEFAULT_GENDERED_SIGNALS = frozenset(
    """he him his himself she her hers herself
    mr mrs ms miss madam sir
    spokesman spokeswoman chairman chairwoman""".split()
)

DEFAULT_ABBREVIATIONS = frozenset({"mr", "mrs", "ms", "dr", "st"})

_SENTENCE_FINAL = frozenset({".", "!", "?"})

# numbers: digit runs with dots between digits and trailing letters ("3.4bn");
# words: unicode letters with internal apostrophes/hyphens kept
_TOKEN_RE = re.compile(
    r"(?P<number>\d+(?:\.\d+)*[^\W\d_]*)"
    r"|(?P<word>[^\W\d_]+(?:['’\-][^\W\d_]+)*)"
    r"|(?P<punct>\S)",
)


@dataclass(frozen=True, slots=True)
class Token:
    surface: str
    kind: str


@dataclass(frozen=True, slots=True)
class MentionSpan:
    """Token index span [start, end) covering one politician mention."""

    start: int
    end: int
    form: str

    def __post_init__(self):
        if self.form not in MARKER_FOR_FORM:
            raise InvariantError(f"unknown name form {self.form!r}")
        if not 0 <= self.start < self.end:
            raise InvariantError(f"bad mention span [{self.start}, {self.end})")


@dataclass(frozen=True, slots=True)
class TokenStream:
    """Immutable token sequence, optionally carrying sentence spans."""

    tokens: tuple[Token, ...]
    sentence_spans: tuple[tuple[int, int], ...] = ()

    def __post_init__(self):
        if self.sentence_spans:
            expected = 0
            for start, end in self.sentence_spans:
                if start != expected or end <= start:
                    raise InvariantError("sentence spans must partition the tokens")
                expected = end
            if expected != len(self.tokens):
                raise InvariantError("sentence spans must cover all tokens")
        for tok in self.tokens:
            if tok.kind == MARKER and tok.surface not in MARKER_SURFACES:
                raise InvariantError(f"unknown marker token {tok.surface!r}")

    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(text: str) -> TokenStream:
    """Lowercased tokens over letters/digits; single-char punct; no sentence spans."""
    tokens = []
    for m in _TOKEN_RE.finditer(text):
        kind = m.lastgroup
        surface = m.group()
        if kind == "word":
            tokens.append(Token(surface.lower(), WORD))
        elif kind == "number":
            tokens.append(Token(surface.lower(), NUMBER))
        else:
            tokens.append(Token(surface, PUNCT))
    return TokenStream(tuple(tokens))


def split_sentences(
    stream: TokenStream,
    abbreviations: frozenset[str] = DEFAULT_ABBREVIATIONS,
) -> TokenStream:
    """Close a sentence after each run of . ! ? unless guarded by an abbreviation.

    The guard applies to a lone "." directly preceded by a registered
    abbreviation word ("dr", "st", ...). A final unterminated sentence is
    closed at the end of the stream; an empty stream has no spans.
    """
    tokens = stream.tokens
    spans = []
    start = 0
    i = 0
    n = len(tokens)
    while i < n:
        tok = tokens[i]
        if tok.kind == PUNCT and tok.surface in _SENTENCE_FINAL:
            run_start = i
            while i + 1 < n and tokens[i + 1].kind == PUNCT and tokens[i + 1].surface in _SENTENCE_FINAL:
                i += 1
            lone_period = i == run_start and tok.surface == "."
            guarded = (
                lone_period
                and run_start > 0
                and tokens[run_start - 1].kind == WORD
                and tokens[run_start - 1].surface in abbreviations
            )
            if not guarded:
                spans.append((start, i + 1))
                start = i + 1
        i += 1
    if start < n:
        spans.append((start, n))
    return TokenStream(tokens, tuple(spans))


def concat_streams(a: TokenStream, b: TokenStream) -> TokenStream:
    """Join two streams, keeping both sets of sentence spans (b's shifted)."""
    offset = len(a.tokens)
    spans = tuple(a.sentence_spans) + tuple((s + offset, e + offset) for s, e in b.sentence_spans)
    return TokenStream(tuple(a.tokens) + tuple(b.tokens), spans)


def _reindex_spans(
    spans: Sequence[tuple[int, int]], new_pos: Sequence[int]
) -> tuple[tuple[int, int], ...]:
    # new_pos[i] = number of output tokens emitted for input tokens < i;
    # sentences that end up empty are dropped
    out = []
    for start, end in spans:
        a, b = new_pos[start], new_pos[end]
        if b > a:
            out.append((a, b))
    return tuple(out)


def mask_gender_signals(
    stream: TokenStream,
    mentions: Sequence[MentionSpan],
    signals: frozenset[str] = DEFAULT_GENDERED_SIGNALS,
) -> TokenStream:
    """Delete gender-signal words and collapse each mention span to one marker.

    Mention spans must be disjoint and within bounds (they come from the
    matcher, which guarantees both); overlap is an upstream contract
    violation and raises. All other tokens pass through unchanged,
    including quoted material.
    """
    n = len(stream.tokens)
    ordered = sorted(mentions, key=lambda s: s.start)
    prev_end = 0
    for span in ordered:
        if span.start < prev_end:
            raise InvariantError(f"overlapping mention spans at token {span.start}")
        if span.end > n:
            raise InvariantError(f"mention span [{span.start}, {span.end}) exceeds stream length {n}")
        prev_end = span.end

    marker_at = {s.start: s for s in ordered}
    out: list[Token] = []
    new_pos = [0] * (n + 1)
    i = 0
    while i < n:
        new_pos[i] = len(out)
        span = marker_at.get(i)
        if span is not None:
            out.append(Token(MARKER_FOR_FORM[span.form], MARKER))
            for j in range(i + 1, span.end):
                new_pos[j] = len(out) - 1
            i = span.end
            continue
        tok = stream.tokens[i]
        if not (tok.kind == WORD and tok.surface in signals):
            out.append(tok)
        i += 1
    new_pos[n] = len(out)
    return TokenStream(tuple(out), _reindex_spans(stream.sentence_spans, new_pos))


def remove_stopwords(stream: TokenStream, stoplist: frozenset[str]) -> TokenStream:
    """Drop word tokens found in the stoplist; markers are never removed."""
    out: list[Token] = []
    new_pos = [0] * (len(stream.tokens) + 1)
    for i, tok in enumerate(stream.tokens):
        new_pos[i] = len(out)
        if not (tok.kind == WORD and tok.surface in stoplist):
            out.append(tok)
    new_pos[len(stream.tokens)] = len(out)
    return TokenStream(tuple(out), _reindex_spans(stream.sentence_spans, new_pos))


def stem(stream: TokenStream) -> TokenStream:
    """Replace each word token by its Porter stem; other kinds untouched."""
    tokens = tuple(
        Token(porter.stem(t.surface), WORD) if t.kind == WORD else t for t in stream.tokens
    )
    return TokenStream(tokens, stream.sentence_spans)


def load_wordlist(path: str | Path) -> frozenset[str]:
    """One lowercase token per line; blank lines and '#' comments ignored."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"word list not found: {path}")
    words = set()
    for line in path.read_text(encoding="utf-8").splitlines():
        entry = line.split("#", 1)[0].strip()
        if entry:
            words.add(entry.lower())
    return frozenset(words)
