"""Deterministic sentence segmentation, tokenization, and digit regularization.

All downstream stages (vocabulary, language model, corruption, correction)
consume the output of this module in the corpus interchange format: one
sentence per line, token surfaces separated by single spaces.  Everything
here is a pure function of its inputs, so identical input text yields
byte-identical output on every run and platform.

Why the hand-rolled segmenter?
------------------------------
Off-the-shelf segmenters are trained and their behaviour drifts between
versions.  The rules here are small and explicit: a period ends a sentence
unless it terminates a known abbreviation, a single-letter initial, or sits
between digits; question and exclamation marks always end one.  A cheap
single-pass heuristic can additionally learn corpus-specific abbreviations
(tokens like "approx." that are repeatedly followed by lowercase text).
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources

__all__ = [
    "Token",
    "TokenKind",
    "Sentence",
    "EmptyDocumentError",
    "default_abbreviations",
    "learn_abbreviations",
    "segment_sentences",
    "tokenize",
    "regularize_digits",
    "prepare_document",
]

# Suffixes split off as the second half of a contraction; the apostrophe
# stays with the suffix ("do" + "n't", "cat" + "'s").
_CONTRACTION_SUFFIXES = ("s", "ll", "re", "ve", "d", "m")

# Closing quotes/brackets that may trail a sentence-final punctuation mark.
_CLOSERS = "\"')]}’”"

_DIGIT_CLASS_RE = re.compile(r"^<d([1-8]|9\+)>$")

_WS_CHUNK_RE = re.compile(r"\S+")


class TokenKind(Enum):
    WORD = "word"
    PUNCTUATION = "punctuation"
    DIGIT_CLASS = "digit_class"
    OTHER = "other"


@dataclass(frozen=True)
class Token:
    """A single token with its character span in the tokenized text."""

    surface: str
    kind: TokenKind
    start: int = -1
    end: int = -1


@dataclass
class Sentence:
    tokens: list[Token] = field(default_factory=list)
    source_span: tuple[int, int] = (0, 0)

    @property
    def surfaces(self) -> list[str]:
        return [t.surface for t in self.tokens]


class EmptyDocumentError(ValueError):
    """Raised when a document holds no content to segment."""


def default_abbreviations() -> set[str]:
    """Abbreviation lexicon shipped with the package (period-stripped forms)."""
    text = resources.files("realword.data").joinpath("abbreviations.txt").read_text("utf-8")
    abbrevs = set()
    for line in text.splitlines():
        line = line.strip()
        if line and not line.startswith("#"):
            abbrevs.add(line)
    return abbrevs


def _classify(surface: str) -> TokenKind:
    if _DIGIT_CLASS_RE.match(surface):
        return TokenKind.DIGIT_CLASS
    if any(ch.isalpha() for ch in surface):
        return TokenKind.WORD
    if not any(ch.isalnum() for ch in surface):
        return TokenKind.PUNCTUATION
    return TokenKind.OTHER


def learn_abbreviations(text: str, min_evidence: int = 2) -> set[str]:
    """Learn corpus-specific abbreviations in a single pass.

    A period-terminated chunk counts as evidence for an abbreviation when
    the next chunk starts with a lowercase letter (an ordinary sentence
    boundary would be followed by an uppercase word).  Forms observed at
    least ``min_evidence`` times are returned, stripped of their period.
    """
    evidence: dict[str, int] = {}
    chunks = _WS_CHUNK_RE.findall(text)
    for chunk, nxt in zip(chunks, chunks[1:]):
        if len(chunk) < 2 or not chunk.endswith(".") or chunk.endswith(".."):
            continue
        core = chunk[:-1]
        if not any(ch.isalpha() for ch in core):
            continue
        if nxt[0].islower():
            evidence[core] = evidence.get(core, 0) + 1
    return {core for core, n in evidence.items() if n >= min_evidence}


def _is_initial(core: str) -> bool:
    return len(core) == 1 and core.isalpha() and core.isupper()


def _is_acronym(core: str) -> bool:
    # Letter-period patterns such as "U.S" or "Ph.D"; digit-bearing cores
    # like "3.14" must not swallow a sentence-final period.
    return "." in core and any(ch.isalpha() for ch in core) and not any(ch.isdigit() for ch in core)


def segment_sentences(
    text: str,
    abbreviations: set[str] | None = None,
    learn: bool = True,
) -> list[tuple[int, int]]:
    """Split a document into sentence spans (character offsets).

    A sentence boundary is placed after a whitespace-delimited chunk when
    the chunk ends in ``!`` or ``?``, or in a single period that does not
    terminate an abbreviation or a single-letter initial.  Ellipses never
    end a sentence.  Trailing closing quotes and brackets are looked
    through when inspecting the final punctuation mark.

    Returns a non-empty list of (start, end) spans into ``text``; their
    concatenation covers every non-whitespace character exactly once.

    Raises:
        EmptyDocumentError: if ``text`` contains no non-whitespace content.
    """
    if not text.strip():
        raise EmptyDocumentError("document contains no text to segment")

    abbrevs = set(default_abbreviations() if abbreviations is None else abbreviations)
    if learn:
        abbrevs |= learn_abbreviations(text)

    spans: list[tuple[int, int]] = []
    current_start: int | None = None
    current_end = 0

    matches = list(_WS_CHUNK_RE.finditer(text))
    for i, m in enumerate(matches):
        chunk = m.group()
        if current_start is None:
            current_start = m.start()
        current_end = m.end()

        if _ends_sentence(chunk, abbrevs):
            spans.append((current_start, current_end))
            current_start = None

    if current_start is not None:
        spans.append((current_start, current_end))
    return spans


def _ends_sentence(chunk: str, abbrevs: set[str]) -> bool:
    body = chunk.rstrip(_CLOSERS)
    if not body:
        return False
    last = body[-1]
    if last in "!?":
        return True
    if last != ".":
        return False
    if body.endswith(".."):
        return False  # ellipsis
    core = body[:-1]
    if not core:
        return True  # lone period
    if core in abbrevs:
        return False
    if _is_initial(core):
        return False
    return True


def tokenize(sentence_text: str, abbreviations: set[str] | None = None) -> list[Token]:
    """Tokenize one sentence, isolating punctuation at word edges.

    Leading and trailing punctuation marks become single-character tokens,
    with four exceptions: contractions split into two parts (the second of
    which keeps the apostrophe), inter-numeric commas and periods stay
    token-internal, runs of two or more periods form a single ellipsis
    token, and abbreviation or initial periods stay attached to their word.

    Every non-whitespace character of the input lands in exactly one
    token's (start, end) span.
    """
    if not sentence_text.strip():
        return []
    abbrevs = default_abbreviations() if abbreviations is None else abbreviations

    tokens: list[Token] = []
    for m in _WS_CHUNK_RE.finditer(sentence_text):
        tokens.extend(_split_chunk(m.group(), m.start(), abbrevs))
    return tokens


def _emit(surface: str, start: int) -> Token:
    return Token(surface, _classify(surface), start, start + len(surface))


def _split_chunk(chunk: str, offset: int, abbrevs: set[str]) -> list[Token]:
    lo, hi = 0, len(chunk)
    leading: list[Token] = []
    trailing: list[Token] = []

    # Peel leading punctuation (ellipses peel as one token).
    while lo < hi and not chunk[lo].isalnum() and chunk[lo] != "'":
        if chunk[lo] == ".":
            run = lo
            while run < hi and chunk[run] == ".":
                run += 1
            if run - lo >= 2:
                leading.append(_emit(chunk[lo:run], offset + lo))
                lo = run
                continue
        leading.append(_emit(chunk[lo], offset + lo))
        lo += 1

    # Peel trailing punctuation, respecting attached periods.
    while hi > lo:
        ch = chunk[hi - 1]
        if ch.isalnum():
            break
        if ch == ".":
            run = hi
            while run > lo and chunk[run - 1] == ".":
                run -= 1
            if hi - run >= 2:
                trailing.append(_emit(chunk[run:hi], offset + run))
                hi = run
                continue
            core = chunk[lo : hi - 1]
            if core in abbrevs or _is_initial(core) or _is_acronym(core):
                break  # period stays attached
            trailing.append(_emit(ch, offset + hi - 1))
            hi -= 1
            continue
        if ch == "'":
            break  # possible contraction; handled below
        trailing.append(_emit(ch, offset + hi - 1))
        hi -= 1

    core = chunk[lo:hi]
    parts: list[Token] = []
    if core:
        split_at = _contraction_split(core)
        if split_at is None:
            parts.append(_emit(core, offset + lo))
        else:
            parts.append(_emit(core[:split_at], offset + lo))
            parts.append(_emit(core[split_at:], offset + lo + split_at))
    elif hi > lo:
        parts.append(_emit(chunk[lo:hi], offset + lo))

    # A bare trailing apostrophe (possessive plural) is ordinary punctuation.
    out = leading + parts + list(reversed(trailing))
    fixed: list[Token] = []
    for tok in out:
        if tok.surface.endswith("'") and len(tok.surface) > 1 and _contraction_split(tok.surface) is None:
            fixed.append(_emit(tok.surface[:-1], tok.start))
            fixed.append(_emit("'", tok.end - 1))
        else:
            fixed.append(tok)
    return fixed


def _contraction_split(core: str) -> int | None:
    """Index at which to split a contraction, or None to keep it whole."""
    lower = core.lower()
    if lower.endswith("n't") and len(core) > 3:
        return len(core) - 3
    apo = core.rfind("'")
    if apo > 0 and lower[apo + 1 :] in _CONTRACTION_SUFFIXES:
        return apo
    return None


def regularize_digits(tokens: list[Token]) -> list[Token]:
    """Replace all-digit tokens with a length-class token.

    A token made solely of digits becomes ``<dN>`` for N digits (N in
    1..8) or ``<d9+>`` beyond that.  Tokens mixing digits with any other
    character are left unchanged.  Idempotent.
    """
    out: list[Token] = []
    for tok in tokens:
        if tok.surface.isdigit():
            n = len(tok.surface)
            surface = f"<d{n}>" if n <= 8 else "<d9+>"
            out.append(Token(surface, TokenKind.DIGIT_CLASS, tok.start, tok.end))
        else:
            out.append(tok)
    return out


def prepare_document(
    text: str,
    abbreviations: set[str] | None = None,
    learn: bool = True,
) -> list[Sentence]:
    """Run the full pipeline on one document: segment, tokenize, regularize."""
    abbrevs = set(default_abbreviations() if abbreviations is None else abbreviations)
    if learn:
        abbrevs |= learn_abbreviations(text)
    sentences = []
    for start, end in segment_sentences(text, abbrevs, learn=False):
        toks = regularize_digits(tokenize(text[start:end], abbrevs))
        if toks:
            sentences.append(Sentence(toks, (start, end)))
    return sentences
