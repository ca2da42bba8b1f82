"""Input validation helpers shared by the pipeline stages."""
from __future__ import annotations

from typing import Iterable, Sequence

__all__ = [
    "VocabularyMismatchError",
    "check_sentences",
    "check_positive_int",
    "check_unit_interval",
    "check_same_vocabulary",
]


class VocabularyMismatchError(ValueError):
    """Two artifacts that must share a vocabulary carry different fingerprints."""


def check_sentences(X: Iterable[Sequence[str]], name: str = "X") -> list[list[str]]:
    """Materialize and validate a corpus: a list of token-surface lists.

    Tokens must be non-empty strings without whitespace (whitespace would
    corrupt the one-sentence-per-line interchange format).
    """
    sentences = []
    for i, sent in enumerate(X):
        if isinstance(sent, str):
            raise TypeError(
                f"{name}[{i}] is a string; expected a list of tokens "
                "(split sentences before passing them in)"
            )
        tokens = list(sent)
        for t in tokens:
            if not isinstance(t, str) or not t:
                raise ValueError(f"{name}[{i}] contains a non-string or empty token: {t!r}")
            if any(ch.isspace() for ch in t):
                raise ValueError(f"{name}[{i}] contains whitespace inside a token: {t!r}")
        sentences.append(tokens)
    return sentences


def check_positive_int(name: str, value, minimum: int = 1) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise TypeError(f"{name} must be an integer, got {type(value).__name__}")
    if value < minimum:
        raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return value


def check_unit_interval(name: str, value, include_zero: bool = False) -> float:
    value = float(value)
    lo_ok = value >= 0.0 if include_zero else value > 0.0
    if not (lo_ok and value <= 1.0):
        lo = "0" if include_zero else "0 (exclusive)"
        raise ValueError(f"{name} must be in ({lo}, 1], got {value}")
    return value


def check_same_vocabulary(**fingerprints: str | None) -> None:
    """Raise when two artifacts carry different vocabulary fingerprints.

    Artifacts without provenance (fingerprint None, e.g. models imported
    from bare ARPA text) are skipped: there is nothing to compare.
    """
    seen: tuple[str, str] | None = None
    for label, fp in fingerprints.items():
        if fp is None:
            continue
        if seen is None:
            seen = (label, fp)
        elif fp != seen[1]:
            raise VocabularyMismatchError(
                f"{label} and {seen[0]} were built from different vocabularies "
                f"({fp[:12]}… vs {seen[1][:12]}…)"
            )
