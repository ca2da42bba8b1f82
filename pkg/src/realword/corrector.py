"""Noisy-channel correction: pair-state trigram Viterbi with beam pruning.

The hidden state at position i is the pair (intended word at i-1, intended
word at i), so every transition scores a full trigram.  Emissions come from
a one-parameter channel: with probability beta the observed word is the
intended word; the remaining mass is spread uniformly over the intended
word's distance-1 variations.  Observed tokens outside the real-word
vocabulary (punctuation, digit classes, unknown words) are never correction
candidates, though they still contribute context through the language
model's unknown-word handling.

Decoding is exact up to the beam: states at each position are pruned to the
t best by accumulated path score (transition and emission included), and
every tie, in pruning, in backpointer choice, and in the final argmax, is
broken by the lexicographic order of (word, previous word) so identical
inputs always decode identically.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Sequence

from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .confusion import ConfusionIndex, build_confusion_index
from .lm import TrigramModel, logprob_word, train
from .validation import (
    check_positive_int,
    check_same_vocabulary,
    check_sentences,
    check_unit_interval,
)
from .vocab import BEGIN_MARKER, END_MARKER, Vocabulary, build_base_vocab

__all__ = [
    "STRUCTURAL_ZERO",
    "ChannelParams",
    "DecoderConfig",
    "ChangeRecord",
    "candidate_intended",
    "emission_logprob",
    "viterbi_correct",
    "correct_corpus",
    "save_changes",
    "load_changes",
    "NoisyChannelCorrector",
]

# Emission score for (intended, observed) pairs the channel cannot produce.
# Candidate generation never proposes such pairs except at beta=1, where
# every non-identity emission collapses to it; the decoder skips these
# states outright, so stored path scores stay finite.
STRUCTURAL_ZERO = float("-inf")


@dataclass(frozen=True)
class ChannelParams:
    """beta: probability that the observed word is the intended word."""

    beta: float

    def __post_init__(self):
        check_unit_interval("beta", self.beta)


@dataclass(frozen=True)
class DecoderConfig:
    """t: number of pair states kept per position after pruning."""

    t: int

    def __post_init__(self):
        check_positive_int("t", self.t)


@dataclass(frozen=True)
class ChangeRecord:
    """One proposed correction: where, what was seen, what replaces it."""

    sentence_id: int
    position: int
    observed: str
    proposed: str


def candidate_intended(w: str, ci: ConfusionIndex, v: Vocabulary) -> set[str]:
    """Possible intended words behind observed token w.

    Real-word tokens may be themselves or any distance-1 variation; every
    other token (punctuation, digit classes, out-of-vocabulary words) is
    taken at face value.
    """
    if w in v.realword_set:
        return {w, *ci.variations(w)}
    return {w}


def emission_logprob(
    intended: str, observed: str, ci: ConfusionIndex, cp: ChannelParams
) -> float:
    """log10 P(observed | intended) under the uniform-variation channel.

    Identity costs log10(beta); a variation of the intended word costs
    log10((1-beta)/|variations(intended)|); anything else is STRUCTURAL_ZERO.
    When the intended word has no variations the identity emission is left
    at beta, not renormalized to 1.
    """
    if intended == observed:
        return math.log10(cp.beta)
    variants = ci.variations(intended)
    if observed in variants:
        mass = (1.0 - cp.beta) / len(variants)
        if mass > 0.0:
            return math.log10(mass)
    return STRUCTURAL_ZERO


def _tie_key(state: tuple[str, str]) -> tuple[str, str]:
    # states are keyed (prev_word, word); ties compare (word, prev_word)
    return state[1], state[0]


def viterbi_correct(
    s: Sequence[str],
    m: TrigramModel,
    ci: ConfusionIndex,
    cp: ChannelParams,
    dc: DecoderConfig,
) -> tuple[list[str], float]:
    """Most probable intended sentence behind s, with its path log10 score.

    The lattice is seeded with the begin-marker pair; each step from state
    (a, b) to (b, c) adds the trigram score of c after (a, b) plus the
    emission score of the observed token given c; termination adds the
    end-marker trigram so the last word feels rightward context.  The
    returned sequence always has the same length as the input.

    Raises:
        ValueError: on an empty sentence.
    """
    if not s:
        raise ValueError("cannot decode an empty sentence")
    # state -> (path score, predecessor state); one dict per position
    seed = (BEGIN_MARKER, BEGIN_MARKER)
    layer: dict[tuple[str, str], tuple[float, tuple[str, str] | None]] = {seed: (0.0, None)}
    trail: list[dict[tuple[str, str], tuple[float, tuple[str, str] | None]]] = []
    for obs in s:
        variants = ci.neighborhood.get(obs)
        cands = (obs, *variants) if variants is not None else (obs,)
        nxt: dict[tuple[str, str], tuple[float, tuple[str, str] | None]] = {}
        for prev_state, (base, _) in layer.items():
            a, b = prev_state
            for c in cands:
                emis = emission_logprob(c, obs, ci, cp)
                if emis == STRUCTURAL_ZERO:
                    continue
                score = base
                score += logprob_word(m, (a, b), c)
                score += emis
                state = (b, c)
                cur = nxt.get(state)
                if (
                    cur is None
                    or score > cur[0]
                    or (score == cur[0] and _tie_key(prev_state) < _tie_key(cur[1]))
                ):
                    nxt[state] = (score, prev_state)
        if len(nxt) > dc.t:
            kept = sorted(nxt.items(), key=lambda kv: (-kv[1][0], _tie_key(kv[0])))
            nxt = dict(kept[: dc.t])
        trail.append(nxt)
        layer = nxt

    best_state: tuple[str, str] | None = None
    best_score = 0.0
    for state, (base, _) in layer.items():
        score = base + logprob_word(m, state, END_MARKER)
        if (
            best_state is None
            or score > best_score
            or (score == best_score and _tie_key(state) < _tie_key(best_state))
        ):
            best_state, best_score = state, score

    intended: list[str] = []
    state = best_state
    for positions in reversed(trail):
        intended.append(state[1])
        state = positions[state][1]
    intended.reverse()
    return intended, best_score


def correct_corpus(
    sentences: Iterable[Sequence[str]],
    m: TrigramModel,
    ci: ConfusionIndex,
    cp: ChannelParams,
    dc: DecoderConfig,
) -> tuple[list[list[str]], list[ChangeRecord]]:
    """Decode every sentence independently and log each proposed change.

    Raises:
        VocabularyMismatchError: when the model and the index carry
            different vocabulary fingerprints.
    """
    check_same_vocabulary(model=m.vocab_fingerprint, index=ci.vocab_fingerprint)
    sentences = check_sentences(sentences)
    corrected: list[list[str]] = []
    changes: list[ChangeRecord] = []
    for sid, sent in enumerate(sentences):
        out, _ = viterbi_correct(sent, m, ci, cp, dc)
        corrected.append(out)
        for pos, (observed, proposed) in enumerate(zip(sent, out)):
            if observed != proposed:
                changes.append(ChangeRecord(sid, pos, observed, proposed))
    return corrected, changes


def save_changes(changes: Iterable[ChangeRecord], path: str | Path) -> None:
    """Write "sentence_id<TAB>position<TAB>observed<TAB>proposed" lines."""
    lines = [f"{c.sentence_id}\t{c.position}\t{c.observed}\t{c.proposed}\n" for c in changes]
    Path(path).write_text("".join(lines), encoding="utf-8")


def load_changes(path: str | Path) -> list[ChangeRecord]:
    changes = []
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        if not line:
            continue
        parts = line.split("\t")
        if len(parts) != 4:
            raise ValueError(f"{path}:{lineno}: expected 4 tab-separated fields, got {line!r}")
        changes.append(ChangeRecord(int(parts[0]), int(parts[1]), parts[2], parts[3]))
    return changes


class NoisyChannelCorrector(BaseEstimator):
    """Estimator facade: fit on clean text, predict corrected sentences.

    Parameters:
        model: optional pre-trained TrigramModel; fit trains one on the
            training sentences when None.
        confusion_index: optional prebuilt ConfusionIndex; derived from the
            training vocabulary when None.
        beta: channel probability that an observed word is intended.
        beam_width: pair states kept per position while decoding.
    """

    def __init__(
        self,
        model: TrigramModel | None = None,
        confusion_index: ConfusionIndex | None = None,
        beta: float = 0.9995,
        beam_width: int = 3,
    ):
        self.model = model
        self.confusion_index = confusion_index
        self.beta = beta
        self.beam_width = beam_width

    def fit(self, X: Iterable[Sequence[str]], y=None) -> "NoisyChannelCorrector":
        cp = ChannelParams(self.beta)
        dc = DecoderConfig(self.beam_width)
        model = self.model
        ci = self.confusion_index
        if model is None or ci is None:
            sentences = check_sentences(X)
            vocab = build_base_vocab(t for s in sentences for t in s)
            if model is None:
                model = train(sentences, vocab)
            if ci is None:
                ci = build_confusion_index(vocab)
        check_same_vocabulary(model=model.vocab_fingerprint, index=ci.vocab_fingerprint)
        self.model_ = model
        self.confusion_index_ = ci
        self.channel_ = cp
        self.decoder_ = dc
        return self

    def correct(
        self, X: Iterable[Sequence[str]]
    ) -> tuple[list[list[str]], list[ChangeRecord]]:
        check_is_fitted(self)
        return correct_corpus(X, self.model_, self.confusion_index_, self.channel_, self.decoder_)

    def predict(self, X: Iterable[Sequence[str]]) -> list[list[str]]:
        return self.correct(X)[0]
