"""Evaluation: outcome classification, detection/correction metrics, BOTD.

Every evaluated token position carries a triple (original, observed,
corrected) and falls in exactly one of five classes:

    original == observed == corrected   TN   nothing wrong, nothing done
    original == observed != corrected   FP   clean token falsely "fixed"
    original != observed, corrected == original   TP   error fixed
    original != observed, corrected == observed   FN   error missed
    original != observed != corrected != original  MC   error mangled

Correction metrics credit only exact repairs; detection metrics credit any
flagged true error (TP or MC).  The binary original-text discrimination
(BOTD) task scores the language model alone: given an original sentence and
its corrupted twin, does the model rank the original higher?
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .corruptor import CorruptionRecord
from .lm import TrigramModel, logprob_sentence
from .validation import check_sentences

__all__ = [
    "OutcomeCounts",
    "Metrics",
    "EvalReport",
    "classify_outcome",
    "compute_metrics",
    "evaluate_run",
    "botd_discriminate",
    "botd_pairs",
    "botd_accuracy",
    "report_as_json",
    "format_report_table",
]

OUTCOMES = ("TN", "FP", "TP", "FN", "MC")


@dataclass(frozen=True)
class OutcomeCounts:
    """Token-position tallies of the five outcome classes."""

    tn: int = 0
    fp: int = 0
    tp: int = 0
    fn: int = 0
    mc: int = 0

    def __post_init__(self):
        for name in ("tn", "fp", "tp", "fn", "mc"):
            v = getattr(self, name)
            if not isinstance(v, int) or isinstance(v, bool) or v < 0:
                raise ValueError(f"{name} must be a non-negative integer, got {v!r}")

    @property
    def total(self) -> int:
        return self.tn + self.fp + self.tp + self.fn + self.mc


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    f1: float


@dataclass(frozen=True)
class EvalReport:
    """Detection and correction scores plus the run parameters they came from."""

    detection: Metrics
    correction: Metrics
    accuracy: float
    params: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "detection": vars(self.detection).copy(),
            "correction": vars(self.correction).copy(),
            "accuracy": self.accuracy,
            "params": dict(self.params),
        }


def classify_outcome(original: str, observed: str, corrected: str) -> str:
    """One of "TN", "FP", "TP", "FN", "MC" for an aligned token triple."""
    if original == observed:
        return "TN" if corrected == observed else "FP"
    if corrected == original:
        return "TP"
    if corrected == observed:
        return "FN"
    return "MC"


def _ratio(num: int, den: int) -> float:
    return num / den if den else 0.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def compute_metrics(c: OutcomeCounts, params: dict | None = None) -> EvalReport:
    """Scores from outcome counts; every 0/0 ratio is defined as 0.

    Correction asks "were the changes right": P = tp/(tp+fp),
    R = tp/(tp+fn+mc).  Detection asks "were errors flagged at all", so a
    miscorrection still counts as detected: P = (tp+mc)/(tp+mc+fp),
    R = (tp+mc)/(tp+mc+fn).  Accuracy is (tn+tp)/total.
    """
    cp = _ratio(c.tp, c.tp + c.fp)
    cr = _ratio(c.tp, c.tp + c.fn + c.mc)
    dp = _ratio(c.tp + c.mc, c.tp + c.mc + c.fp)
    dr = _ratio(c.tp + c.mc, c.tp + c.mc + c.fn)
    return EvalReport(
        detection=Metrics(dp, dr, _f1(dp, dr)),
        correction=Metrics(cp, cr, _f1(cp, cr)),
        accuracy=_ratio(c.tn + c.tp, c.total),
        params=dict(params) if params else {},
    )


def evaluate_run(
    original: Iterable[Sequence[str]],
    records: Iterable[CorruptionRecord],
    corrected: Iterable[Sequence[str]],
    params: dict | None = None,
) -> tuple[OutcomeCounts, EvalReport]:
    """Classify every token position of every sentence and aggregate.

    The observed corpus is reconstructed by replaying the gold records over
    the original corpus, which also validates the records.  All positions
    are scanned: a change at a position no record touched is a genuine FP.

    Raises:
        ValueError: corpus length mismatch, per-sentence length mismatch,
            or a record that does not match the original corpus; messages
            name the offending sentence id.
    """
    original = check_sentences(original, "original")
    corrected = check_sentences(corrected, "corrected")
    if len(original) != len(corrected):
        raise ValueError(
            f"corpus size mismatch: {len(original)} original vs {len(corrected)} corrected sentences"
        )
    observed = [list(s) for s in original]
    for r in records:
        if not 0 <= r.sentence_id < len(observed):
            raise ValueError(f"record names sentence {r.sentence_id}, corpus has {len(observed)}")
        sent = observed[r.sentence_id]
        if not 0 <= r.position < len(sent):
            raise ValueError(
                f"sentence {r.sentence_id}: record position {r.position} out of range"
            )
        if original[r.sentence_id][r.position] != r.original:
            raise ValueError(
                f"sentence {r.sentence_id}: record expects {r.original!r} at "
                f"position {r.position}, corpus has {original[r.sentence_id][r.position]!r}"
            )
        sent[r.position] = r.error

    tallies = dict.fromkeys(OUTCOMES, 0)
    for sid, (orig, obs, corr) in enumerate(zip(original, observed, corrected)):
        if len(orig) != len(corr):
            raise ValueError(
                f"sentence {sid}: length mismatch ({len(orig)} original vs {len(corr)} corrected)"
            )
        for o, b, c in zip(orig, obs, corr):
            tallies[classify_outcome(o, b, c)] += 1
    counts = OutcomeCounts(
        tn=tallies["TN"], fp=tallies["FP"], tp=tallies["TP"], fn=tallies["FN"], mc=tallies["MC"]
    )
    return counts, compute_metrics(counts, params)


def botd_discriminate(
    m: TrigramModel, original: Sequence[str], altered: Sequence[str]
) -> str:
    """"original", "altered", or "tie" by strict sentence-score comparison.

    Raises:
        ValueError: identical inputs (there is nothing to discriminate).
    """
    if list(original) == list(altered):
        raise ValueError("discrimination needs two distinct sentences")
    score_o = logprob_sentence(m, original)
    score_a = logprob_sentence(m, altered)
    if score_o > score_a:
        return "original"
    if score_a > score_o:
        return "altered"
    return "tie"


def botd_pairs(
    original: Iterable[Sequence[str]], corrupted: Iterable[Sequence[str]]
) -> list[tuple[list[str], list[str]]]:
    """One (original, corrupted) pair per sentence that was actually altered.

    Sentences with several planted errors still yield a single pair.
    """
    original = check_sentences(original, "original")
    corrupted = check_sentences(corrupted, "corrupted")
    if len(original) != len(corrupted):
        raise ValueError(
            f"corpus size mismatch: {len(original)} original vs {len(corrupted)} corrupted sentences"
        )
    return [(o, c) for o, c in zip(original, corrupted) if o != c]


def botd_accuracy(
    m: TrigramModel, pairs: Iterable[tuple[Sequence[str], Sequence[str]]]
) -> float:
    """Fraction of pairs where the original wins outright; ties lose.

    Raises:
        ValueError: empty pair set.
    """
    pairs = list(pairs)
    if not pairs:
        raise ValueError("cannot score an empty pair set")
    won = sum(1 for o, a in pairs if botd_discriminate(m, o, a) == "original")
    return won / len(pairs)


def report_as_json(report: EvalReport) -> str:
    return json.dumps(report.as_dict(), indent=2, sort_keys=True)


def format_report_table(reports: Iterable[EvalReport]) -> str:
    """Aligned text table, one row per report.

    Columns: the run parameters (beam width t, beta, corruption rate), then
    detection P/R/F, correction P/R/F, and accuracy.
    """
    header = (
        f"{'t':>6} {'beta':>8} {'rate':>8}  "
        f"{'det-P':>6} {'det-R':>6} {'det-F':>6}  "
        f"{'cor-P':>6} {'cor-R':>6} {'cor-F':>6}  {'acc':>6}"
    )
    lines = [header, "-" * len(header)]
    for r in reports:
        p = r.params
        t = str(p.get("t", "-"))
        beta = f"{p['beta']:g}" if "beta" in p else "-"
        rate = f"1/{p['rate']}" if "rate" in p else "-"
        d, c = r.detection, r.correction
        lines.append(
            f"{t:>6} {beta:>8} {rate:>8}  "
            f"{d.precision:>6.3f} {d.recall:>6.3f} {d.f1:>6.3f}  "
            f"{c.precision:>6.3f} {c.recall:>6.3f} {c.f1:>6.3f}  {r.accuracy:>6.3f}"
        )
    return "\n".join(lines) + "\n"
