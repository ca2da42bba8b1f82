"""Command-line pipeline driver.

Subcommands cover the full workflow: prepare raw text, train the language
model, inspect vocabulary statistics, plant seeded errors, score the
original-vs-altered discrimination task, decode corrections, evaluate a
run, and sweep the (beam width x beta) grid.

Every option can instead come from a JSON config object passed with
--config; explicit flags win over config values.  Documented config keys:

    rate, seed, beta, beam, model, index, vocab, out, records, changes,
    original, beta_list, t_list

All commands are deterministic given their inputs and seeds: rerunning a
command rewrites byte-identical artifacts.  Failures exit nonzero with a
diagnostic naming the failing stage on stderr.

Corpus files are plain text, one sentence per line, tokens separated by
single spaces.
"""
from __future__ import annotations

import functools
import json
from pathlib import Path

import click

from .confusion import build_confusion_index, load_index, save_index
from .corrector import ChannelParams, DecoderConfig, correct_corpus, save_changes
from .corruptor import CorruptionConfig, corrupt_corpus, multi_error_census, save_records
from .corruptor import load_records as _load_records
from .evalkit import (
    botd_accuracy,
    botd_pairs,
    evaluate_run,
    format_report_table,
    report_as_json,
)
from .lm import load_arpa, save_arpa, train
from .textprep import prepare_document
from .vocab import build_base_vocab, load_vocab, save_vocab, vocab_stats

_CONFIG_KEYS = {
    "rate",
    "seed",
    "beta",
    "beam",
    "model",
    "index",
    "vocab",
    "out",
    "records",
    "changes",
    "original",
    "beta_list",
    "t_list",
}


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    if not isinstance(data, dict):
        raise ValueError(f"{path}: config must be a JSON object")
    unknown = sorted(set(data) - _CONFIG_KEYS)
    if unknown:
        raise ValueError(f"{path}: unknown config keys {unknown}")
    return data


def _pick(flag, cfg: dict, key: str, default=None, required: bool = False):
    value = flag if flag is not None else cfg.get(key, default)
    if required and value is None:
        option = "--" + key.replace("_", "-")
        raise ValueError(f"{option} is required (flag or config key {key!r})")
    return value


def _read_corpus(path) -> list[list[str]]:
    sentences = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        tokens = line.split()
        if tokens:
            sentences.append(tokens)
    if not sentences:
        raise ValueError(f"{path}: no sentences")
    return sentences


def _write_corpus(sentences, path) -> None:
    Path(path).write_text("".join(" ".join(s) + "\n" for s in sentences), encoding="utf-8")


def _stage(name: str):
    """Convert any failure into a nonzero exit naming the pipeline stage."""

    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                return fn(*args, **kwargs)
            except Exception as exc:
                click.echo(f"error in {name}: {exc}", err=True)
                raise SystemExit(1)

        return wrapper

    return decorate


_config_option = click.option(
    "--config", "config_path", type=click.Path(), default=None, help="JSON config file."
)


@click.group()
def main():
    """Real-word spelling correction: train, corrupt, correct, evaluate."""


@main.command()
@click.argument("inputs", nargs=-1, required=True)
@click.option("--out", "out", default=None, help="Tokenized corpus file to write.")
@_config_option
@_stage("prepare")
def prepare(inputs, out, config_path):
    """Segment and tokenize raw text documents into a corpus file."""
    cfg = _load_config(config_path)
    out = _pick(out, cfg, "out", required=True)
    paths: list[Path] = []
    for raw in inputs:
        p = Path(raw)
        if p.is_dir():
            paths.extend(sorted(q for q in p.rglob("*") if q.is_file()))
        else:
            paths.append(p)
    if not paths:
        raise ValueError("no input documents found")
    sentences = []
    for p in paths:
        for sent in prepare_document(p.read_text(encoding="utf-8")):
            sentences.append(sent.surfaces)
    if not sentences:
        raise ValueError("inputs contained no sentences")
    _write_corpus(sentences, out)
    click.echo(f"prepared {len(sentences)} sentences from {len(paths)} documents -> {out}")


@main.command("train")
@click.argument("corpus", type=click.Path())
@click.option("--model", "model_path", default=None, help="ARPA model file to write.")
@click.option("--vocab", "vocab_path", default=None, help="Vocabulary file to write.")
@click.option("--index", "index_path", default=None, help="Confusion index file to write.")
@_config_option
@_stage("train")
def train_cmd(corpus, model_path, vocab_path, index_path, config_path):
    """Build the vocabulary and train the trigram model."""
    cfg = _load_config(config_path)
    model_path = _pick(model_path, cfg, "model", required=True)
    vocab_path = _pick(vocab_path, cfg, "vocab", default=str(Path(model_path).with_suffix(".vocab.tsv")))
    index_path = _pick(index_path, cfg, "index")
    sentences = _read_corpus(corpus)
    vocabulary = build_base_vocab(t for s in sentences for t in s)
    model = train(sentences, vocabulary)
    save_vocab(vocabulary, vocab_path)
    save_arpa(model, model_path)
    written = [str(vocab_path), str(model_path)]
    if index_path is not None:
        save_index(build_confusion_index(vocabulary), index_path)
        written.append(str(index_path))
    stats = vocab_stats(vocabulary)
    click.echo(
        f"trained on {len(sentences)} sentences, {stats['token_count']} tokens, "
        f"{stats['type_count']} types -> {', '.join(written)}"
    )


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--out", "out", default=None, help="Write the JSON stats here as well.")
@_config_option
@_stage("stats")
def stats(corpus, out, config_path):
    """Print vocabulary statistics for a tokenized corpus."""
    cfg = _load_config(config_path)
    out = _pick(out, cfg, "out")
    sentences = _read_corpus(corpus)
    vocabulary = build_base_vocab(t for s in sentences for t in s)
    payload = json.dumps(vocab_stats(vocabulary), indent=2, sort_keys=True)
    if out is not None:
        Path(out).write_text(payload + "\n", encoding="utf-8")
    click.echo(payload)


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--vocab", "vocab_path", default=None, help="Vocabulary file (from train).")
@click.option("--index", "index_path", default=None, help="Confusion index file; built from the vocabulary when absent.")
@click.option("--rate", "rate", type=int, default=None, help="Corrupt 1 in RATE eligible tokens (default 200).")
@click.option("--seed", "seed", type=int, default=None, help="RNG seed (default 0).")
@click.option("--out", "out", default=None, help="Corrupted corpus file to write.")
@click.option("--records", "records_path", default=None, help="Gold record TSV to write.")
@_config_option
@_stage("corrupt")
def corrupt(corpus, vocab_path, index_path, rate, seed, out, records_path, config_path):
    """Plant seeded real-word errors and write gold records."""
    cfg = _load_config(config_path)
    vocab_path = _pick(vocab_path, cfg, "vocab", required=True)
    index_path = _pick(index_path, cfg, "index")
    rate = _pick(rate, cfg, "rate", default=200)
    seed = _pick(seed, cfg, "seed", default=0)
    out = _pick(out, cfg, "out", required=True)
    records_path = _pick(records_path, cfg, "records", default=f"{out}.records.tsv")
    sentences = _read_corpus(corpus)
    vocabulary = load_vocab(vocab_path)
    index = load_index(index_path) if index_path else build_confusion_index(vocabulary)
    corrupted, records = corrupt_corpus(
        sentences, vocabulary, index, CorruptionConfig(rate, seed=seed)
    )
    _write_corpus(corrupted, out)
    save_records(records, records_path)
    click.echo(json.dumps(multi_error_census(records, sentences), indent=2, sort_keys=True))


@main.command()
@click.argument("original", type=click.Path())
@click.argument("corrupted", type=click.Path())
@click.option("--model", "model_path", default=None, help="ARPA model file.")
@click.option("--out", "out", default=None, help="Write the JSON result here as well.")
@_config_option
@_stage("botd")
def botd(original, corrupted, model_path, out, config_path):
    """Score original-vs-altered discrimination over changed sentences."""
    cfg = _load_config(config_path)
    model_path = _pick(model_path, cfg, "model", required=True)
    out = _pick(out, cfg, "out")
    model = load_arpa(model_path)
    pairs = botd_pairs(_read_corpus(original), _read_corpus(corrupted))
    payload = json.dumps(
        {"pairs": len(pairs), "accuracy": botd_accuracy(model, pairs)}, indent=2, sort_keys=True
    )
    if out is not None:
        Path(out).write_text(payload + "\n", encoding="utf-8")
    click.echo(payload)


@main.command()
@click.argument("corpus", type=click.Path())
@click.option("--model", "model_path", default=None, help="ARPA model file.")
@click.option("--index", "index_path", default=None, help="Confusion index file.")
@click.option("--beta", "beta", type=float, default=None, help="Channel identity probability (default 0.9995).")
@click.option("--beam", "beam", type=int, default=None, help="Beam width t (default 3).")
@click.option("--out", "out", default=None, help="Corrected corpus file to write.")
@click.option("--changes", "changes_path", default=None, help="Proposed-change TSV to write.")
@_config_option
@_stage("correct")
def correct(corpus, model_path, index_path, beta, beam, out, changes_path, config_path):
    """Decode the most probable intended sentences."""
    cfg = _load_config(config_path)
    model_path = _pick(model_path, cfg, "model", required=True)
    index_path = _pick(index_path, cfg, "index", required=True)
    beta = _pick(beta, cfg, "beta", default=0.9995)
    beam = _pick(beam, cfg, "beam", default=3)
    out = _pick(out, cfg, "out", required=True)
    changes_path = _pick(changes_path, cfg, "changes", default=f"{out}.changes.tsv")
    sentences = _read_corpus(corpus)
    model = load_arpa(model_path)
    index = load_index(index_path)
    corrected, changes = correct_corpus(
        sentences, model, index, ChannelParams(beta), DecoderConfig(beam)
    )
    _write_corpus(corrected, out)
    save_changes(changes, changes_path)
    click.echo(f"corrected {len(corrected)} sentences, proposed {len(changes)} changes -> {out}")


@main.command()
@click.argument("original", type=click.Path())
@click.argument("corrected", type=click.Path())
@click.option("--records", "records_path", default=None, help="Gold record TSV from corrupt.")
@click.option("--beta", "beta", type=float, default=None, help="Report metadata: decoder beta.")
@click.option("--beam", "beam", type=int, default=None, help="Report metadata: beam width t.")
@click.option("--rate", "rate", type=int, default=None, help="Report metadata: corruption rate denominator.")
@click.option("--out", "out", default=None, help="JSON report file to write.")
@_config_option
@_stage("evaluate")
def evaluate(original, corrected, records_path, beta, beam, rate, out, config_path):
    """Classify outcomes against gold records and report the metrics."""
    cfg = _load_config(config_path)
    records_path = _pick(records_path, cfg, "records", required=True)
    beta = _pick(beta, cfg, "beta")
    beam = _pick(beam, cfg, "beam")
    rate = _pick(rate, cfg, "rate")
    out = _pick(out, cfg, "out")
    params = {k: v for k, v in (("beta", beta), ("t", beam), ("rate", rate)) if v is not None}
    _, report = evaluate_run(
        _read_corpus(original), _load_records(records_path), _read_corpus(corrected), params
    )
    if out is not None:
        Path(out).write_text(report_as_json(report) + "\n", encoding="utf-8")
    click.echo(format_report_table([report]), nl=False)


@main.command()
@click.argument("observed", type=click.Path())
@click.option("--original", "original_path", default=None, help="Clean corpus the errors were planted in.")
@click.option("--records", "records_path", default=None, help="Gold record TSV from corrupt.")
@click.option("--model", "model_path", default=None, help="ARPA model file.")
@click.option("--index", "index_path", default=None, help="Confusion index file.")
@click.option("--beta", "beta", type=float, default=None, help="Single beta overriding the config beta_list.")
@click.option("--beam", "beam", type=int, default=None, help="Single beam width overriding the config t_list.")
@click.option("--rate", "rate", type=int, default=None, help="Report metadata: corruption rate denominator.")
@click.option("--out", "out", default=None, help="JSON report list file to write.")
@_config_option
@_stage("sweep")
def sweep(observed, original_path, records_path, model_path, index_path, beta, beam, rate, out, config_path):
    """Decode and evaluate every (beam width, beta) grid cell."""
    cfg = _load_config(config_path)
    original_path = _pick(original_path, cfg, "original", required=True)
    records_path = _pick(records_path, cfg, "records", required=True)
    model_path = _pick(model_path, cfg, "model", required=True)
    index_path = _pick(index_path, cfg, "index", required=True)
    rate = _pick(rate, cfg, "rate")
    out = _pick(out, cfg, "out")
    t_list = [beam] if beam is not None else cfg.get("t_list", [])
    beta_list = [beta] if beta is not None else cfg.get("beta_list", [])
    if not t_list or not beta_list:
        raise ValueError("empty sweep grid: need t_list and beta_list (config) or --beam/--beta")
    sentences = _read_corpus(observed)
    original = _read_corpus(original_path)
    records = _load_records(records_path)
    model = load_arpa(model_path)
    index = load_index(index_path)
    reports = []
    for t in t_list:
        for b in beta_list:
            corrected, _ = correct_corpus(
                sentences, model, index, ChannelParams(b), DecoderConfig(t)
            )
            params = {"beta": b, "t": t}
            if rate is not None:
                params["rate"] = rate
            _, report = evaluate_run(original, records, corrected, params)
            reports.append(report)
    if out is not None:
        payload = json.dumps([r.as_dict() for r in reports], indent=2, sort_keys=True)
        Path(out).write_text(payload + "\n", encoding="utf-8")
    click.echo(format_report_table(reports), nl=False)


if __name__ == "__main__":
    main()
