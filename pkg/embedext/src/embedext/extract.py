"""Extract per-layer hidden states from an encoder transformer into bundles.

Given a parsed verb corpus, runs every sentence through a BERT-style
encoder and writes one embedding-bundle row per surviving sample:

- token level: the hidden state of the verb's subword (``first_subword``)
  or the mean over the verb's subwords (``mean_subwords``, the default), at
  every layer including the input-embedding layer;
- sentence level: the mean over all real token positions, excluding
  padding always and the special marker tokens unless ``include_special``.

Samples whose verb does not survive tokenization (truncated away by the
sequence-length limit, or producing no subword at all) are dropped, never
silently: their corpus line numbers and reasons land in a
``provenance.json`` next to the bundle manifest.  Row order is corpus
order minus drops.

Extraction is inference-only (no dropout, no grad), so output depends only
on the model weights and the configuration.  Batch size and device are
throughput knobs: they never change the produced values beyond float32
round-off, and are therefore excluded from the provenance echo.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from layersep import (
    DegenerateDataError,
    LabelRecord,
    ValidationError,
    make_default_manifest,
    parse_corpus,
    write_bundle,
)

DEFAULT_MODEL = "bert-base-uncased"
DEFAULT_MAX_SEQUENCE_LENGTH = 512
DEFAULT_BATCH_SIZE = 16
POOLINGS = ("mean_subwords", "first_subword")
LEVELS = ("token", "sentence")
PROVENANCE_NAME = "provenance.json"


@dataclass(frozen=True)
class ExtractionConfig:
    model_name: str = DEFAULT_MODEL
    max_sequence_length: int = DEFAULT_MAX_SEQUENCE_LENGTH
    pooling: str = "mean_subwords"
    device: str = "cpu"
    batch_size: int = DEFAULT_BATCH_SIZE
    include_special: bool = False

    def validate(self) -> None:
        if self.pooling not in POOLINGS:
            raise ValidationError(
                f"pooling must be one of {POOLINGS}, got {self.pooling!r}"
            )
        if self.max_sequence_length < 4:
            raise ValidationError(
                f"max_sequence_length must be at least 4, got {self.max_sequence_length}"
            )
        if self.batch_size < 1:
            raise ValidationError(f"batch_size must be positive, got {self.batch_size}")


@dataclass(frozen=True)
class DroppedSample:
    line: int
    reason: str


@dataclass(frozen=True)
class ExtractionResult:
    bundle_dir: Path
    kept: int
    num_layers: int
    dim: int
    dropped: tuple[DroppedSample, ...]
    parse_diagnostics: tuple[str, ...]


def masked_mean(rows: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Mean of the rows selected by a boolean mask.

    The pooling primitive for both levels: a single selected row is
    returned unchanged (mean of one element is exact), and an empty
    selection is an error rather than a NaN row.
    """
    chosen = rows[np.asarray(mask, dtype=bool)]
    if chosen.shape[0] == 0:
        raise ValidationError("cannot pool an empty selection of rows")
    return chosen.mean(axis=0)


def _diagnostic_line(diagnostic: str) -> int:
    head = diagnostic.split(":", 1)[0]
    return int(head.removeprefix("line "))


def sample_line_numbers(corpus: str | Path, parsed) -> list[int]:
    """Corpus line number of each parsed sample, in sample order.

    The parser skips blank lines silently and malformed lines with a
    line-numbered diagnostic; every other line yields exactly one sample,
    in file order.
    """
    failed = {_diagnostic_line(d) for d in parsed.diagnostics}
    lines = []
    for line_no, line in enumerate(
        Path(corpus).read_text(encoding="utf-8").splitlines(), start=1
    ):
        if line.strip() and line_no not in failed:
            lines.append(line_no)
    if len(lines) != len(parsed.samples):
        raise ValidationError(
            f"cannot map samples to corpus lines: {len(parsed.samples)} samples "
            f"but {len(lines)} surviving lines"
        )
    return lines


def _load_model(config: ExtractionConfig):
    import torch
    from transformers import AutoModel, AutoTokenizer
    from transformers.utils import logging as hf_logging

    hf_logging.disable_progress_bar()
    tokenizer = AutoTokenizer.from_pretrained(config.model_name)
    if not tokenizer.is_fast:
        raise ValidationError(
            f"tokenizer for {config.model_name!r} does not expose word alignment"
        )
    model = AutoModel.from_pretrained(config.model_name)
    model.eval()
    model.to(torch.device(config.device))
    return tokenizer, model


def _keep_or_drop(tokenizer, words: list[str], verb_index: int, config) -> str | None:
    """Reason to drop this sample, or None to keep it."""
    expected = len(tokenizer.tokenize(words[verb_index]))
    if expected == 0:
        return f"verb word {words[verb_index]!r} produces no subword tokens"
    solo = tokenizer(
        [words],
        is_split_into_words=True,
        truncation=True,
        max_length=config.max_sequence_length,
    )
    got = sum(1 for w in solo.word_ids(0) if w == verb_index)
    if got < expected:
        return (
            f"verb word {words[verb_index]!r} truncated at "
            f"max_sequence_length {config.max_sequence_length}"
        )
    return None


def _pool_batch(enc, hidden_layers, level, pooling, include_special, verb_indices):
    """Per-layer pooled rows for one encoded batch, as float32 arrays."""
    special = enc["special_tokens_mask"].cpu().numpy().astype(bool)
    attention = enc["attention_mask"].cpu().numpy().astype(bool)
    batch_rows = []
    for layer_states in hidden_layers:
        states = layer_states.cpu().numpy()
        rows = []
        for b in range(states.shape[0]):
            if level == "token":
                word_ids = enc.word_ids(b)
                mask = np.array(
                    [w == verb_indices[b] for w in word_ids] + [False] * (states.shape[1] - len(word_ids))
                )
                if pooling == "first_subword":
                    rows.append(states[b, int(np.argmax(mask))])
                else:
                    rows.append(masked_mean(states[b], mask))
            else:
                mask = attention[b] if include_special else attention[b] & ~special[b]
                rows.append(masked_mean(states[b], mask))
        batch_rows.append(np.stack(rows).astype(np.float32))
    return batch_rows


def extract(
    corpus: str | Path,
    level: str,
    out_dir: str | Path,
    config: ExtractionConfig | None = None,
) -> ExtractionResult:
    """Run the corpus through the model and write a bundle to ``out_dir``."""
    import torch

    config = config or ExtractionConfig()
    config.validate()
    if level not in LEVELS:
        raise ValidationError(f"level must be one of {LEVELS}, got {level!r}")

    corpus = Path(corpus)
    if not corpus.is_file():
        raise ValidationError(f"corpus file not found: {corpus}")
    parsed = parse_corpus(corpus)
    lines = sample_line_numbers(corpus, parsed)
    for sample in parsed.samples:
        if sample.split is None:
            raise ValidationError(
                "corpus rows must carry a split column (text, lemma, class, split)"
            )

    tokenizer, model = _load_model(config)

    kept_samples = []
    kept_lines = []
    kept_words = []
    kept_verb_index = []
    dropped: list[DroppedSample] = []
    for sample, line_no in zip(parsed.samples, lines):
        words = sample.clean_text.split()
        reason = _keep_or_drop(tokenizer, words, sample.verb_word_index, config)
        if reason is None:
            kept_samples.append(sample)
            kept_lines.append(line_no)
            kept_words.append(words)
            kept_verb_index.append(sample.verb_word_index)
        else:
            dropped.append(DroppedSample(line=line_no, reason=reason))
    if not kept_samples:
        raise DegenerateDataError("no samples survived extraction")

    device = torch.device(config.device)
    per_layer: list[list[np.ndarray]] = []
    with torch.no_grad():
        for start in range(0, len(kept_samples), config.batch_size):
            stop = start + config.batch_size
            enc = tokenizer(
                kept_words[start:stop],
                is_split_into_words=True,
                truncation=True,
                max_length=config.max_sequence_length,
                padding=True,
                return_special_tokens_mask=True,
                return_tensors="pt",
            )
            model_inputs = {
                k: v.to(device) for k, v in enc.items() if k != "special_tokens_mask"
            }
            hidden_layers = model(**model_inputs, output_hidden_states=True).hidden_states
            batch_rows = _pool_batch(
                enc,
                hidden_layers,
                level,
                config.pooling,
                config.include_special,
                kept_verb_index[start:stop],
            )
            if not per_layer:
                per_layer = [[] for _ in batch_rows]
            for layer, rows in zip(per_layer, batch_rows):
                layer.append(rows)

    matrices = [np.vstack(chunks) for chunks in per_layer]
    labels = [
        LabelRecord(verb_class=s.verb_class, lemma=s.lemma, split=s.split)
        for s in kept_samples
    ]
    manifest = make_default_manifest(
        level=level,
        num_layers=len(matrices),
        dim=matrices[0].shape[1],
        count=len(kept_samples),
        source_model=config.model_name,
    )
    bundle_dir = write_bundle(manifest, matrices, labels, out_dir)

    provenance = {
        "corpus": str(corpus),
        "level": level,
        "pooling": config.pooling,
        "max_sequence_length": config.max_sequence_length,
        "include_special": config.include_special,
        "kept": len(kept_samples),
        "parse_diagnostics": list(parsed.diagnostics),
        "dropped": [{"line": d.line, "reason": d.reason} for d in dropped],
    }
    (bundle_dir / PROVENANCE_NAME).write_text(
        json.dumps(provenance, indent=2) + "\n", encoding="utf-8"
    )

    return ExtractionResult(
        bundle_dir=bundle_dir,
        kept=len(kept_samples),
        num_layers=len(matrices),
        dim=matrices[0].shape[1],
        dropped=tuple(dropped),
        parse_diagnostics=tuple(parsed.diagnostics),
    )
