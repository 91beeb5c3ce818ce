"""Command-line entry point for hidden-state extraction."""

from __future__ import annotations

import argparse
import os
import sys

from layersep import DegenerateDataError, ValidationError

from . import __version__
from .extract import (
    DEFAULT_BATCH_SIZE,
    DEFAULT_MAX_SEQUENCE_LENGTH,
    DEFAULT_MODEL,
    LEVELS,
    POOLINGS,
    ExtractionConfig,
    extract,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="extract",
        description="Extract per-layer transformer hidden states into an embedding bundle",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--corpus", required=True, help="tab-separated corpus file")
    parser.add_argument("--level", required=True, choices=LEVELS)
    parser.add_argument("--out", required=True, help="bundle directory to create")
    parser.add_argument("--model", default=DEFAULT_MODEL, help="model name or local path")
    parser.add_argument("--pooling", default="mean_subwords", choices=POOLINGS)
    parser.add_argument("--batch-size", type=int, default=DEFAULT_BATCH_SIZE)
    parser.add_argument(
        "--max-seq-len", type=int, default=DEFAULT_MAX_SEQUENCE_LENGTH,
        help="sequences longer than this are truncated; samples whose verb "
        "is cut off are dropped with a diagnostic",
    )
    parser.add_argument("--device", default="cpu")
    parser.add_argument(
        "--include-special", action="store_true",
        help="include the special marker tokens in the sentence-level mean",
    )
    return parser


def main(argv: list[str] | None = None) -> int:
    os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")
    args = build_parser().parse_args(argv)
    config = ExtractionConfig(
        model_name=args.model,
        max_sequence_length=args.max_seq_len,
        pooling=args.pooling,
        device=args.device,
        batch_size=args.batch_size,
        include_special=args.include_special,
    )
    try:
        result = extract(args.corpus, args.level, args.out, config)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"degenerate data: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return 4

    for diagnostic in result.parse_diagnostics:
        print(f"skipped {diagnostic}", file=sys.stderr)
    for drop in result.dropped:
        print(f"dropped line {drop.line}: {drop.reason}", file=sys.stderr)
    print(
        f"wrote {result.bundle_dir} ({result.kept} rows, {result.num_layers} layers, "
        f"dim {result.dim}, {len(result.dropped)} dropped)"
    )
    return 0


if __name__ == "__main__":
    sys.exit(main())
