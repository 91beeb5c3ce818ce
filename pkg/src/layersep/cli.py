"""Command-line interface.

Exit codes: 0 success, 2 validation failure, 3 degenerate data, 4 I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .bundle import read_bundle, slice_layer, validate_bundle
from .cloud import CLASSES
from .errors import DegenerateDataError, ValidationError
from .figures import emit_figures
from .gdv import gdv
from .pipeline import (
    GDV_SPLITS,
    P_METHODS,
    AnalyzeConfig,
    _render_json,
    run_analysis,
    write_report_files,
)
from .probes import DEFAULT_LOGISTIC_EPOCHS, DEFAULT_SVM_EPOCHS
from .synth import load_synth_spec, synth_bundle


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="layersep",
        description="Layer-wise separability analysis of embedding bundles",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    analyze = sub.add_parser("analyze", help="probe every layer and emit reports")
    analyze.add_argument("--token-bundle", help="token-level bundle directory")
    analyze.add_argument("--sentence-bundle", help="sentence-level bundle directory")
    analyze.add_argument("--out", required=True, help="output directory for reports")
    analyze.add_argument(
        "--format",
        default="json,csv",
        help="comma-separated report formats (json, csv)",
    )
    analyze.add_argument("--figures", action="store_true", help="also emit SVG charts")
    analyze.add_argument("--lr-epochs", type=int, default=DEFAULT_LOGISTIC_EPOCHS)
    analyze.add_argument("--svm-epochs", type=int, default=DEFAULT_SVM_EPOCHS)
    analyze.add_argument(
        "--lambda",
        dest="reg_lambda",
        type=float,
        default=None,
        help="ridge strength for both probes (default: 1/N)",
    )
    analyze.add_argument("--seed", type=int, default=0)
    analyze.add_argument("--gdv-split", choices=GDV_SPLITS, default="all")
    analyze.add_argument(
        "--p-method",
        choices=P_METHODS,
        default="t",
        help="correlation p-value route: t approximation or Monte-Carlo",
    )
    analyze.add_argument("--workers", type=int, default=1)

    gdv_cmd = sub.add_parser("gdv", help="print the GDV breakdown of one layer")
    gdv_cmd.add_argument("--bundle", required=True)
    gdv_cmd.add_argument("--layer", type=int, required=True)
    gdv_cmd.add_argument("--split", choices=GDV_SPLITS, default="all")
    gdv_cmd.add_argument("--workers", type=int, default=1)

    synth = sub.add_parser("synth", help="generate a synthetic bundle")
    synth.add_argument("--spec", required=True, help="JSON synthesis spec")
    synth.add_argument("--seed", type=int, default=0)
    synth.add_argument("--out", required=True, help="bundle directory to create")

    validate = sub.add_parser("validate", help="check a bundle directory")
    validate.add_argument("--bundle", required=True)

    return parser


def _cmd_analyze(args: argparse.Namespace) -> int:
    formats = tuple(f.strip() for f in args.format.split(",") if f.strip())
    for fmt in formats:
        if fmt not in ("json", "csv"):
            raise ValidationError(f"unknown report format: {fmt!r}")
    if not formats:
        raise ValidationError("no report formats requested")
    config = AnalyzeConfig(
        token_bundle=args.token_bundle,
        sentence_bundle=args.sentence_bundle,
        lr_epochs=args.lr_epochs,
        svm_epochs=args.svm_epochs,
        reg_lambda=args.reg_lambda,
        seed=args.seed,
        gdv_split=args.gdv_split,
        p_method=args.p_method,
        workers=args.workers,
    )
    report = run_analysis(config)
    written = write_report_files(report, args.out, formats)
    if args.figures:
        written += emit_figures(report, f"{args.out}/")
    for path in written:
        print(f"wrote {path}")
    for level, lv in report.levels.items():
        for key, value in lv.correlations.items():
            if isinstance(value, str):
                print(f"{level} {key}: degenerate ({value})")
            else:
                print(
                    f"{level} {key}: r_s={value.r_s:.4f} p={value.p_value:.4f} "
                    f"n={value.n} [{value.method}]"
                )
    return 0


def _cmd_gdv(args: argparse.Namespace) -> int:
    bundle = read_bundle(args.bundle)
    cloud = slice_layer(bundle, args.layer)
    if args.split != "all":
        want_train = args.split == "train"
        cloud = cloud.subset(cloud.train_mask == want_train)
    breakdown = gdv(cloud, workers=args.workers)
    payload = {
        "layer": args.layer,
        "split": args.split,
        "gdv": breakdown.gdv,
        "mean_intra": breakdown.mean_intra,
        "mean_inter": breakdown.mean_inter,
        "per_class_intra": {
            name: float(v) for name, v in zip(CLASSES, breakdown.per_class_intra)
        },
    }
    print(_render_json(payload, 0))
    return 0


def _cmd_synth(args: argparse.Namespace) -> int:
    spec = load_synth_spec(args.spec)
    out = synth_bundle(spec, args.seed, args.out)
    print(f"wrote bundle to {out} ({spec.total_count} rows, {len(spec.separations)} layers)")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    manifest = validate_bundle(args.bundle)
    print(
        f"ok: level={manifest.level} layers={manifest.num_layers} "
        f"dim={manifest.dim} count={manifest.count} source_model={manifest.source_model}"
    )
    return 0


_COMMANDS = {
    "analyze": _cmd_analyze,
    "gdv": _cmd_gdv,
    "synth": _cmd_synth,
    "validate": _cmd_validate,
}


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except IndexError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DegenerateDataError as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"error: I/O failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
