"""End-to-end analysis: per-layer probes and GDV, series statistics, reports.

The report writers are deliberately hand-rolled: dictionaries keep a fixed
field order and every real number is rendered with ``%.6g``, so a run with
the same inputs and seed produces byte-identical ``report.json`` and
``report.csv`` whatever the worker count.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .bundle import EmbeddingBundle, read_bundle, slice_layer
from .cloud import CLASSES, POSITIVE_CLASS, LabeledPointCloud
from .errors import DegenerateDataError, ValidationError
from .gdv import gdv
from .probes import (
    DEFAULT_LOGISTIC_EPOCHS,
    DEFAULT_SVM_EPOCHS,
    ProbeHyperparams,
    apply_standardizer,
    evaluate,
    fit_standardizer,
    train_linear_svm,
    train_logistic,
)
from .stats import CorrelationResult, NormalityResult, shapiro_wilk, spearman

GDV_SPLITS = ("all", "train", "test")
P_METHODS = ("t", "mc")

CSV_HEADER = "level,layer,lr_accuracy,svm_accuracy,gdv"


@dataclass
class AnalyzeConfig:
    token_bundle: str | None = None
    sentence_bundle: str | None = None
    lr_epochs: int = DEFAULT_LOGISTIC_EPOCHS
    svm_epochs: int = DEFAULT_SVM_EPOCHS
    reg_lambda: float | None = None
    seed: int = 0
    gdv_split: str = "all"
    p_method: str = "t"
    workers: int = 1

    def validate(self) -> None:
        if self.token_bundle is None and self.sentence_bundle is None:
            raise ValidationError("at least one bundle must be provided")
        if self.lr_epochs < 1 or self.svm_epochs < 1:
            raise ValidationError("epoch counts must be positive")
        if self.reg_lambda is not None and self.reg_lambda < 0:
            raise ValidationError("reg_lambda must be non-negative")
        if self.gdv_split not in GDV_SPLITS:
            raise ValidationError(
                f"gdv_split must be one of {GDV_SPLITS}, got {self.gdv_split!r}"
            )
        if self.p_method not in P_METHODS:
            raise ValidationError(
                f"p_method must be one of {P_METHODS}, got {self.p_method!r}"
            )
        if self.workers < 1:
            raise ValidationError("workers must be positive")

    def echo(self) -> dict:
        """Everything that affects report content (worker count does not)."""
        return {
            "token_bundle": self.token_bundle,
            "sentence_bundle": self.sentence_bundle,
            "lr_epochs": self.lr_epochs,
            "svm_epochs": self.svm_epochs,
            "reg_lambda": self.reg_lambda,
            "seed": self.seed,
            "gdv_split": self.gdv_split,
            "p_method": self.p_method,
        }


@dataclass(frozen=True)
class LayerMetrics:
    level: str
    layer: int
    lr_accuracy: float
    svm_accuracy: float
    gdv: float


@dataclass
class LevelReport:
    layers: list[LayerMetrics]
    # Series name -> result, or a message describing why it degenerated.
    normality: dict[str, NormalityResult | str] = field(default_factory=dict)
    correlations: dict[str, CorrelationResult | str] = field(default_factory=dict)


@dataclass
class AnalysisReport:
    tool_version: str
    config_echo: dict
    levels: dict[str, LevelReport]


def _signed_labels(cloud: LabeledPointCloud) -> np.ndarray:
    positive = CLASSES.index(POSITIVE_CLASS)
    return np.where(cloud.labels == positive, 1.0, -1.0)


def _check_level(level: str, cloud: LabeledPointCloud) -> None:
    if cloud.train_mask is None or cloud.lemmas is None:
        raise ValidationError(f"{level} bundle lacks split or lemma metadata")
    train = cloud.train_mask
    if not train.any():
        raise DegenerateDataError(f"{level} bundle has no training rows")
    if train.all():
        raise DegenerateDataError(f"{level} bundle has no test rows")
    lemmas = np.array(cloud.lemmas)
    shared = sorted(set(lemmas[train]) & set(lemmas[~train]))
    if shared:
        raise ValidationError(
            f"{level} bundle has lemmas in both splits: {', '.join(shared)}"
        )


def _layer_metrics(
    level: str,
    layer: int,
    cloud: LabeledPointCloud,
    config: AnalyzeConfig,
) -> LayerMetrics:
    train = cloud.train_mask
    test = ~train
    x_train = cloud.points[train]
    x_test = cloud.points[test]
    y = _signed_labels(cloud)

    standardizer = fit_standardizer(x_train)
    x_train = apply_standardizer(standardizer, x_train)
    x_test = apply_standardizer(standardizer, x_test)

    lr = train_logistic(
        x_train,
        y[train],
        ProbeHyperparams(config.reg_lambda, config.lr_epochs, config.seed),
    )
    svm = train_linear_svm(
        x_train,
        y[train],
        ProbeHyperparams(config.reg_lambda, config.svm_epochs, config.seed),
    )
    lr_accuracy = evaluate(lr, x_test, y[test])
    svm_accuracy = evaluate(svm, x_test, y[test])

    if config.gdv_split == "train":
        gdv_cloud = cloud.subset(train)
    elif config.gdv_split == "test":
        gdv_cloud = cloud.subset(test)
    else:
        gdv_cloud = cloud
    value = gdv(gdv_cloud).gdv

    return LayerMetrics(
        level=level,
        layer=layer,
        lr_accuracy=lr_accuracy,
        svm_accuracy=svm_accuracy,
        gdv=value,
    )


def _series_statistics(report: LevelReport, config: AnalyzeConfig) -> None:
    series = {
        "lr_accuracy": np.array([m.lr_accuracy for m in report.layers]),
        "svm_accuracy": np.array([m.svm_accuracy for m in report.layers]),
        "gdv": np.array([m.gdv for m in report.layers]),
    }
    for name, values in series.items():
        try:
            report.normality[name] = shapiro_wilk(values)
        except (ValidationError, DegenerateDataError) as exc:
            report.normality[name] = str(exc)
    method = "t_approx" if config.p_method == "t" else "monte_carlo"
    for name in ("lr_accuracy", "svm_accuracy"):
        key = ("lr" if name == "lr_accuracy" else "svm") + "_vs_gdv"
        try:
            report.correlations[key] = spearman(
                series[name], series["gdv"], method=method, seed=config.seed
            )
        except (ValidationError, DegenerateDataError) as exc:
            report.correlations[key] = str(exc)


def run_analysis(config: AnalyzeConfig) -> AnalysisReport:
    """Load bundles, probe every layer, and assemble the full report."""
    config.validate()

    bundles: dict[str, EmbeddingBundle] = {}
    for level, path in (("token", config.token_bundle), ("sentence", config.sentence_bundle)):
        if path is None:
            continue
        bundle = read_bundle(path)
        if bundle.manifest.level != level:
            raise ValidationError(
                f"bundle {path} has level {bundle.manifest.level!r}, expected {level!r}"
            )
        bundles[level] = bundle

    if len(bundles) == 2:
        token, sentence = bundles["token"], bundles["sentence"]
        if token.manifest.count != sentence.manifest.count:
            raise ValidationError(
                f"bundle counts differ: token {token.manifest.count}, "
                f"sentence {sentence.manifest.count}"
            )
        if token.labels != sentence.labels:
            raise ValidationError("token and sentence bundles disagree on labels")

    jobs: list[tuple[str, int, LabeledPointCloud]] = []
    for level in ("token", "sentence"):
        if level not in bundles:
            continue
        bundle = bundles[level]
        _check_level(level, slice_layer(bundle, 0))
        for layer in range(bundle.manifest.num_layers):
            jobs.append((level, layer, slice_layer(bundle, layer)))

    def run_job(job: tuple[str, int, LabeledPointCloud]) -> LayerMetrics:
        level, layer, cloud = job
        return _layer_metrics(level, layer, cloud, config)

    if config.workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            metrics = list(pool.map(run_job, jobs))
    else:
        metrics = [run_job(job) for job in jobs]

    levels: dict[str, LevelReport] = {}
    for level in ("token", "sentence"):
        rows = [m for m in metrics if m.level == level]
        if not rows:
            continue
        level_report = LevelReport(layers=rows)
        _series_statistics(level_report, config)
        levels[level] = level_report

    return AnalysisReport(
        tool_version=__version__,
        config_echo=config.echo(),
        levels=levels,
    )


# ---------------------------------------------------------------------------
# Report rendering
# ---------------------------------------------------------------------------

def format_real(x: float) -> str:
    """Canonical 6-significant-digit rendering used by every report format."""
    x = float(x)
    if not math.isfinite(x):
        raise ValueError(f"refusing to serialize non-finite value {x}")
    return format(x, ".6g")


def _normality_dict(value: NormalityResult | str) -> dict:
    if isinstance(value, str):
        return {"degenerate": value}
    return {
        "statistic": value.statistic,
        "p_value": value.p_value,
        "n": value.n,
        "normal_at_05": value.normal_at_05,
    }


def _correlation_dict(value: CorrelationResult | str) -> dict:
    if isinstance(value, str):
        return {"degenerate": value}
    return {
        "r_s": value.r_s,
        "p_value": value.p_value,
        "n": value.n,
        "method": value.method,
    }


def report_to_dict(report: AnalysisReport) -> dict:
    """Plain nested dict mirroring the JSON layout (insertion order is the contract)."""
    levels = {}
    for level, lv in report.levels.items():
        levels[level] = {
            "layers": [
                {
                    "layer": m.layer,
                    "lr_accuracy": m.lr_accuracy,
                    "svm_accuracy": m.svm_accuracy,
                    "gdv": m.gdv,
                }
                for m in lv.layers
            ],
            "normality": {k: _normality_dict(v) for k, v in lv.normality.items()},
            "correlations": {k: _correlation_dict(v) for k, v in lv.correlations.items()},
        }
    return {
        "tool_version": report.tool_version,
        "config": report.config_echo,
        "levels": levels,
    }


def _render_json(value, indent: int) -> str:
    pad = "  " * indent
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [
            f'{pad}  "{key}": {_render_json(v, indent + 1)}' for key, v in value.items()
        ]
        return "{\n" + ",\n".join(items) + f"\n{pad}}}"
    if isinstance(value, list):
        if not value:
            return "[]"
        items = [f"{pad}  {_render_json(v, indent + 1)}" for v in value]
        return "[\n" + ",\n".join(items) + f"\n{pad}]"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format_real(value)
    if isinstance(value, str):
        return json.dumps(value)
    if value is None:
        return "null"
    raise TypeError(f"cannot serialize {type(value).__name__}")


def render_report_json(report: AnalysisReport) -> str:
    return _render_json(report_to_dict(report), 0) + "\n"


def render_report_csv(report: AnalysisReport) -> str:
    lines = [CSV_HEADER]
    for level in report.levels.values():
        for m in level.layers:
            lines.append(
                f"{m.level},{m.layer},{format_real(m.lr_accuracy)},"
                f"{format_real(m.svm_accuracy)},{format_real(m.gdv)}"
            )
    return "\n".join(lines) + "\n"


def write_report_files(
    report: AnalysisReport,
    out_dir: str | Path,
    formats: tuple[str, ...] = ("json", "csv"),
) -> list[Path]:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for fmt in formats:
        if fmt == "json":
            path = out / "report.json"
            path.write_text(render_report_json(report), encoding="utf-8")
        elif fmt == "csv":
            path = out / "report.csv"
            path.write_text(render_report_csv(report), encoding="utf-8")
        else:
            raise ValidationError(f"unknown report format: {fmt!r}")
        written.append(path)
    return written
