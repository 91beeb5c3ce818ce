"""Layer-wise separability analysis for transformer embeddings."""

__version__ = "0.1.0"

from .bundle import (
    BundleManifest,
    EmbeddingBundle,
    LabelRecord,
    make_default_manifest,
    read_bundle,
    slice_layer,
    validate_bundle,
    write_bundle,
)
from .cloud import CLASSES, LabeledPointCloud
from .errors import DegenerateDataError, LayersepError, ValidationError
from .gdv import GdvBreakdown, gdv, mean_inter_class_distance, mean_intra_class_distance, zscore_half
from .pipeline import AnalysisReport, AnalyzeConfig, run_analysis, write_report_files
from .probes import (
    LinearModel,
    ProbeHyperparams,
    Standardizer,
    apply_standardizer,
    evaluate,
    fit_standardizer,
    train_linear_svm,
    train_logistic,
)
from .stats import (
    CorrelationResult,
    NormalityResult,
    shapiro_wilk,
    spearman,
    spearman_p_value,
    student_t_sf,
)
from .synth import SynthLemma, SynthSpec, load_synth_spec, reference_synth_spec, synth_bundle
from .textprep import (
    CorpusSample,
    ParsedCorpus,
    clean_text,
    default_split_sets,
    load_lemma_inventory,
    locate_verb_word,
    match_verb_word,
    parse_corpus,
    split_by_lemma,
)

__all__ = [
    "AnalysisReport",
    "AnalyzeConfig",
    "BundleManifest",
    "CLASSES",
    "CorpusSample",
    "CorrelationResult",
    "DegenerateDataError",
    "EmbeddingBundle",
    "GdvBreakdown",
    "LabelRecord",
    "LabeledPointCloud",
    "LayersepError",
    "LinearModel",
    "NormalityResult",
    "ParsedCorpus",
    "ProbeHyperparams",
    "Standardizer",
    "SynthLemma",
    "SynthSpec",
    "ValidationError",
    "apply_standardizer",
    "clean_text",
    "default_split_sets",
    "evaluate",
    "fit_standardizer",
    "gdv",
    "load_lemma_inventory",
    "load_synth_spec",
    "locate_verb_word",
    "make_default_manifest",
    "match_verb_word",
    "mean_inter_class_distance",
    "mean_intra_class_distance",
    "parse_corpus",
    "read_bundle",
    "reference_synth_spec",
    "run_analysis",
    "shapiro_wilk",
    "slice_layer",
    "spearman",
    "spearman_p_value",
    "split_by_lemma",
    "student_t_sf",
    "synth_bundle",
    "train_linear_svm",
    "train_logistic",
    "validate_bundle",
    "write_bundle",
    "write_report_files",
    "zscore_half",
]
