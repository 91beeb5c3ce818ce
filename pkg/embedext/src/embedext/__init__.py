"""Per-layer transformer hidden-state extraction into embedding bundles."""

__version__ = "0.1.0"

from .extract import (
    DEFAULT_MODEL,
    LEVELS,
    POOLINGS,
    PROVENANCE_NAME,
    DroppedSample,
    ExtractionConfig,
    ExtractionResult,
    extract,
    masked_mean,
    sample_line_numbers,
)

__all__ = [
    "DEFAULT_MODEL",
    "LEVELS",
    "POOLINGS",
    "PROVENANCE_NAME",
    "DroppedSample",
    "ExtractionConfig",
    "ExtractionResult",
    "extract",
    "masked_mean",
    "sample_line_numbers",
    "__version__",
]
