"""Seeded synthetic embedding bundles with controllable class separation.

Each layer k draws every point from an isotropic unit Gaussian in R^dim and
then shifts it along the first axis by +/- separations[k] / 2 depending on
its class.  The separation list therefore directly controls how discernible
the two classes are per layer, which makes argmax/argmin behaviour of the
downstream analysis easy to pin down in tests.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .bundle import LEVELS, LabelRecord, make_default_manifest, write_bundle
from .cloud import CLASSES, SPLITS
from .errors import ValidationError
from .textprep import load_lemma_inventory


@dataclass(frozen=True)
class SynthLemma:
    lemma: str
    verb_class: str
    split: str
    count: int


@dataclass
class SynthSpec:
    level: str
    dim: int
    separations: list[float]
    lemmas: list[SynthLemma]
    source_model: str = "synthetic"

    def validate(self) -> None:
        if self.level not in LEVELS:
            raise ValidationError(f"level must be one of {LEVELS}, got {self.level!r}")
        if self.dim < 1:
            raise ValidationError(f"dim must be positive, got {self.dim}")
        if not self.separations:
            raise ValidationError("need at least one layer separation")
        if any(s < 0 for s in self.separations):
            raise ValidationError("separations must be non-negative")
        if not self.lemmas:
            raise ValidationError("need at least one lemma")
        seen: set[str] = set()
        for entry in self.lemmas:
            if entry.verb_class not in CLASSES:
                raise ValidationError(f"unknown class {entry.verb_class!r}")
            if entry.split not in SPLITS:
                raise ValidationError(f"unknown split {entry.split!r}")
            if entry.count < 1:
                raise ValidationError(f"lemma {entry.lemma!r} has count {entry.count}")
            if entry.lemma in seen:
                raise ValidationError(f"duplicate lemma {entry.lemma!r}")
            seen.add(entry.lemma)
        present = {e.verb_class for e in self.lemmas}
        if len(present) < 2:
            raise ValidationError("both classes must be represented")

    @property
    def total_count(self) -> int:
        return sum(e.count for e in self.lemmas)


def load_synth_spec(path: str | Path) -> SynthSpec:
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"synthesis spec is not valid JSON: {exc}") from exc
    try:
        spec = SynthSpec(
            level=raw["level"],
            dim=int(raw["dim"]),
            separations=[float(s) for s in raw["separations"]],
            lemmas=[
                SynthLemma(
                    lemma=e["lemma"],
                    verb_class=e["class"],
                    split=e["split"],
                    count=int(e["count"]),
                )
                for e in raw["lemmas"]
            ],
            source_model=raw.get("source_model", "synthetic"),
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed synthesis spec: {exc!r}") from exc
    spec.validate()
    return spec


def reference_synth_spec(
    level: str = "token",
    dim: int = 768,
    separations: list[float] | None = None,
) -> SynthSpec:
    """A spec mirroring the bundled lemma inventory (42 lemmas, 5135 rows)."""
    inventory = load_lemma_inventory()
    return SynthSpec(
        level=level,
        dim=dim,
        separations=list(separations) if separations is not None else [1.0],
        lemmas=[
            SynthLemma(e.lemma, e.verb_class, e.split, e.reference_count)
            for e in inventory
        ],
    )


def synth_bundle(spec: SynthSpec, seed: int, out_dir: str | Path) -> Path:
    """Generate a bundle deterministically from (spec, seed) and write it out."""
    spec.validate()
    labels = [
        LabelRecord(verb_class=e.verb_class, lemma=e.lemma, split=e.split)
        for e in spec.lemmas
        for _ in range(e.count)
    ]
    n = len(labels)
    # +1 along axis 0 for the first class, -1 for the second.
    signs = np.array([1.0 if r.verb_class == CLASSES[0] else -1.0 for r in labels])

    rng = np.random.default_rng(seed)
    layers = []
    for separation in spec.separations:
        points = rng.standard_normal((n, spec.dim))
        points[:, 0] += signs * (separation / 2.0)
        layers.append(points.astype(np.float32))

    manifest = make_default_manifest(
        level=spec.level,
        num_layers=len(spec.separations),
        dim=spec.dim,
        count=n,
        source_model=spec.source_model,
    )
    return write_bundle(manifest, layers, labels, out_dir)
