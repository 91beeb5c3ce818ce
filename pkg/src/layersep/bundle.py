"""On-disk embedding bundles: one raw float32 matrix per layer plus metadata.

A bundle directory contains:

* ``manifest.json`` — layout metadata (see :class:`BundleManifest`),
* one raw little-endian float32 file per layer, row-major, ``count * dim``
  values each,
* a header-less labels TSV with one ``class<TAB>lemma<TAB>split`` row per
  embedded item, aligned with matrix rows.

Reading validates everything eagerly — manifest fields, file sizes, label
values, lemma/class consistency — and reports the first problem found with
a distinct message, so a truncated or doctored bundle never reaches the
analysis code.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .cloud import CLASSES, SPLITS, LabeledPointCloud, class_id
from .errors import ValidationError

BUNDLE_VERSION = 1
MANIFEST_NAME = "manifest.json"
LEVELS = ("token", "sentence")

_MANIFEST_FIELDS = (
    "version",
    "level",
    "num_layers",
    "dim",
    "count",
    "dtype",
    "order",
    "layer_files",
    "labels_file",
    "source_model",
)


@dataclass
class BundleManifest:
    version: int
    level: str
    num_layers: int
    dim: int
    count: int
    layer_files: list[str]
    labels_file: str
    source_model: str
    dtype: str = "f32le"
    order: str = "row-major"

    def to_json_dict(self) -> dict:
        return {name: getattr(self, name) for name in _MANIFEST_FIELDS}

    def validate(self) -> None:
        if self.version != BUNDLE_VERSION:
            raise ValidationError(f"unknown bundle version: {self.version!r}")
        if self.level not in LEVELS:
            raise ValidationError(
                f"level must be one of {LEVELS}, got {self.level!r}"
            )
        for name in ("num_layers", "dim", "count"):
            value = getattr(self, name)
            if not isinstance(value, int) or value < 1:
                raise ValidationError(f"{name} must be a positive integer, got {value!r}")
        if self.dtype != "f32le":
            raise ValidationError(f"unsupported dtype: {self.dtype!r}")
        if self.order != "row-major":
            raise ValidationError(f"unsupported element order: {self.order!r}")
        if len(self.layer_files) != self.num_layers:
            raise ValidationError(
                f"manifest lists {len(self.layer_files)} layer files "
                f"but num_layers is {self.num_layers}"
            )
        if len(set(self.layer_files)) != len(self.layer_files):
            raise ValidationError("duplicate layer file names in manifest")
        if not self.labels_file:
            raise ValidationError("labels_file must be set")


@dataclass(frozen=True)
class LabelRecord:
    verb_class: str
    lemma: str
    split: str


@dataclass
class EmbeddingBundle:
    manifest: BundleManifest
    layers: list[np.ndarray]  # num_layers arrays of shape (count, dim), float32
    labels: list[LabelRecord]

    def slice_layer(self, layer_index: int) -> LabeledPointCloud:
        return slice_layer(self, layer_index)


def make_default_manifest(
    level: str,
    num_layers: int,
    dim: int,
    count: int,
    source_model: str,
) -> BundleManifest:
    """Manifest with the conventional file naming (layer_00.f32 ... labels.tsv)."""
    return BundleManifest(
        version=BUNDLE_VERSION,
        level=level,
        num_layers=num_layers,
        dim=dim,
        count=count,
        layer_files=[f"layer_{i:02d}.f32" for i in range(num_layers)],
        labels_file="labels.tsv",
        source_model=source_model,
    )


def _validate_labels(labels: list[LabelRecord], count: int) -> None:
    if len(labels) != count:
        raise ValidationError(
            f"labels row count {len(labels)} does not match manifest count {count}"
        )
    lemma_class: dict[str, str] = {}
    for idx, rec in enumerate(labels):
        if rec.verb_class not in CLASSES:
            raise ValidationError(
                f"labels row {idx}: unknown class {rec.verb_class!r}"
            )
        if rec.split not in SPLITS:
            raise ValidationError(f"labels row {idx}: unknown split {rec.split!r}")
        if not rec.lemma:
            raise ValidationError(f"labels row {idx}: empty lemma")
        seen = lemma_class.setdefault(rec.lemma, rec.verb_class)
        if seen != rec.verb_class:
            raise ValidationError(
                f"lemma {rec.lemma!r} appears under both classes "
                f"({seen!r} and {rec.verb_class!r})"
            )


def write_bundle(
    manifest: BundleManifest,
    layers: list[np.ndarray],
    labels: list[LabelRecord],
    bundle_dir: str | Path,
) -> Path:
    """Write a bundle directory; all consistency checks run before anything is written."""
    manifest.validate()
    if len(layers) != manifest.num_layers:
        raise ValidationError(
            f"got {len(layers)} layer matrices for num_layers={manifest.num_layers}"
        )
    expected = (manifest.count, manifest.dim)
    for k, layer in enumerate(layers):
        if layer.shape != expected:
            raise ValidationError(
                f"layer {k} has shape {tuple(layer.shape)}, expected {expected}"
            )
    _validate_labels(labels, manifest.count)

    out = Path(bundle_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / MANIFEST_NAME).write_text(
        json.dumps(manifest.to_json_dict(), indent=2) + "\n", encoding="utf-8"
    )
    for name, layer in zip(manifest.layer_files, layers):
        data = np.ascontiguousarray(layer, dtype="<f4")
        (out / name).write_bytes(data.tobytes())
    lines = [f"{r.verb_class}\t{r.lemma}\t{r.split}" for r in labels]
    (out / manifest.labels_file).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return out


def _parse_manifest(path: Path) -> BundleManifest:
    try:
        raw = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ValidationError(f"manifest is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ValidationError("manifest must be a JSON object")
    missing = [f for f in _MANIFEST_FIELDS if f not in raw]
    if missing:
        raise ValidationError(f"manifest missing fields: {', '.join(missing)}")
    unknown = [f for f in raw if f not in _MANIFEST_FIELDS]
    if unknown:
        raise ValidationError(f"manifest has unknown fields: {', '.join(unknown)}")
    if not isinstance(raw["layer_files"], list) or not all(
        isinstance(s, str) for s in raw["layer_files"]
    ):
        raise ValidationError("layer_files must be a list of strings")
    for name in ("level", "dtype", "order", "labels_file", "source_model"):
        if not isinstance(raw[name], str):
            raise ValidationError(f"{name} must be a string")
    manifest = BundleManifest(**raw)
    manifest.validate()
    return manifest


def read_bundle(bundle_dir: str | Path) -> EmbeddingBundle:
    """Load and fully validate a bundle directory."""
    root = Path(bundle_dir)
    manifest_path = root / MANIFEST_NAME
    if not manifest_path.is_file():
        raise ValidationError(f"missing {MANIFEST_NAME} in {root}")
    manifest = _parse_manifest(manifest_path)

    row_bytes = manifest.dim * 4
    expected_bytes = manifest.count * row_bytes
    layers: list[np.ndarray] = []
    for name in manifest.layer_files:
        path = root / name
        if not path.is_file():
            raise ValidationError(f"missing layer file: {name}")
        blob = path.read_bytes()
        if len(blob) != expected_bytes:
            raise ValidationError(
                f"layer file {name} has {len(blob)} bytes, "
                f"expected {expected_bytes} ({manifest.count} x {manifest.dim} float32)"
            )
        arr = np.frombuffer(blob, dtype="<f4").reshape(manifest.count, manifest.dim)
        layers.append(arr)  # frombuffer keeps the matrix read-only, on purpose

    labels_path = root / manifest.labels_file
    if not labels_path.is_file():
        raise ValidationError(f"missing labels file: {manifest.labels_file}")
    labels: list[LabelRecord] = []
    for idx, line in enumerate(labels_path.read_text(encoding="utf-8").splitlines()):
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValidationError(
                f"labels row {idx}: expected 3 tab-separated fields, got {len(parts)}"
            )
        labels.append(LabelRecord(verb_class=parts[0], lemma=parts[1], split=parts[2]))
    _validate_labels(labels, manifest.count)

    return EmbeddingBundle(manifest=manifest, layers=layers, labels=labels)


def validate_bundle(bundle_dir: str | Path) -> BundleManifest:
    """Read-and-discard validation; returns the manifest on success."""
    return read_bundle(bundle_dir).manifest


def slice_layer(bundle: EmbeddingBundle, layer_index: int) -> LabeledPointCloud:
    """View one layer as a labeled point cloud (no copy of the matrix)."""
    if not 0 <= layer_index < bundle.manifest.num_layers:
        raise IndexError(
            f"layer index {layer_index} out of range "
            f"[0, {bundle.manifest.num_layers})"
        )
    labels = np.array([class_id(r.verb_class) for r in bundle.labels], dtype=np.int64)
    train_mask = np.array([r.split == "train" for r in bundle.labels])
    return LabeledPointCloud(
        points=bundle.layers[layer_index],
        labels=labels,
        class_count=len(CLASSES),
        lemmas=tuple(r.lemma for r in bundle.labels),
        train_mask=train_mask,
    )
