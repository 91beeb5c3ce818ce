"""Labeled point clouds: the common currency between bundles, probes and GDV."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

#: Binary verb-class vocabulary, in canonical order.  Integer class ids used
#: throughout the package are indices into this tuple.
CLASSES: tuple[str, str] = ("phrasal", "prepositional")

#: The class encoded as +1 by the linear probes (the other maps to -1).
POSITIVE_CLASS = "phrasal"

SPLITS: tuple[str, str] = ("train", "test")


def class_id(name: str) -> int:
    """Map a class name to its integer id; raises ValueError on unknown names."""
    try:
        return CLASSES.index(name)
    except ValueError:
        raise ValueError(f"unknown class name: {name!r}") from None


@dataclass
class LabeledPointCloud:
    """N points in R^D with integer class labels and optional per-point metadata.

    ``points`` has shape (N, D); ``labels`` has shape (N,) with values in
    ``range(class_count)``.  ``lemmas`` and ``train_mask``, when present, are
    aligned with the rows of ``points``.
    """

    points: np.ndarray
    labels: np.ndarray
    class_count: int
    lemmas: tuple[str, ...] | None = None
    train_mask: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.points.ndim != 2:
            raise ValueError(f"points must be 2-D, got shape {self.points.shape}")
        if self.labels.shape != (self.points.shape[0],):
            raise ValueError(
                f"labels shape {self.labels.shape} does not match "
                f"{self.points.shape[0]} points"
            )
        if self.class_count < 1:
            raise ValueError("class_count must be positive")
        if self.labels.size and (
            self.labels.min() < 0 or self.labels.max() >= self.class_count
        ):
            raise ValueError("labels out of range for class_count")

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def class_sizes(self) -> np.ndarray:
        """Number of members per class id, shape (class_count,)."""
        return np.bincount(self.labels, minlength=self.class_count)

    def subset(self, mask: np.ndarray) -> "LabeledPointCloud":
        """Row-select a new cloud; class ids are preserved, not re-packed."""
        mask = np.asarray(mask)
        lem = None
        if self.lemmas is not None:
            keep = np.flatnonzero(mask) if mask.dtype == bool else mask
            lem = tuple(self.lemmas[i] for i in keep)
        return LabeledPointCloud(
            points=self.points[mask],
            labels=self.labels[mask],
            class_count=self.class_count,
            lemmas=lem,
            train_mask=self.train_mask[mask] if self.train_mask is not None else None,
        )
