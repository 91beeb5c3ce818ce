"""Generalized Discrimination Value: z-scaled mean intra/inter class distances.

The point cloud is first scaled per dimension to half unit variance,
s = (x - mu) / (2 sigma); the GDV is then the gap between the mean
within-class and mean between-class Euclidean distances, normalized by
sqrt(D) so values are comparable across embedding widths:

    GDV = ( <mean intra> - <mean inter> ) / sqrt(D)

Negative values mean classes are more separated than they are spread.

Distance sums are computed over a fixed block partition of the rows; each
block pair contributes partial sums keyed by (class, class), and partials
are combined in a fixed order.  Results are therefore identical bit-for-bit
whatever the worker count, and exact zeros for coincident points are
preserved (no Gram-matrix shortcut).
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .cloud import LabeledPointCloud
from .errors import DegenerateDataError

#: Rows per block in the pairwise-distance sweep.  512 x 512 float64 tiles
#: stay comfortably inside L2 while keeping scheduling overhead negligible.
DEFAULT_BLOCK_SIZE = 512


@dataclass(frozen=True)
class GdvBreakdown:
    """Full decomposition of one GDV evaluation."""

    gdv: float
    mean_intra: float
    mean_inter: float
    per_class_intra: np.ndarray  # shape (L,)
    pairwise_inter: np.ndarray  # shape (L, L), upper triangle, NaN elsewhere
    scaled_points: np.ndarray  # shape (N, D), float64


def zscore_half(points: np.ndarray) -> np.ndarray:
    """Scale each dimension to mean 0 and standard deviation 1/2.

    Population statistics (ddof=0); dimensions with zero variance map to 0.
    """
    x = np.asarray(points, dtype=np.float64)
    if x.ndim != 2:
        raise ValueError(f"points must be 2-D, got shape {x.shape}")
    if x.shape[0] < 2:
        raise DegenerateDataError("need at least 2 points to scale")
    sigma = x.std(axis=0)
    zero = sigma == 0.0
    safe = np.where(zero, 1.0, sigma)
    out = 0.5 * (x - x.mean(axis=0)) / safe
    if zero.any():
        out[:, zero] = 0.0
    return out


def _block_starts(n: int, block_size: int) -> list[int]:
    return list(range(0, n, block_size))


def _pair_distance_sums(
    points: np.ndarray,
    labels: np.ndarray,
    class_count: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> np.ndarray:
    """Sum of pairwise Euclidean distances per unordered class pair.

    Returns an (L, L) array S where S[l, m] for l <= m is the distance sum
    over all unordered point pairs whose class labels are {l, m}.  Entries
    below the diagonal are zero.
    """
    n = points.shape[0]
    starts = _block_starts(n, block_size)
    tasks = [
        (i, j)
        for bi, i in enumerate(starts)
        for j in starts[bi:]
    ]
    width = class_count * class_count

    def one_block(task: tuple[int, int]) -> np.ndarray:
        i, j = task
        a = points[i : i + block_size]
        la = labels[i : i + block_size]
        if i == j:
            d = cdist(a, a)
            iu, ju = np.triu_indices(a.shape[0], k=1)
            vals = d[iu, ju]
            ca, cb = la[iu], la[ju]
        else:
            b = points[j : j + block_size]
            lb = labels[j : j + block_size]
            d = cdist(a, b)
            vals = d.ravel()
            ca = np.repeat(la, b.shape[0])
            cb = np.tile(lb, a.shape[0])
        code = np.minimum(ca, cb) * class_count + np.maximum(ca, cb)
        return np.bincount(code, weights=vals, minlength=width)

    if workers > 1 and len(tasks) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(one_block, tasks))
    else:
        partials = [one_block(t) for t in tasks]

    total = np.zeros(width)
    for part in partials:  # fixed task order => reproducible rounding
        total += part
    return total.reshape(class_count, class_count)


def mean_intra_class_distance(
    points: np.ndarray,
    labels: np.ndarray,
    class_of_interest: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> float:
    """Mean Euclidean distance over unordered pairs within one class."""
    labels = np.asarray(labels)
    members = np.asarray(points, dtype=np.float64)[labels == class_of_interest]
    k = members.shape[0]
    if k < 2:
        raise DegenerateDataError(
            f"class {class_of_interest} has {k} member(s); need at least 2"
        )
    sums = _pair_distance_sums(
        members, np.zeros(k, dtype=np.int64), 1, workers=workers, block_size=block_size
    )
    return float(sums[0, 0]) / (k * (k - 1) / 2)


def mean_inter_class_distance(
    points: np.ndarray,
    labels: np.ndarray,
    class_a: int,
    class_b: int,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> float:
    """Mean Euclidean distance over ordered cross pairs of two distinct classes."""
    if class_a == class_b:
        raise ValueError("inter-class distance needs two distinct classes")
    labels = np.asarray(labels)
    pts = np.asarray(points, dtype=np.float64)
    mask = (labels == class_a) | (labels == class_b)
    sub = pts[mask]
    sub_labels = (labels[mask] == class_b).astype(np.int64)
    n_a = int(np.count_nonzero(sub_labels == 0))
    n_b = int(np.count_nonzero(sub_labels == 1))
    if n_a == 0 or n_b == 0:
        raise DegenerateDataError("both classes must be non-empty")
    sums = _pair_distance_sums(sub, sub_labels, 2, workers=workers, block_size=block_size)
    return float(sums[0, 1]) / (n_a * n_b)


def gdv(
    cloud: LabeledPointCloud,
    workers: int = 1,
    block_size: int = DEFAULT_BLOCK_SIZE,
) -> GdvBreakdown:
    """Compute the GDV of a labeled cloud, with its full decomposition.

    Requires N >= 4, at least two classes, and every class populated with at
    least two members; violations raise :class:`DegenerateDataError`.
    """
    n, d = cloud.points.shape
    if n < 4:
        raise DegenerateDataError(f"need at least 4 points, got {n}")
    sizes = cloud.class_sizes()
    populated = np.flatnonzero(sizes)
    if populated.size < 2:
        raise DegenerateDataError("need at least two populated classes")
    small = [int(c) for c in populated if sizes[c] < 2]
    if small:
        raise DegenerateDataError(
            f"classes {small} have fewer than 2 members; GDV is undefined"
        )

    # Re-pack labels onto the populated classes so empty ids cannot skew the
    # class-pair averages.
    remap = {int(c): i for i, c in enumerate(populated)}
    labels = np.array([remap[int(c)] for c in cloud.labels], dtype=np.int64)
    n_classes = populated.size
    counts = sizes[populated].astype(np.float64)

    scaled = zscore_half(cloud.points)
    sums = _pair_distance_sums(
        scaled, labels, n_classes, workers=workers, block_size=block_size
    )

    per_class = np.array(
        [sums[l, l] / (counts[l] * (counts[l] - 1) / 2.0) for l in range(n_classes)]
    )
    pairwise = np.full((n_classes, n_classes), np.nan)
    inter_values = []
    for l in range(n_classes):
        for m in range(l + 1, n_classes):
            pairwise[l, m] = sums[l, m] / (counts[l] * counts[m])
            inter_values.append(pairwise[l, m])

    mean_intra = float(per_class.mean())
    mean_inter = float(np.mean(inter_values))
    value = (mean_intra - mean_inter) / np.sqrt(d)
    return GdvBreakdown(
        gdv=float(value),
        mean_intra=mean_intra,
        mean_inter=mean_inter,
        per_class_intra=per_class,
        pairwise_inter=pairwise,
        scaled_points=scaled,
    )
