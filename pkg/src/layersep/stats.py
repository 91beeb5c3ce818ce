"""Rank statistics and normality testing, implemented from first principles.

Everything here is written against closed-form definitions so that results
are reproducible bit-for-bit and do not drift with third-party library
versions: the Student-t tail is evaluated through a regularized incomplete
beta function (continued fraction), and the normality test is the classic
Shapiro-Wilk statistic with Royston's polynomial approximations for the
coefficients and the p-value transform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from statistics import NormalDist

import numpy as np

from .errors import DegenerateDataError, ValidationError

#: Permutation count for the Monte-Carlo p-value route.
MC_PERMUTATIONS = 100_000

_STANDARD_NORMAL = NormalDist()


# ---------------------------------------------------------------------------
# Regularized incomplete beta and the Student-t tail
# ---------------------------------------------------------------------------

def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Evaluate the continued fraction for I_x(a, b) by the modified Lentz method."""
    tiny = 1e-300
    eps = 3e-14
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, 201):
        m2 = 2 * m
        # even step
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        # odd step
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def regularized_incomplete_beta(a: float, b: float, x: float) -> float:
    """I_x(a, b) for a, b > 0 and x in [0, 1]."""
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    ln_bt = (
        math.lgamma(a + b)
        - math.lgamma(a)
        - math.lgamma(b)
        + a * math.log(x)
        + b * math.log1p(-x)
    )
    bt = math.exp(ln_bt)
    # The continued fraction converges fast only on one side of the mean;
    # use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) for the other.
    if x < (a + 1.0) / (a + b + 2.0):
        return bt * _beta_continued_fraction(a, b, x) / a
    return 1.0 - bt * _beta_continued_fraction(b, a, 1.0 - x) / b


def student_t_sf(t: float, df: int) -> float:
    """Two-sided tail probability P(|T| >= |t|) for T ~ Student-t with df degrees.

    Uses the exact identity P(|T| >= t) = I_{df/(df+t^2)}(df/2, 1/2).
    """
    if df < 1:
        raise ValueError(f"df must be >= 1, got {df}")
    t = float(t)
    if t == 0.0:
        return 1.0
    x = df / (df + t * t)
    return regularized_incomplete_beta(df / 2.0, 0.5, x)


# ---------------------------------------------------------------------------
# Spearman rank correlation
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CorrelationResult:
    r_s: float
    p_value: float
    n: int
    method: str


def rank_with_ties(values: np.ndarray) -> np.ndarray:
    """1-based ranks; tied values all receive the average of their rank range."""
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise ValueError("rank_with_ties expects a 1-D array")
    n = x.size
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ranks = np.empty(n, dtype=np.float64)
    start = 0
    while start < n:
        stop = start
        while stop + 1 < n and xs[stop + 1] == xs[start]:
            stop += 1
        # ranks start+1 .. stop+1 average to (start + stop) / 2 + 1
        ranks[order[start : stop + 1]] = (start + stop) / 2.0 + 1.0
        start = stop + 1
    return ranks


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    ax = x - x.mean()
    ay = y - y.mean()
    denom = math.sqrt(float(ax @ ax) * float(ay @ ay))
    if denom == 0.0:
        raise DegenerateDataError("constant series has no defined correlation")
    # Clamp: rounding can push perfectly monotone data a few ulp past +/-1.
    return max(-1.0, min(1.0, float(ax @ ay) / denom))


def spearman_p_value(r_s: float, n: int) -> float:
    """Two-sided p for an observed rank correlation under the t approximation.

    t = r * sqrt((n - 2) / (1 - r^2)) is referred to a Student-t distribution
    with n - 2 degrees of freedom; |r| = 1 is the degenerate limit p = 0.
    """
    if n < 4:
        raise ValidationError(f"need n >= 4 for a p-value, got n={n}")
    r = max(-1.0, min(1.0, float(r_s)))
    if abs(r) == 1.0:
        return 0.0
    t = r * math.sqrt((n - 2) / (1.0 - r * r))
    return student_t_sf(t, n - 2)


def spearman(
    xs: np.ndarray,
    ys: np.ndarray,
    method: str = "t_approx",
    permutations: int = MC_PERMUTATIONS,
    seed: int = 0,
) -> CorrelationResult:
    """Spearman rank correlation with a two-sided p-value.

    ``method`` selects the p-value route: ``"t_approx"`` (default) or
    ``"monte_carlo"``, which permutes one rank series ``permutations`` times
    with a seeded generator and reports (1 + #{|r_perm| >= |r|}) / (M + 1).
    """
    x = np.asarray(xs, dtype=np.float64)
    y = np.asarray(ys, dtype=np.float64)
    if x.shape != y.shape or x.ndim != 1:
        raise ValidationError("series must be 1-D and of equal length")
    n = x.size
    if n < 4:
        raise ValidationError(f"need at least 4 observations, got {n}")
    rx = rank_with_ties(x)
    ry = rank_with_ties(y)
    r = _pearson(rx, ry)
    if method == "t_approx":
        p = spearman_p_value(r, n)
    elif method == "monte_carlo":
        rng = np.random.default_rng(seed)
        ax = rx - rx.mean()
        ay = ry - ry.mean()
        denom = math.sqrt(float(ax @ ax) * float(ay @ ay))
        hits = 0
        # Chunked so the permutation table never exceeds ~8M floats.
        chunk = 5000
        done = 0
        threshold = abs(r) - 1e-12  # tolerate rounding in tied-rank permutations
        while done < permutations:
            m = min(chunk, permutations - done)
            perm = rng.permuted(np.broadcast_to(ay, (m, n)), axis=1)
            r_perm = (perm @ ax) / denom
            hits += int(np.count_nonzero(np.abs(r_perm) >= threshold))
            done += m
        p = (hits + 1) / (permutations + 1)
    else:
        raise ValidationError(f"unknown p-value method: {method!r}")
    return CorrelationResult(r_s=r, p_value=p, n=n, method=method)


# ---------------------------------------------------------------------------
# Shapiro-Wilk normality test (Royston's algorithm)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NormalityResult:
    statistic: float
    p_value: float
    n: int

    @property
    def normal_at_05(self) -> bool:
        return self.p_value > 0.05

def _shapiro_wilk_coefficients(n: int) -> np.ndarray:
    """Royston's approximation to the optimal linear-estimator weights a_i."""
    m = np.array(
        [_STANDARD_NORMAL.inv_cdf((i - 0.375) / (n + 0.25)) for i in range(1, n + 1)]
    )
    mm = float(m @ m)
    c = m / math.sqrt(mm)
    u = 1.0 / math.sqrt(n)
    p1 = [-2.706056, 4.434685, -2.071190, -0.147981, 0.221157]
    p2 = [-3.582633, 5.682633, -1.752461, -0.293762, 0.042981]

    def poly(coef: list[float], x: float) -> float:
        acc = 0.0
        for k in coef:
            acc = acc * x + k
        return acc

    a = np.empty(n)
    if n <= 5:
        a_n = c[-1] + poly(p1, u) * u
        phi = (mm - 2.0 * m[-1] ** 2) / (1.0 - 2.0 * a_n**2)
        a[1:-1] = m[1:-1] / math.sqrt(phi)
        a[-1] = a_n
        a[0] = -a_n
    else:
        a_n = c[-1] + poly(p1, u) * u
        a_n1 = c[-2] + poly(p2, u) * u
        phi = (mm - 2.0 * m[-1] ** 2 - 2.0 * m[-2] ** 2) / (
            1.0 - 2.0 * a_n**2 - 2.0 * a_n1**2
        )
        a[2:-2] = m[2:-2] / math.sqrt(phi)
        a[-1] = a_n
        a[-2] = a_n1
        a[0] = -a_n
        a[1] = -a_n1
    return a


def shapiro_wilk(values: np.ndarray) -> NormalityResult:
    """Shapiro-Wilk W and its p-value for 4 <= n <= 5000 observations.

    W = (sum_i a_i x_(i))^2 / sum_i (x_i - mean)^2 with Royston's weights;
    the p-value transforms ln(1 - W) (or a doubly-logged variant for n < 12)
    to an approximately standard normal deviate.
    """
    x = np.sort(np.asarray(values, dtype=np.float64))
    n = x.size
    if n < 4 or n > 5000:
        raise ValidationError(f"normality test supports 4 <= n <= 5000, got {n}")
    if x[0] == x[-1]:
        raise DegenerateDataError("all observations identical")

    a = _shapiro_wilk_coefficients(n)
    centered = x - x.mean()
    w = float(a @ x) ** 2 / float(centered @ centered)
    w = min(w, 1.0)

    if n <= 11:
        g = -2.273 + 0.459 * n
        if g - math.log1p(-w) <= 0.0:
            return NormalityResult(statistic=w, p_value=0.0, n=n)
        wt = -math.log(g - math.log1p(-w))
        mu = 0.5440 - 0.39978 * n + 0.025054 * n**2 - 0.0006714 * n**3
        sigma = math.exp(1.3822 - 0.77857 * n + 0.062767 * n**2 - 0.0020322 * n**3)
    else:
        ln_n = math.log(n)
        wt = math.log1p(-w)
        mu = 0.0038915 * ln_n**3 - 0.083751 * ln_n**2 - 0.31082 * ln_n - 1.5861
        sigma = math.exp(0.0030302 * ln_n**2 - 0.082676 * ln_n - 0.4803)

    z = (wt - mu) / sigma
    p = 0.5 * math.erfc(z / math.sqrt(2.0))
    return NormalityResult(statistic=w, p_value=min(max(p, 0.0), 1.0), n=n)
