"""Linear probes trained from scratch: logistic regression and a linear SVM.

Both probes are deliberately simple full-batch gradient methods so that a
training run is a pure function of (data, hyperparameters): no minibatch
shuffling, no data-dependent stopping.  Labels are signed, y in {+1, -1};
ties on the decision boundary resolve to +1.

Every data reduction inside the trainers goes through a strict-halving tree
sum rather than ``np.sum``.  The tree makes training independent of numpy's
internal pairwise-summation blocking, and it keeps a mean exactly invariant
when every point is duplicated in place: the first halving level adds each
point to its own copy (an exact power-of-two scaling), after which the tree
over the doubled values reproduces the original one scaled by 2.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit

from .errors import DegenerateDataError

DEFAULT_LOGISTIC_EPOCHS = 500
DEFAULT_SVM_EPOCHS = 50

#: Logistic step schedule: step(t) = BASE / (1 + t / DECAY) at epoch t (0-based).
LOGISTIC_BASE_STEP = 0.5
LOGISTIC_STEP_DECAY = 100.0


@dataclass(frozen=True)
class ProbeHyperparams:
    """Training knobs shared by both probes.

    ``reg_lambda=None`` resolves to 1/N at fit time.  ``seed`` is recorded
    for provenance; the full-batch trainers are deterministic and ignore it.
    """

    reg_lambda: float | None = None
    epochs: int = 0
    seed: int = 0

    def resolve_lambda(self, n: int) -> float:
        return 1.0 / n if self.reg_lambda is None else float(self.reg_lambda)


@dataclass(frozen=True)
class LinearModel:
    weights: np.ndarray
    bias: float
    kind: str  # "logistic" | "svm"
    hyperparams: ProbeHyperparams


@dataclass(frozen=True)
class Standardizer:
    """Per-feature affine map fitted on training data only."""

    means: np.ndarray
    scales: np.ndarray  # 1/std, with 0 where the training std was 0


def fit_standardizer(train_points: np.ndarray) -> Standardizer:
    x = np.asarray(train_points, dtype=np.float64)
    if x.ndim != 2 or x.shape[0] == 0:
        raise ValueError("standardizer needs a non-empty 2-D training matrix")
    means = x.mean(axis=0)
    stds = x.std(axis=0)
    scales = np.where(stds > 0.0, 1.0 / np.where(stds > 0.0, stds, 1.0), 0.0)
    return Standardizer(means=means, scales=scales)


def apply_standardizer(standardizer: Standardizer, points: np.ndarray) -> np.ndarray:
    """(x - mean) / std per feature; features constant in training map to 0."""
    x = np.asarray(points, dtype=np.float64)
    return (x - standardizer.means) * standardizer.scales


def _tree_sum(values: np.ndarray) -> np.ndarray | float:
    """Sum along axis 0 by strict halving (zero-padded at odd lengths)."""
    v = values
    while v.shape[0] > 1:
        if v.shape[0] % 2:
            v = np.concatenate([v, np.zeros_like(v[:1])], axis=0)
        v = v[0::2] + v[1::2]
    return v[0]


def _check_binary(y: np.ndarray) -> np.ndarray:
    y = np.asarray(y, dtype=np.float64)
    values = np.unique(y)
    if not np.all(np.isin(values, (-1.0, 1.0))):
        raise ValueError(f"labels must be +/-1, got values {values}")
    if values.size < 2:
        raise DegenerateDataError("training data contains a single class")
    return y


def logistic_objective(
    weights: np.ndarray,
    bias: float,
    points: np.ndarray,
    y_signed: np.ndarray,
    reg_lambda: float,
) -> tuple[float, np.ndarray, float]:
    """Mean log-loss plus (lambda/2)||w||^2, with its exact gradient.

    The bias is unregularized.  Returns (loss, grad_w, grad_b).
    """
    n = points.shape[0]
    z = points @ weights + bias
    margins = y_signed * z
    loss = float(_tree_sum(np.logaddexp(0.0, -margins))) / n + 0.5 * reg_lambda * float(
        weights @ weights
    )
    # d/dz log(1 + e^{-yz}) = -y * sigmoid(-yz)
    coef = -y_signed * expit(-margins)
    grad_w = _tree_sum(coef[:, None] * points) / n + reg_lambda * weights
    grad_b = float(_tree_sum(coef)) / n
    return loss, grad_w, grad_b


def train_logistic(
    points: np.ndarray,
    y_signed: np.ndarray,
    hyperparams: ProbeHyperparams | None = None,
) -> LinearModel:
    """Full-batch gradient descent on the regularized logistic loss.

    Starts from w = 0, b = 0 and runs a fixed epoch budget with the
    harmonically decaying step schedule; the result is a deterministic
    function of the inputs.
    """
    hp = hyperparams or ProbeHyperparams(epochs=DEFAULT_LOGISTIC_EPOCHS)
    epochs = hp.epochs or DEFAULT_LOGISTIC_EPOCHS
    x = np.asarray(points, dtype=np.float64)
    y = _check_binary(y_signed)
    n, d = x.shape
    lam = hp.resolve_lambda(n)
    w = np.zeros(d)
    b = 0.0
    for t in range(epochs):
        step = LOGISTIC_BASE_STEP / (1.0 + t / LOGISTIC_STEP_DECAY)
        _, grad_w, grad_b = logistic_objective(w, b, x, y, lam)
        w = w - step * grad_w
        b = b - step * grad_b
    return LinearModel(weights=w, bias=b, kind="logistic", hyperparams=hp)


def hinge_objective(
    weights: np.ndarray,
    bias: float,
    points: np.ndarray,
    y_signed: np.ndarray,
    reg_lambda: float,
) -> float:
    """Mean hinge loss plus (lambda/2)||w||^2 (bias unregularized)."""
    margins = y_signed * (points @ weights + bias)
    hinge = float(_tree_sum(np.maximum(0.0, 1.0 - margins))) / points.shape[0]
    return hinge + 0.5 * reg_lambda * float(weights @ weights)


def train_linear_svm(
    points: np.ndarray,
    y_signed: np.ndarray,
    hyperparams: ProbeHyperparams | None = None,
) -> LinearModel:
    """Primal sub-gradient descent on the regularized hinge loss.

    Full-batch variant of the classic 1/(lambda t) schedule: at step t the
    sub-gradient of the mean hinge over margin violators is combined with
    the lambda w ridge term.  Deterministic by construction, so duplicated
    datasets and repeated runs give identical models.
    """
    hp = hyperparams or ProbeHyperparams(epochs=DEFAULT_SVM_EPOCHS)
    epochs = hp.epochs or DEFAULT_SVM_EPOCHS
    x = np.asarray(points, dtype=np.float64)
    y = _check_binary(y_signed)
    n, d = x.shape
    lam = hp.resolve_lambda(n)
    w = np.zeros(d)
    b = 0.0
    for t in range(1, epochs + 1):
        step = 1.0 / (lam * t)
        margins = y * (x @ w + b)
        coef = np.where(margins < 1.0, y, 0.0)
        grad_w = lam * w - _tree_sum(coef[:, None] * x) / n
        grad_b = -float(_tree_sum(coef)) / n
        w = w - step * grad_w
        b = b - step * grad_b
    return LinearModel(weights=w, bias=b, kind="svm", hyperparams=hp)


def decision_function(model: LinearModel, points: np.ndarray) -> np.ndarray:
    return np.asarray(points, dtype=np.float64) @ model.weights + model.bias


def predict(model: LinearModel, points: np.ndarray) -> np.ndarray:
    """Signed predictions; a score of exactly 0 predicts +1."""
    scores = decision_function(model, points)
    return np.where(scores >= 0.0, 1.0, -1.0)


def evaluate(model: LinearModel, points: np.ndarray, y_signed: np.ndarray) -> float:
    """Plain accuracy of the signed predictions."""
    y = np.asarray(y_signed, dtype=np.float64)
    return float(np.mean(predict(model, points) == y))
