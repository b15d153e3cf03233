"""Aggregation of score tables into a final ranking.

Four strategies: rank by a single score, a linear combination over min-max
normalized features, reciprocal-rank Voting, and a positive-unlabeled
two-step classifier seeded by ComboBasic (spy technique plus logistic
regression).
"""

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DataError
from .scores import ScoreTable, sorted_items
from .scoring.frequency import score_combobasic

__all__ = [
    "FeatureMatrix",
    "PuConfig",
    "LogisticModel",
    "build_feature_matrix",
    "rank_by_score",
    "linear_combination",
    "voting",
    "train_logreg",
    "pu_atr",
]


@dataclass
class FeatureMatrix:
    candidates: list            # canonical strings, ascending
    features: list              # method ids, in table order
    values: np.ndarray          # shape (len(candidates), len(features))

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.shape != (len(self.candidates), len(self.features)):
            raise ConfigError("feature matrix shape does not match its labels")
        if np.isnan(self.values).any():
            raise DataError("feature matrix contains NaN")


def build_feature_matrix(tables):
    """Stack score tables into a matrix; all tables must cover the same
    candidates."""
    if not tables:
        raise ConfigError("no feature tables given")
    canonicals = sorted(tables[0].scores)
    key_set = set(canonicals)
    for table in tables[1:]:
        if set(table.scores) != key_set:
            raise ConfigError(
                f"feature {table.method!r} scores a different candidate set"
            )
    values = np.array(
        [[table.scores[c] for table in tables] for c in canonicals],
        dtype=np.float64,
    )
    return FeatureMatrix(canonicals, [t.method for t in tables], values)


def rank_by_score(table):
    """Candidates by descending score; ties broken by ascending canonical."""
    return [c for c, _ in sorted_items(table)]


def _minmax_columns(values):
    lo = values.min(axis=0)
    hi = values.max(axis=0)
    span = hi - lo
    span[span == 0.0] = 1.0     # constant columns normalize to all zeros
    return (values - lo) / span


def linear_combination(matrix, weights):
    """Weighted sum over min-max normalized feature columns."""
    if len(weights) != len(matrix.features):
        raise ConfigError(
            f"expected {len(matrix.features)} weights, got {len(weights)}"
        )
    combined = _minmax_columns(matrix.values) @ np.asarray(weights, dtype=np.float64)
    scores = dict(zip(matrix.candidates, combined.tolist()))
    return ScoreTable("linear_combination", scores, {"weights": list(weights)})


def _competition_ranks(column):
    """1-based ranks by descending value; equal values share the best rank,
    so the ranking depends only on the ordering of the feature."""
    order = np.argsort(-column, kind="stable")
    ranks = np.empty(len(column), dtype=np.int64)
    rank = 0
    prev = None
    for pos, idx in enumerate(order, start=1):
        value = column[idx]
        if value != prev:
            rank = pos
            prev = value
        ranks[idx] = rank
    return ranks


def voting(matrix):
    """Sum of reciprocal per-feature ranks."""
    totals = np.zeros(len(matrix.candidates), dtype=np.float64)
    for j in range(len(matrix.features)):
        totals += 1.0 / _competition_ranks(matrix.values[:, j])
    scores = dict(zip(matrix.candidates, totals.tolist()))
    return ScoreTable("voting", scores, {"features": list(matrix.features)})


# ---------------------------------------------------------------------------
# Logistic regression (full-batch gradient descent)
# ---------------------------------------------------------------------------

@dataclass
class LogisticModel:
    weights: np.ndarray
    bias: float
    loss_history: list

    def predict_proba(self, X):
        return _sigmoid(np.asarray(X, dtype=np.float64) @ self.weights + self.bias)


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def train_logreg(X, y, learning_rate=0.1, l2=1e-4, epochs=500):
    """L2-regularized logistic regression from zero initialization.

    The bias is unregularized.  ``loss_history`` holds the objective at
    every epoch including the initial point (epochs + 1 entries).
    """
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    classes = np.unique(y)
    if len(classes) < 2:
        raise DataError("logistic regression needs examples of both classes")

    n, d = X.shape
    w = np.zeros(d)
    b = 0.0

    def objective(w, b):
        z = X @ w + b
        # mean of log(1 + e^z) - y*z, computed stably
        loss = float(np.mean(np.logaddexp(0.0, z) - y * z))
        return loss + 0.5 * l2 * float(w @ w)

    history = [objective(w, b)]
    for _ in range(epochs):
        p = _sigmoid(X @ w + b)
        err = p - y
        grad_w = X.T @ err / n + l2 * w
        grad_b = float(err.mean())
        w = w - learning_rate * grad_w
        b = b - learning_rate * grad_b
        history.append(objective(w, b))
    return LogisticModel(w, b, history)


# ---------------------------------------------------------------------------
# PU-ATR
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class PuConfig:
    seed_count: int = 100
    spy_fraction: float = 0.15
    neg_threshold: float = 0.05
    seed_alpha: float = 0.75
    seed_beta: float = 0.1
    rng_seed: int = 42
    learning_rate: float = 0.1
    l2: float = 1e-4
    epochs: int = 500

    def __post_init__(self):
        if not 50 <= self.seed_count <= 200:
            raise ConfigError("seed_count must be in [50, 200]")
        if not 0.0 < self.spy_fraction < 1.0:
            raise ConfigError("spy_fraction must be in (0, 1)")
        if not 0.0 < self.neg_threshold < 1.0:
            raise ConfigError("neg_threshold must be in (0, 1)")


def pu_atr(matrix, cset, cfg=None):
    """Two-step positive-unlabeled ranking.

    Seeds come from ComboBasic; a spy run picks a probability cutoff under
    which unlabeled candidates count as reliable negatives; the final
    classifier (seeds vs. reliable negatives) scores every candidate.
    """
    cfg = cfg or PuConfig()
    n = len(matrix.candidates)
    if cfg.seed_count > n:
        raise DataError(
            f"seed_count {cfg.seed_count} exceeds candidate count {n}"
        )

    combo = score_combobasic(cset, cfg.seed_alpha, cfg.seed_beta)
    in_matrix = set(matrix.candidates)
    ordered = [c for c in rank_by_score(combo) if c in in_matrix]
    seeds = set(ordered[: cfg.seed_count])

    index = {c: i for i, c in enumerate(matrix.candidates)}
    seed_idx = np.array(sorted(index[c] for c in seeds), dtype=np.int64)
    other_idx = np.array(
        [i for i, c in enumerate(matrix.candidates) if c not in seeds],
        dtype=np.int64,
    )

    X = _minmax_columns(matrix.values)
    rng = np.random.default_rng(cfg.rng_seed)
    n_spies = max(1, round(cfg.spy_fraction * len(seed_idx)))
    n_spies = min(n_spies, len(seed_idx) - 1)
    spy_idx = np.sort(rng.choice(seed_idx, size=n_spies, replace=False))
    spy_set = set(spy_idx.tolist())
    pos_idx = np.array([i for i in seed_idx if i not in spy_set], dtype=np.int64)
    unl_idx = np.concatenate([other_idx, spy_idx])

    X_step1 = np.vstack([X[pos_idx], X[unl_idx]])
    y_step1 = np.concatenate([np.ones(len(pos_idx)), np.zeros(len(unl_idx))])
    model1 = train_logreg(X_step1, y_step1, cfg.learning_rate, cfg.l2, cfg.epochs)

    probs1 = model1.predict_proba(X)
    theta = float(np.quantile(probs1[spy_idx], cfg.neg_threshold))
    negatives = other_idx[probs1[other_idx] < theta]
    if len(negatives) == 0:
        warnings.warn("pu_atr: no reliable negatives below the spy cutoff; "
                      "falling back to the bottom 10% of unlabeled candidates")
        k = max(1, round(0.1 * len(other_idx)))
        order = np.argsort(probs1[other_idx], kind="stable")
        negatives = other_idx[order[:k]]

    X_step2 = np.vstack([X[seed_idx], X[negatives]])
    y_step2 = np.concatenate([np.ones(len(seed_idx)), np.zeros(len(negatives))])
    model2 = train_logreg(X_step2, y_step2, cfg.learning_rate, cfg.l2, cfg.epochs)

    final = model2.predict_proba(X)
    scores = dict(zip(matrix.candidates, final.tolist()))
    return ScoreTable("pu_atr", scores, {
        "seed_count": cfg.seed_count,
        "spy_fraction": cfg.spy_fraction,
        "neg_threshold": cfg.neg_threshold,
        "seed_alpha": cfg.seed_alpha,
        "seed_beta": cfg.seed_beta,
        "rng_seed": cfg.rng_seed,
    })
