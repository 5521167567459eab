"""Balanced sampling, k-fold cross-validation, metrics, and the
feature-group ablation driver."""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .classifier import Hyper, predict, train
from .corpus import Sentence
from .errors import DataError
from .features import apply_mask
from .rules import RuleConfig, apply_rules


@dataclass(frozen=True)
class Metrics:
    precision: float
    recall: float
    accuracy: float
    f1: float


@dataclass
class Instance:
    """One (sentence, trigger) evaluation unit: feature vector, label and,
    when rules are in play, the originating sentence and trigger start."""
    features: np.ndarray
    label: bool
    sentence: Sentence | None = None
    trigger_start: int | None = None


@dataclass
class EvalConfig:
    k: int = 5
    seed: int = 42
    mask: frozenset[int] = frozenset()
    rules_enabled: bool = False
    rule_cfg: RuleConfig = field(default_factory=RuleConfig)
    hyper: Hyper = field(default_factory=Hyper)


@dataclass
class FoldResult:
    fold: int
    n_test: int
    metrics: Metrics


def compute_metrics(y_true, y_pred) -> Metrics:
    y_true = [bool(v) for v in y_true]
    y_pred = [bool(v) for v in y_pred]
    if not y_true or len(y_true) != len(y_pred):
        raise DataError("y_true and y_pred must be non-empty and aligned")
    tp = sum(1 for t, p in zip(y_true, y_pred) if t and p)
    fp = sum(1 for t, p in zip(y_true, y_pred) if not t and p)
    fn = sum(1 for t, p in zip(y_true, y_pred) if t and not p)
    tn = sum(1 for t, p in zip(y_true, y_pred) if not t and not p)
    precision = tp / (tp + fp) if tp + fp > 0 else 0.0
    recall = tp / (tp + fn) if tp + fn > 0 else 0.0
    accuracy = (tp + tn) / len(y_true)
    f1 = (2 * precision * recall / (precision + recall)
          if precision + recall > 0 else 0.0)
    return Metrics(precision=precision, recall=recall, accuracy=accuracy,
                   f1=f1)


def label_distribution(counts: dict[str, int],
                       total: int | None = None) -> dict[str, float]:
    """count/total per row; callers round to 4 decimals for reports.

    ``total`` defaults to the sum of counts but can be given explicitly
    when rows are a subset of a larger candidate pool.
    """
    if total is None:
        total = sum(counts.values())
    if total <= 0:
        raise DataError("zero total")
    return {name: c / total for name, c in counts.items()}


def balance_sample(instances: list[Instance], seed: int) -> list[Instance]:
    """All minority-class instances plus an equal-size uniform sample
    (without replacement) of the majority class, in original order."""
    pos = [i for i, inst in enumerate(instances) if inst.label]
    neg = [i for i, inst in enumerate(instances) if not inst.label]
    if not pos or not neg:
        raise DataError("both classes required for balanced sampling")
    minority, majority = (pos, neg) if len(pos) <= len(neg) else (neg, pos)
    rng = np.random.default_rng(seed)
    chosen = rng.choice(len(majority), size=len(minority), replace=False)
    keep = set(minority) | {majority[i] for i in chosen}
    return [instances[i] for i in sorted(keep)]


def kfold_split(n: int, k: int, seed: int) -> list[list[int]]:
    """Seeded shuffle of 0..n-1 then contiguous chunks, sizes within 1."""
    if not 2 <= k <= n:
        raise DataError(f"k={k} out of range for n={n}")
    perm = np.random.default_rng(seed).permutation(n)
    base, rem = divmod(n, k)
    folds = []
    pos = 0
    for f in range(k):
        size = base + (1 if f < rem else 0)
        folds.append([int(i) for i in perm[pos:pos + size]])
        pos += size
    return folds


def _mean_metrics(folds: list[FoldResult]) -> Metrics:
    return Metrics(
        precision=float(np.mean([f.metrics.precision for f in folds])),
        recall=float(np.mean([f.metrics.recall for f in folds])),
        accuracy=float(np.mean([f.metrics.accuracy for f in folds])),
        f1=float(np.mean([f.metrics.f1 for f in folds])),
    )


def cross_validate(instances: list[Instance], cfg: EvalConfig,
                   folds: list[list[int]] | None = None,
                   ) -> tuple[Metrics, list[FoldResult]]:
    """Per fold: mask features, fit scaler + train on the rest, predict the
    held-out fold, optionally apply rules; report the unweighted fold mean."""
    n = len(instances)
    if folds is None:
        folds = kfold_split(n, cfg.k, cfg.seed)
    X = np.array([apply_mask(inst.features, cfg.mask) for inst in instances])
    y = np.array([inst.label for inst in instances])

    results = []
    for f, test_idx in enumerate(folds):
        test = np.array(test_idx, dtype=int)
        train_mask = np.ones(n, dtype=bool)
        train_mask[test] = False
        model = train(X[train_mask], y[train_mask], cfg.hyper)
        preds = [predict(model, X[i]).label for i in test]
        if cfg.rules_enabled:
            pairs = []
            for i in test:
                inst = instances[i]
                if inst.sentence is None or inst.trigger_start is None:
                    raise DataError(
                        "rules enabled but instance lacks sentence context")
                pairs.append((inst.sentence, inst.trigger_start))
            preds = apply_rules(preds, pairs, cfg.rule_cfg)
        metrics = compute_metrics([bool(y[i]) for i in test], preds)
        results.append(FoldResult(fold=f, n_test=len(test), metrics=metrics))
    return _mean_metrics(results), results


def ablation_suite(instances: list[Instance],
                   masks: list[tuple[str, frozenset[int]]],
                   cfg: EvalConfig,
                   ) -> list[tuple[str, Metrics, list[FoldResult]]]:
    """One cross-validation per mask over shared folds, so rows compare."""
    folds = kfold_split(len(instances), cfg.k, cfg.seed)
    rows = []
    for name, mask in masks:
        mean, detail = cross_validate(instances, replace(cfg, mask=mask),
                                      folds=folds)
        rows.append((name, mean, detail))
    return rows
