"""Linear max-margin classifier trained by stochastic subgradient descent
on the hinge loss, with per-model feature standardization."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError
from .features import N_FEATURES

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class Hyper:
    lam: float = 1e-4  # L2 strength
    epochs: int = 100
    seed: int = 42


@dataclass
class Scaler:
    means: np.ndarray
    stds: np.ndarray  # raw column stds; 0 for constant columns

    @property
    def divisors(self) -> np.ndarray:
        return np.where(self.stds == 0.0, 1.0, self.stds)

    def transform(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.means) / self.divisors


def fit_scaler(X: np.ndarray) -> Scaler:
    X = np.asarray(X, dtype=float)
    if X.ndim != 2 or X.shape[0] < 1:
        raise DataError("empty matrix")
    means = X.mean(axis=0)
    if X.shape[0] < 2:
        stds = np.zeros(X.shape[1])
    else:
        stds = X.std(axis=0, ddof=1)
    return Scaler(means=means, stds=stds)


@dataclass(frozen=True)
class Prediction:
    label: bool  # play sound
    margin: float  # w.x_hat + b; margin == 0 decides no-play


@dataclass
class LinearModel:
    w: np.ndarray
    b: float
    scaler: Scaler
    hyper: Hyper
    objective_history: list[float] = field(default_factory=list)


def hinge_objective(w: np.ndarray, b: float, X: np.ndarray, y: np.ndarray,
                    lam: float) -> float:
    margins = y * (X @ w + b)
    hinge = np.maximum(0.0, 1.0 - margins).mean()
    return lam * float(w @ w) / 2.0 + float(hinge)


def train(X: np.ndarray, y, hyper: Hyper = Hyper()) -> LinearModel:
    """Minimize lam*||w||^2/2 + mean hinge loss by per-example subgradient
    steps with step size 1/(lam*(t+1)); bias unregularized; deterministic
    given the seed."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2 or X.shape[0] != y.shape[0] or X.shape[0] < 2:
        raise DataError("need matching X, y with at least 2 rows")
    if y.dtype == bool or set(np.unique(y)) <= {0, 1}:
        ysign = np.where(y.astype(bool), 1.0, -1.0)
    else:
        ysign = y.astype(float)
    if len(np.unique(ysign)) < 2:
        raise DataError("degenerate labels")

    scaler = fit_scaler(X)
    Xs = scaler.transform(X)
    n, d = Xs.shape
    lam = hyper.lam

    rng = np.random.default_rng(hyper.seed)
    w = np.zeros(d)
    b = 0.0
    t = 0
    history = []
    for _ in range(hyper.epochs):
        for i in rng.permutation(n):
            eta = 1.0 / (lam * (t + 1))
            xi, yi = Xs[i], ysign[i]
            if yi * (w @ xi + b) < 1.0:
                w = (1.0 - eta * lam) * w + eta * yi * xi
                b = b + eta * yi
            else:
                w = (1.0 - eta * lam) * w
            t += 1
        history.append(hinge_objective(w, b, Xs, ysign, lam))
    return LinearModel(w=w, b=b, scaler=scaler, hyper=hyper,
                       objective_history=history)


def predict(model: LinearModel, x: np.ndarray) -> Prediction:
    x = np.asarray(x, dtype=float)
    if x.shape != model.w.shape:
        raise DataError(f"feature dimension {x.shape} != {model.w.shape}")
    xhat = model.scaler.transform(x)
    margin = float(model.w @ xhat + model.b)
    return Prediction(label=margin > 0.0, margin=margin)


def predict_batch(model: LinearModel, X: np.ndarray) -> list[Prediction]:
    return [predict(model, x) for x in np.asarray(X, dtype=float)]


def save_model(model: LinearModel, path: str | Path) -> None:
    doc = {
        "format_version": MODEL_FORMAT_VERSION,
        "w": model.w.tolist(),
        "b": model.b,
        "scaler": {"means": model.scaler.means.tolist(),
                   "stds": model.scaler.stds.tolist()},
        "hyper": {"lambda": model.hyper.lam, "epochs": model.hyper.epochs,
                  "seed": model.hyper.seed},
    }
    Path(path).write_text(json.dumps(doc), encoding="utf-8")


def load_model(path: str | Path) -> LinearModel:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        if doc["format_version"] != MODEL_FORMAT_VERSION:
            raise DataError(
                f"unsupported model format {doc['format_version']}")
        w = np.array(doc["w"], dtype=float)
        scaler = Scaler(means=np.array(doc["scaler"]["means"], dtype=float),
                        stds=np.array(doc["scaler"]["stds"], dtype=float))
        hyper = Hyper(lam=float(doc["hyper"]["lambda"]),
                      epochs=int(doc["hyper"]["epochs"]),
                      seed=int(doc["hyper"]["seed"]))
        model = LinearModel(w=w, b=float(doc["b"]), scaler=scaler, hyper=hyper)
    except DataError:
        raise
    except (KeyError, TypeError, ValueError, json.JSONDecodeError) as e:
        raise DataError(f"bad model file {path}: {e}") from e
    if not np.all(np.isfinite(model.w)) or not np.isfinite(model.b):
        raise DataError("model weights are not finite")
    if model.w.size != N_FEATURES:
        raise DataError(
            f"model dimension {model.w.size} != {N_FEATURES}")
    return model
