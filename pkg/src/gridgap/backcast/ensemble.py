"""Ensemble training, counterfactual prediction, and reduction arithmetic.

Many candidate networks are trained on independent random subsamples; the
quarter with the lowest held-out error survives. Candidate index i draws its
private stream from (seed, i), so the result is identical whether training
runs serially or across a process pool.
"""

from __future__ import annotations

import datetime as dt
import json
import math
from calendar import month_name
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import (
    CoverageError,
    DomainError,
    InsufficientDataError,
    MissingValueError,
    ParameterError,
    SchemaError,
)
from ..ingest import WideHourlyTable
from .features import FeatureConfig
from .network import forward, train_network

ENSEMBLE_FORMAT = "backcast-ensemble/1"
PREDICTION_LEVELS = (0.10, 0.25, 0.75, 0.90)

# split redraws allowed before giving up on covering all twelve months
_MAX_SPLIT_TRIES = 200


@dataclass(frozen=True)
class TrainingConfig:
    candidates: int = 800
    keep_fraction: float = 0.25
    split: float = 0.85
    width_range: tuple[int, int] = (8, 64)
    seed: int = 0
    epochs: int = 400
    learning_rate: float = 0.01
    check_gradients: bool = False

    def __post_init__(self):
        object.__setattr__(self, "width_range", tuple(int(w) for w in self.width_range))
        if self.candidates < 1:
            raise ParameterError(f"candidates must be >= 1, got {self.candidates}")
        if not 0.0 < self.keep_fraction <= 1.0:
            raise ParameterError(f"keep_fraction {self.keep_fraction} outside (0, 1]")
        if not 0.0 < self.split < 1.0:
            raise ParameterError(f"split {self.split} outside (0, 1)")
        lo, hi = self.width_range
        if lo < 1 or hi < lo:
            raise ParameterError(f"width_range {self.width_range} must satisfy 1 <= lo <= hi")

    @property
    def keep_count(self) -> int:
        return max(1, int(self.candidates * self.keep_fraction + 1e-9))


@dataclass(frozen=True)
class BaseModel:
    index: int
    widths: tuple[int, ...]
    metric: float
    layers: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        object.__setattr__(self, "widths", tuple(int(w) for w in self.widths))
        object.__setattr__(
            self,
            "layers",
            tuple(
                (np.asarray(w, dtype=np.float64), np.asarray(b, dtype=np.float64))
                for w, b in self.layers
            ),
        )
        if len(self.layers) != 4:
            raise ParameterError(f"expected 4 weight layers, got {len(self.layers)}")
        for w, b in self.layers:
            if not (np.isfinite(w).all() and np.isfinite(b).all()):
                raise ParameterError("non-finite weight in base model")


@dataclass(frozen=True)
class BackcastEnsemble:
    models: tuple[BaseModel, ...]
    feature_config: FeatureConfig
    input_mean: np.ndarray
    input_std: np.ndarray
    target_mean: float
    target_std: float
    config: TrainingConfig
    all_metrics: tuple[float, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "models", tuple(self.models))
        object.__setattr__(self, "input_mean", np.asarray(self.input_mean, dtype=np.float64))
        object.__setattr__(self, "input_std", np.asarray(self.input_std, dtype=np.float64))
        if not self.models:
            raise ParameterError("ensemble needs at least one member")
        dim = self.models[0].layers[0][0].shape[0]
        for m in self.models:
            if m.layers[0][0].shape[0] != dim:
                raise ParameterError("members disagree on feature dimension")
        if self.input_mean.shape != (dim,) or self.input_std.shape != (dim,):
            raise ParameterError("normalization parameters do not match feature dimension")

    @property
    def dimension(self) -> int:
        return self.models[0].layers[0][0].shape[0]

    def member_predictions(self, features: np.ndarray) -> np.ndarray:
        """(members, rows) raw predictions on the original target scale."""
        features = np.atleast_2d(np.asarray(features, dtype=np.float64))
        if features.shape[1] != self.dimension:
            raise SchemaError(
                f"feature dimension {features.shape[1]} != ensemble dimension {self.dimension}"
            )
        z = (features - self.input_mean) / self.input_std
        rows = []
        for m in self.models:
            rows.append(self.target_mean + self.target_std * forward(m.layers, z))
        return np.vstack(rows)


# -- candidate training ------------------------------------------------------

_WORKER_STATE: dict = {}


def _train_candidate(index, seed, x, y_std, y_orig, months, config: TrainingConfig):
    rng = np.random.default_rng((seed, index))
    lo, hi = config.width_range
    widths = tuple(int(v) for v in rng.integers(lo, hi + 1, size=3))
    n = x.shape[0]
    train_count = int(n * config.split)
    for _ in range(_MAX_SPLIT_TRIES):
        perm = rng.permutation(n)
        held = perm[train_count:]
        if len(set(months[held])) == 12:
            break
    else:
        raise CoverageError(
            f"candidate {index}: held-out sample never covered all 12 months"
        )
    train_idx = perm[:train_count]
    params, _ = train_network(
        x[train_idx],
        y_std[train_idx],
        widths,
        rng,
        epochs=config.epochs,
        learning_rate=config.learning_rate,
        check_gradients=config.check_gradients,
    )
    target_std = float(y_orig.std()) or 1.0
    target_mean = float(y_orig.mean())
    pred_held = target_mean + target_std * forward(params, x[held])
    metric = _monthly_norm(months[held], pred_held, y_orig[held])
    return index, widths, params, metric


def _monthly_norm(held_months, pred, actual) -> float:
    """L2 norm of the 12 mean absolute monthly errors."""
    errs = np.abs(pred - actual)
    vec = np.empty(12)
    for m in range(1, 13):
        sel = held_months == m
        vec[m - 1] = errs[sel].mean()
    return float(np.sqrt(vec @ vec))


def _pool_initializer(x, y_std, y_orig, months, config, seed):
    _WORKER_STATE["args"] = (x, y_std, y_orig, months, config, seed)


def _pool_task(index):
    x, y_std, y_orig, months, config, seed = _WORKER_STATE["args"]
    return _train_candidate(index, seed, x, y_std, y_orig, months, config)


def train_ensemble(
    features: np.ndarray,
    targets,
    dates,
    config: TrainingConfig | None = None,
    feature_config: FeatureConfig | None = None,
    jobs: int = 1,
) -> BackcastEnsemble:
    """Train all candidates and keep the lowest-metric quarter.

    Requires at least a year of rows covering every calendar month and
    strictly positive targets.
    """
    config = config or TrainingConfig()
    feature_config = feature_config or FeatureConfig()
    x = np.asarray(features, dtype=np.float64)
    y = np.asarray(targets, dtype=np.float64).ravel()
    dates = list(dates)
    if x.ndim != 2 or x.shape[0] != len(y) or len(dates) != len(y):
        raise ParameterError(
            f"features {x.shape}, targets {y.shape}, dates {len(dates)} do not align"
        )
    if len(y) < 365:
        raise InsufficientDataError(f"need >= 365 training days, have {len(y)}")
    months = np.array([d.month for d in dates])
    if len(set(months.tolist())) < 12:
        raise CoverageError(
            f"training span covers {len(set(months.tolist()))} months; need all 12"
        )
    if (y <= 0).any():
        bad = dates[int(np.argmax(y <= 0))]
        raise DomainError(f"non-positive target on {bad}")
    if not np.isfinite(x).all():
        raise ParameterError("non-finite feature value")

    input_mean = x.mean(axis=0)
    input_std = x.std(axis=0)
    input_std[input_std == 0.0] = 1.0
    target_mean = float(y.mean())
    target_std = float(y.std()) or 1.0
    xz = (x - input_mean) / input_std
    yz = (y - target_mean) / target_std

    indices = range(config.candidates)
    if jobs > 1:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_pool_initializer,
            initargs=(xz, yz, y, months, config, config.seed),
        ) as pool:
            results = list(pool.map(_pool_task, indices, chunksize=8))
    else:
        results = [
            _train_candidate(i, config.seed, xz, yz, y, months, config) for i in indices
        ]
    results.sort(key=lambda r: r[0])
    metrics = np.array([r[3] for r in results])
    order = np.lexsort((np.arange(len(results)), metrics))
    kept = order[: config.keep_count]
    models = tuple(
        BaseModel(results[i][0], results[i][1], float(metrics[i]), results[i][2])
        for i in sorted(int(k) for k in kept)
    )
    return BackcastEnsemble(
        models,
        feature_config,
        input_mean,
        input_std,
        target_mean,
        target_std,
        config,
        tuple(float(m) for m in metrics),
    )


# -- prediction and reduction -------------------------------------------------


@dataclass(frozen=True)
class Prediction:
    point: float
    quantiles: dict[float, float]


def predict(ensemble: BackcastEnsemble, feature: np.ndarray) -> Prediction:
    """Ensemble mean plus empirical member quantiles for one date.

    Member predictions are sorted before aggregation, so the output is
    bit-identical under any permutation of the members.
    """
    preds = np.sort(ensemble.member_predictions(np.atleast_2d(feature))[:, 0])
    qs = np.quantile(preds, PREDICTION_LEVELS, method="linear")
    return Prediction(float(preds.mean()), dict(zip(PREDICTION_LEVELS, map(float, qs))))


def predict_many(ensemble: BackcastEnsemble, features: np.ndarray):
    """Vectorized predict: (points, {level: values}) across rows."""
    preds = np.sort(ensemble.member_predictions(features), axis=0)
    points = preds.mean(axis=0)
    qs = np.quantile(preds, PREDICTION_LEVELS, axis=0, method="linear")
    return points, {lvl: qs[i] for i, lvl in enumerate(PREDICTION_LEVELS)}


def reduction_rate(backcast_daily: float, actual_hourly) -> float:
    """Percent shortfall of the observed daily mean against the baseline."""
    if backcast_daily <= 0:
        raise DomainError(f"baseline must be positive, got {backcast_daily}")
    actual = np.asarray(actual_hourly, dtype=np.float64).ravel()
    if actual.shape != (24,):
        raise ParameterError(f"need 24 hourly values, got {actual.shape}")
    if np.isnan(actual).any():
        raise MissingValueError("actual day has missing hours; run QC first")
    return float((1.0 - actual.mean() / backcast_daily) * 100.0)


@dataclass(frozen=True)
class ReductionSeries:
    """Daily reduction points with ensemble-quantile interval bounds."""

    dates: tuple[dt.date, ...]
    point: np.ndarray
    bounds: dict[float, np.ndarray] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "point", np.asarray(self.point, dtype=np.float64))
        object.__setattr__(
            self,
            "bounds",
            {float(k): np.asarray(v, dtype=np.float64) for k, v in self.bounds.items()},
        )
        n = len(self.dates)
        if self.point.shape != (n,):
            raise ParameterError(f"point shape {self.point.shape} != ({n},)")
        for lvl, arr in self.bounds.items():
            if arr.shape != (n,):
                raise ParameterError(f"bound {lvl} shape {arr.shape} != ({n},)")
        levels = sorted(self.bounds)
        for lo, hi in zip(levels, levels[1:]):
            if (self.bounds[lo] > self.bounds[hi] + 1e-12).any():
                raise ParameterError(f"bounds at {lo} exceed bounds at {hi}")

    def __len__(self) -> int:
        return len(self.dates)


def reduction_series(
    ensemble: BackcastEnsemble, features: np.ndarray, dates, actual: WideHourlyTable
) -> ReductionSeries:
    """Daily reduction of observed consumption against the backcast.

    The point rate uses the ensemble mean; each interval bound applies the
    same arithmetic to the corresponding member quantile.
    """
    dates = list(dates)
    if len(dates) != np.atleast_2d(features).shape[0]:
        raise ParameterError("features and dates do not align")
    index = {d: i for i, d in enumerate(actual.dates)}
    rows = []
    for d in dates:
        if d not in index:
            raise ParameterError(f"observed table has no row for {d}")
        rows.append(actual.values[index[d]])
    observed = np.array(rows)
    points, quantiles = predict_many(ensemble, features)
    point_rates = np.array(
        [reduction_rate(b, day) for b, day in zip(points, observed)]
    )
    bounds = {}
    for lvl, baseline in quantiles.items():
        bounds[lvl] = np.array(
            [reduction_rate(b, day) for b, day in zip(baseline, observed)]
        )
    return ReductionSeries(tuple(dates), point_rates, bounds)


@dataclass(frozen=True)
class MonthlySummary:
    year: int
    month: int
    mean: float
    low: float
    high: float
    days: int

    @property
    def label(self) -> str:
        return f"Average in {month_name[self.month]}"

    def row(self) -> str:
        return f"{self.label}: {self.mean:.2f}% [{self.low:.2f}, {self.high:.2f}]"


def monthly_summary(
    series: ReductionSeries, year: int, month: int, min_days: int = 20
) -> MonthlySummary:
    """Mean daily reduction over one month, with mean 10/90 interval bounds."""
    sel = [i for i, d in enumerate(series.dates) if (d.year, d.month) == (year, month)]
    if len(sel) < min_days:
        raise CoverageError(
            f"{year}-{month:02d} has {len(sel)} reduction days; need >= {min_days}"
        )
    if 0.10 not in series.bounds or 0.90 not in series.bounds:
        raise ParameterError("series lacks 10/90 bounds")
    idx = np.array(sel)
    return MonthlySummary(
        year,
        month,
        float(series.point[idx].mean()),
        float(series.bounds[0.10][idx].mean()),
        float(series.bounds[0.90][idx].mean()),
        len(sel),
    )


# -- serialization -------------------------------------------------------------


def save_ensemble(ensemble: BackcastEnsemble, path) -> None:
    payload = {
        "format": ENSEMBLE_FORMAT,
        "feature_config": {
            "quantile_levels": list(ensemble.feature_config.quantile_levels),
            "weather_kinds": list(ensemble.feature_config.weather_kinds),
        },
        "input_mean": ensemble.input_mean.tolist(),
        "input_std": ensemble.input_std.tolist(),
        "target_mean": ensemble.target_mean,
        "target_std": ensemble.target_std,
        "config": {
            "candidates": ensemble.config.candidates,
            "keep_fraction": ensemble.config.keep_fraction,
            "split": ensemble.config.split,
            "width_range": list(ensemble.config.width_range),
            "seed": ensemble.config.seed,
            "epochs": ensemble.config.epochs,
            "learning_rate": ensemble.config.learning_rate,
        },
        "all_metrics": list(ensemble.all_metrics),
        "models": [
            {
                "index": m.index,
                "widths": list(m.widths),
                "metric": m.metric,
                "layers": [{"w": w.tolist(), "b": b.tolist()} for w, b in m.layers],
            }
            for m in ensemble.models
        ],
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_ensemble(path) -> BackcastEnsemble:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != ENSEMBLE_FORMAT:
        raise SchemaError(
            f"expected format {ENSEMBLE_FORMAT!r}, got {payload.get('format')!r}"
        )
    fc = payload["feature_config"]
    cfg = payload["config"]
    models = tuple(
        BaseModel(
            m["index"],
            tuple(m["widths"]),
            m["metric"],
            tuple((np.array(l["w"]), np.array(l["b"])) for l in m["layers"]),
        )
        for m in payload["models"]
    )
    return BackcastEnsemble(
        models,
        FeatureConfig(tuple(fc["quantile_levels"]), tuple(fc["weather_kinds"])),
        np.array(payload["input_mean"]),
        np.array(payload["input_std"]),
        payload["target_mean"],
        payload["target_std"],
        TrainingConfig(
            candidates=cfg["candidates"],
            keep_fraction=cfg["keep_fraction"],
            split=cfg["split"],
            width_range=tuple(cfg["width_range"]),
            seed=cfg["seed"],
            epochs=cfg["epochs"],
            learning_rate=cfg["learning_rate"],
        ),
        tuple(payload["all_metrics"]),
    )
