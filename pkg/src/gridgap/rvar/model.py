"""Restricted vector autoregression: estimation, simulation, serialization.

The model is

    x_t = c + A_1 x_{t-1} + ... + A_p x_{t-p} + e_t

where individual entries of the A_k can be constrained to exactly zero via a
boolean mask.  Estimation is equation-by-equation least squares with the
masked regressors removed from that equation's design; the intercept is
always free.
"""

from __future__ import annotations

import datetime as dt
import json
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from ..errors import (
    CollinearityError,
    FactorizationError,
    InsufficientDataError,
    ParameterError,
    SchemaError,
)
from ..frames import TimeSeriesFrame

MODEL_FORMAT = "rvar-model/1"


def zero_mask(p: int, n: int) -> np.ndarray:
    """All-free mask: no coefficient constrained."""
    return np.zeros((p, n, n), dtype=bool)


@dataclass(frozen=True)
class RVarModel:
    """Fitted restricted VAR.

    ``coeffs[k][i][j]`` is the effect of variable j at lag k+1 on the
    equation for variable i; ``mask`` marks entries constrained to zero.
    """

    names: tuple[str, ...]
    p: int
    intercept: np.ndarray
    coeffs: np.ndarray
    mask: np.ndarray
    sigma_e: np.ndarray
    train_start: dt.date | None = None
    train_end: dt.date | None = None

    def __post_init__(self):
        n = len(self.names)
        object.__setattr__(self, "names", tuple(self.names))
        object.__setattr__(self, "intercept", np.asarray(self.intercept, dtype=np.float64))
        object.__setattr__(self, "coeffs", np.asarray(self.coeffs, dtype=np.float64))
        object.__setattr__(self, "mask", np.asarray(self.mask, dtype=bool))
        object.__setattr__(self, "sigma_e", np.asarray(self.sigma_e, dtype=np.float64))
        if self.p < 1:
            raise ParameterError(f"order must be >= 1, got {self.p}")
        if self.coeffs.shape != (self.p, n, n):
            raise ParameterError(f"coeffs shape {self.coeffs.shape} != ({self.p}, {n}, {n})")
        if self.mask.shape != (self.p, n, n):
            raise ParameterError(f"mask shape {self.mask.shape} != ({self.p}, {n}, {n})")
        if self.intercept.shape != (n,):
            raise ParameterError(f"intercept shape {self.intercept.shape} != ({n},)")
        if self.sigma_e.shape != (n, n):
            raise ParameterError(f"sigma_e shape {self.sigma_e.shape} != ({n}, {n})")
        if (self.coeffs[self.mask] != 0.0).any():
            raise ParameterError("masked coefficients must be exactly zero")

    @property
    def n_vars(self) -> int:
        return len(self.names)

    @property
    def free_coefficients(self) -> int:
        """Number of estimated parameters, intercepts included."""
        return self.n_vars + int((~self.mask).sum())

    def companion(self) -> np.ndarray:
        """Stacked one-lag form: an (n*p, n*p) matrix."""
        n, p = self.n_vars, self.p
        top = np.hstack([self.coeffs[k] for k in range(p)])
        if p == 1:
            return top
        lower = np.hstack([np.eye(n * (p - 1)), np.zeros((n * (p - 1), n))])
        return np.vstack([top, lower])

    def shock_index(self, shock) -> int:
        if isinstance(shock, str):
            try:
                return self.names.index(shock)
            except ValueError:
                raise ParameterError(f"no variable named {shock!r}; have {self.names}") from None
        shock = int(shock)
        if not 0 <= shock < self.n_vars:
            raise ParameterError(f"shock index {shock} outside 0..{self.n_vars - 1}")
        return shock


def _lag_design(values: np.ndarray, p: int):
    """Response rows t = p..T-1 and the full lag matrix per (lag, variable)."""
    t_total, n = values.shape
    rows = t_total - p
    lagged = np.empty((rows, p, n))
    for k in range(1, p + 1):
        lagged[:, k - 1, :] = values[p - k : p - k + rows, :]
    return values[p:, :], lagged


def fit_restricted_var(
    frame: TimeSeriesFrame,
    p: int,
    mask: np.ndarray | None = None,
) -> RVarModel:
    """Estimate a restricted VAR(p) by per-equation least squares.

    The mask is a (p, n, n) boolean array; True entries are forced to zero by
    excluding the corresponding regressor from that equation.  The residual
    covariance uses the number of usable rows (T - p) as denominator.
    """
    if p < 1:
        raise ParameterError(f"order must be >= 1, got {p}")
    if frame.has_missing():
        raise ParameterError("frame contains missing values; clean or drop them first")
    n = frame.n_columns
    t_total = len(frame)
    if mask is None:
        mask = zero_mask(p, n)
    mask = np.asarray(mask, dtype=bool)
    if mask.shape != (p, n, n):
        raise ParameterError(f"mask shape {mask.shape} != ({p}, {n}, {n})")
    if t_total <= p:
        raise InsufficientDataError(f"{t_total} rows cannot support order {p}")
    resp, lagged = _lag_design(frame.values, p)
    rows = resp.shape[0]
    coeffs = np.zeros((p, n, n))
    intercept = np.zeros(n)
    residuals = np.empty((rows, n))
    for i in range(n):
        free = [(k, j) for k in range(p) for j in range(n) if not mask[k, i, j]]
        labels = ["const"] + [f"{frame.names[j]}.l{k + 1}" for k, j in free]
        design = np.empty((rows, 1 + len(free)))
        design[:, 0] = 1.0
        for col, (k, j) in enumerate(free, start=1):
            design[:, col] = lagged[:, k, j]
        if rows < design.shape[1]:
            raise InsufficientDataError(
                f"equation {frame.names[i]!r}: {rows} rows for {design.shape[1]} parameters"
            )
        _assert_full_rank(design, labels, frame.names[i])
        beta, _, _, _ = np.linalg.lstsq(design, resp[:, i], rcond=None)
        intercept[i] = beta[0]
        for col, (k, j) in enumerate(free, start=1):
            coeffs[k, i, j] = beta[col]
        residuals[:, i] = resp[:, i] - design @ beta
    sigma_e = residuals.T @ residuals / rows
    return RVarModel(
        frame.names,
        p,
        intercept,
        coeffs,
        mask,
        sigma_e,
        frame.dates[0],
        frame.dates[-1],
    )


def _assert_full_rank(design: np.ndarray, labels: list[str], equation: str):
    rank = np.linalg.matrix_rank(design)
    if rank >= design.shape[1]:
        return
    # pivoted QR orders columns by how much new direction they add; the ones
    # past the numerical rank are the dependent offenders
    _, r, piv = scipy.linalg.qr(design, mode="economic", pivoting=True)
    diag = np.abs(np.diag(r))
    tol = diag.max() * max(design.shape) * np.finfo(float).eps if diag.size else 0.0
    offenders = tuple(labels[piv[k]] for k in range(len(diag)) if diag[k] <= tol)
    offenders = offenders or tuple(labels[piv[rank:]])
    raise CollinearityError(
        f"equation {equation!r}: design matrix is rank deficient; "
        f"offending columns {offenders}",
        offenders,
    )


def residuals(model: RVarModel, frame: TimeSeriesFrame) -> TimeSeriesFrame:
    """One-step-ahead residuals of the fitted model on a frame."""
    if frame.names != model.names:
        raise ParameterError(f"frame columns {frame.names} != model {model.names}")
    if len(frame) <= model.p:
        raise InsufficientDataError("frame shorter than the model order")
    resp, lagged = _lag_design(frame.values, model.p)
    pred = np.tile(model.intercept, (resp.shape[0], 1))
    for k in range(model.p):
        pred += lagged[:, k, :] @ model.coeffs[k].T
    return TimeSeriesFrame(frame.dates[model.p :], model.names, resp - pred)


def simulate_var(
    coeffs: np.ndarray,
    intercept: np.ndarray,
    sigma_e: np.ndarray,
    steps: int,
    rng: np.random.Generator,
    burn: int = 200,
) -> np.ndarray:
    """Draw a sample path of a VAR with Gaussian shocks.

    ``sigma_e`` may be merely positive semi-definite (a zero matrix gives the
    deterministic path), so the factor falls back to an eigendecomposition
    when Cholesky refuses.
    """
    coeffs = np.asarray(coeffs, dtype=np.float64)
    p, n, _ = coeffs.shape
    sigma = np.asarray(sigma_e, dtype=np.float64)
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError:
        w, v = np.linalg.eigh(sigma)
        if w.min() < -1e-10 * max(1.0, w.max()):
            raise FactorizationError("shock covariance has a negative eigenvalue") from None
        chol = v @ np.diag(np.sqrt(np.clip(w, 0.0, None)))
    total = steps + burn + p
    x = np.zeros((total, n))
    shocks = rng.standard_normal((total, n)) @ chol.T
    for t in range(p, total):
        acc = intercept + shocks[t]
        for k in range(1, p + 1):
            acc = acc + coeffs[k - 1] @ x[t - k]
        x[t] = acc
    return x[burn + p :]


def save_model(model: RVarModel, path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "names": list(model.names),
        "p": model.p,
        "intercept": model.intercept.tolist(),
        "coeffs": model.coeffs.tolist(),
        "mask": model.mask.astype(int).tolist(),
        "sigma_e": model.sigma_e.tolist(),
        "train_start": model.train_start.isoformat() if model.train_start else None,
        "train_end": model.train_end.isoformat() if model.train_end else None,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)
        fh.write("\n")


def load_model(path) -> RVarModel:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("format") != MODEL_FORMAT:
        raise SchemaError(f"{path}: not a {MODEL_FORMAT} file")
    return RVarModel(
        tuple(payload["names"]),
        int(payload["p"]),
        np.array(payload["intercept"], dtype=np.float64),
        np.array(payload["coeffs"], dtype=np.float64),
        np.array(payload["mask"], dtype=bool),
        np.array(payload["sigma_e"], dtype=np.float64),
        dt.date.fromisoformat(payload["train_start"]) if payload["train_start"] else None,
        dt.date.fromisoformat(payload["train_end"]) if payload["train_end"] else None,
    )
