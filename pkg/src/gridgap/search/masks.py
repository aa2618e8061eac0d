"""Restriction-mask construction and variance-explanation scoring.

Masks encode which lag coefficients are pinned to zero before estimation.
Rule 1 cuts feedback from the first (target) variable into every driver
equation; rules 2 and 3 additionally cut driver pairs whose precedence test
is too weak, at thresholds 0.1 and 0.05.
"""

from __future__ import annotations

import numpy as np

from ..errors import ParameterError
from ..frames import TimeSeriesFrame
from ..rvar import FevdResult, granger_wald, zero_mask

GRANGER_THRESHOLDS = {1: None, 2: 0.1, 3: 0.05}


def build_restriction_mask(
    frame: TimeSeriesFrame, p: int, rule: int, granger_lags: int | None = None
) -> np.ndarray:
    """Zero-restriction tensor of shape (p, n, n), identical across lags.

    ``granger_lags`` defaults to ``p`` so the precedence tests match the
    candidate order under evaluation.
    """
    if rule not in GRANGER_THRESHOLDS:
        raise ParameterError(f"rule must be 1, 2 or 3, got {rule}")
    if p < 1:
        raise ParameterError(f"order must be >= 1, got {p}")
    n = frame.n_columns
    mask = zero_mask(p, n)
    # rule 1: the target's lags stay out of every other equation
    mask[:, 1:, 0] = True
    threshold = GRANGER_THRESHOLDS[rule]
    if threshold is None:
        return mask
    lags = granger_lags or p
    for i, effect in enumerate(frame.names):
        for j, cause in enumerate(frame.names):
            if i == j or mask[0, i, j]:
                continue
            res = granger_wald(frame, cause=cause, effect=effect, lags=lags)
            if res.pvalue > threshold:
                mask[:, i, j] = True
    return mask


def explainable_rate(fevd: FevdResult, target, horizon: int | None = None) -> float:
    """Percent of the target's forecast error variance driven by other shocks.

    100 x (1 - own-shock share) at ``horizon`` (default: the decomposition's
    final step).
    """
    h = fevd.horizon if horizon is None else horizon
    if not 1 <= h <= fevd.horizon:
        raise ParameterError(f"horizon must be in 1..{fevd.horizon}, got {h}")
    i = fevd.names.index(target) if isinstance(target, str) else int(target)
    return float(100.0 * (1.0 - fevd.shares[h - 1, i, i]))
