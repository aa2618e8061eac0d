"""Impulse responses and forecast error variance decomposition."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DivergenceError, FactorizationError, ParameterError
from .model import RVarModel


@dataclass(frozen=True)
class IrfResult:
    """Responses to a one-unit shock of one variable.

    ``responses[t, i]`` is variable i's deviation t steps after the shock;
    row 0 is the impact itself (a unit vector at the shocked variable).
    """

    names: tuple[str, ...]
    shock: str
    responses: np.ndarray

    @property
    def horizon(self) -> int:
        return self.responses.shape[0] - 1


def irf(model: RVarModel, shock, horizon: int) -> IrfResult:
    """Propagate a unit impulse through the lag polynomial.

    No orthogonalization is applied: the shock is one unit of the named
    variable itself, matching the model's reduced form.
    """
    if horizon < 0:
        raise ParameterError(f"horizon must be >= 0, got {horizon}")
    j = model.shock_index(shock)
    n, p = model.n_vars, model.p
    resp = np.zeros((horizon + 1, n))
    resp[0, j] = 1.0
    for t in range(1, horizon + 1):
        acc = np.zeros(n)
        for k in range(1, min(t, p) + 1):
            acc += model.coeffs[k - 1] @ resp[t - k]
        resp[t] = acc
    return IrfResult(model.names, model.names[j], resp)


@dataclass(frozen=True)
class CumulativeIrf:
    names: tuple[str, ...]
    shock: str
    path: np.ndarray  # running sums, same layout as IrfResult.responses
    long_run: np.ndarray
    converged_at: int


def irf_cumulative(
    model: RVarModel,
    shock,
    horizon: int | None = None,
    tol: float = 1e-10,
    max_steps: int = 100_000,
) -> CumulativeIrf:
    """Running sum of impulse responses, continued until increments vanish.

    With ``horizon`` the path is truncated there (the long-run value is still
    iterated to convergence).  Models whose companion spectrum touches the
    unit circle cannot converge and are refused.
    """
    from .diagnostics import stability_test

    j = model.shock_index(shock)
    if not stability_test(model, strict=True).stable:
        raise DivergenceError(
            "cumulative responses diverge: companion eigenvalue modulus >= 1"
        )
    n, p = model.n_vars, model.p
    recent = [np.zeros(n) for _ in range(p)]
    step = np.zeros(n)
    step[j] = 1.0
    total = step.copy()
    path = [total.copy()]
    t = 0
    while True:
        t += 1
        if t > max_steps:
            raise DivergenceError(f"no convergence within {max_steps} steps")
        recent = [step] + recent[:-1]
        step = np.zeros(n)
        for k in range(1, min(t, p) + 1):
            step += model.coeffs[k - 1] @ recent[k - 1]
        total += step
        if horizon is None or t <= horizon:
            path.append(total.copy())
        if np.max(np.abs(step)) < tol and t >= (horizon or 0):
            break
    return CumulativeIrf(model.names, model.names[j], np.array(path), total, t)


@dataclass(frozen=True)
class FevdResult:
    """Forecast error variance shares.

    ``shares[h - 1, i, j]`` is the fraction of variable i's h-step forecast
    error variance attributed to the orthogonalized shock of variable j;
    ``mse[h - 1, i]`` is the corresponding total variance.
    """

    names: tuple[str, ...]
    shares: np.ndarray
    mse: np.ndarray
    ordering: tuple[int, ...]

    @property
    def horizon(self) -> int:
        return self.shares.shape[0]

    def share(self, h: int, variable, shock) -> float:
        if not 1 <= h <= self.horizon:
            raise ParameterError(f"h must be in 1..{self.horizon}, got {h}")
        i = self.names.index(variable) if isinstance(variable, str) else int(variable)
        j = self.names.index(shock) if isinstance(shock, str) else int(shock)
        return float(self.shares[h - 1, i, j])


def _resolve_ordering(model: RVarModel, ordering) -> tuple[int, ...]:
    if ordering is None:
        return tuple(range(model.n_vars))
    resolved = []
    for item in ordering:
        resolved.append(model.shock_index(item))
    if sorted(resolved) != list(range(model.n_vars)):
        raise ParameterError(f"ordering {ordering!r} is not a permutation of all variables")
    return tuple(resolved)


def fevd(model: RVarModel, horizon: int, ordering=None) -> FevdResult:
    """Cholesky-orthogonalized variance decomposition up to ``horizon`` steps.

    ``ordering`` permutes the variables before factorizing the residual
    covariance (the usual recursive identification choice) and results are
    reported back in the model's own variable order.
    """
    if horizon < 1:
        raise ParameterError(f"horizon must be >= 1, got {horizon}")
    n, p = model.n_vars, model.p
    perm = _resolve_ordering(model, ordering)
    sigma_perm = model.sigma_e[np.ix_(perm, perm)]
    try:
        chol = np.linalg.cholesky(sigma_perm)
    except np.linalg.LinAlgError:
        raise FactorizationError(
            "residual covariance is not positive definite"
        ) from None
    # impact matrix in original coordinates: un-permute rows of the factor,
    # then un-permute shock columns so column j belongs to variable j
    s = np.empty_like(chol)
    s[list(perm), :] = chol
    companion = model.companion()
    power = np.eye(companion.shape[0])
    numer = np.zeros((n, n))
    mse = np.zeros(n)
    shares = np.empty((horizon, n, n))
    mses = np.empty((horizon, n))
    for h in range(1, horizon + 1):
        phi = power[:n, :n]
        b = phi @ s
        b_unperm = np.empty_like(b)
        b_unperm[:, list(perm)] = b
        numer += b_unperm**2
        mse += (b_unperm**2).sum(axis=1)
        shares[h - 1] = numer / mse[:, None]
        mses[h - 1] = mse
        power = power @ companion
    return FevdResult(model.names, shares, mses, perm)
