"""Feature encoding for the daily counterfactual-load models.

Each training row describes one date: calendar one-hots, a holiday bit, the
day of month scaled to [0, 1], empirical quantiles of that day's hourly
weather readings, and an economic scalar.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass, field
from typing import Mapping

import numpy as np

from ..errors import InsufficientDataError, ParameterError, UnknownColumnError
from ..frames import CalendarInfo
from ..ingest import WideHourlyTable

DEFAULT_QUANTILE_LEVELS = (0.25, 0.50, 0.75, 1.00)
DEFAULT_WEATHER_KINDS = ("temperature", "humidity", "wind")

# a day must retain at least this many hourly readings to yield quantiles
MIN_WEATHER_CELLS = 12


@dataclass(frozen=True)
class FeatureConfig:
    quantile_levels: tuple[float, ...] = DEFAULT_QUANTILE_LEVELS
    weather_kinds: tuple[str, ...] = DEFAULT_WEATHER_KINDS

    def __post_init__(self):
        object.__setattr__(self, "quantile_levels", tuple(float(q) for q in self.quantile_levels))
        object.__setattr__(self, "weather_kinds", tuple(self.weather_kinds))
        if not self.quantile_levels:
            raise ParameterError("need at least one quantile level")
        for q in self.quantile_levels:
            if not 0.0 < q <= 1.0:
                raise ParameterError(f"quantile level {q} outside (0, 1]")
        if list(self.quantile_levels) != sorted(set(self.quantile_levels)):
            raise ParameterError("quantile levels must be strictly increasing")
        if not self.weather_kinds:
            raise ParameterError("need at least one weather kind")
        if len(set(self.weather_kinds)) != len(self.weather_kinds):
            raise ParameterError("duplicate weather kinds")

    @property
    def dimension(self) -> int:
        # month(12) + weekday(7) + holiday + day-of-month + quantiles + gdp
        return 21 + len(self.weather_kinds) * len(self.quantile_levels) + 1


def feature_names(config: FeatureConfig) -> tuple[str, ...]:
    """Column labels matching FeatureVector.vector positions."""
    names = [f"month_{m}" for m in range(1, 13)]
    names += [f"weekday_{w}" for w in range(7)]
    names += ["holiday", "day_scaled"]
    for kind in config.weather_kinds:
        names += [f"{kind}_q{int(round(q * 100))}" for q in config.quantile_levels]
    names.append("gdp_growth")
    return tuple(names)


@dataclass(frozen=True)
class FeatureVector:
    calendar: CalendarInfo
    quantiles: Mapping[str, tuple[float, ...]]
    gdp_growth: float
    config: FeatureConfig = field(default_factory=FeatureConfig)

    def __post_init__(self):
        object.__setattr__(
            self,
            "quantiles",
            {k: tuple(float(v) for v in vals) for k, vals in dict(self.quantiles).items()},
        )
        if set(self.quantiles) != set(self.config.weather_kinds):
            raise ParameterError(
                f"quantile kinds {sorted(self.quantiles)} != configured {sorted(self.config.weather_kinds)}"
            )
        for kind, vals in self.quantiles.items():
            if len(vals) != len(self.config.quantile_levels):
                raise ParameterError(
                    f"{kind}: {len(vals)} quantile values for {len(self.config.quantile_levels)} levels"
                )
            if not all(np.isfinite(v) for v in vals):
                raise ParameterError(f"{kind}: non-finite quantile value")
        if not np.isfinite(self.gdp_growth):
            raise ParameterError("gdp_growth must be finite")

    @property
    def vector(self) -> np.ndarray:
        out = np.zeros(self.config.dimension)
        out[self.calendar.month - 1] = 1.0
        out[12 + self.calendar.weekday] = 1.0
        out[19] = 1.0 if self.calendar.holiday_flag else 0.0
        out[20] = self.calendar.day / 31.0
        pos = 21
        for kind in self.config.weather_kinds:
            vals = self.quantiles[kind]
            out[pos : pos + len(vals)] = vals
            pos += len(vals)
        out[pos] = self.gdp_growth
        return out


def build_features(
    calendar: CalendarInfo,
    weather_row: Mapping[str, np.ndarray],
    gdp: float,
    config: FeatureConfig | None = None,
) -> FeatureVector:
    """Encode one date from its calendar attributes and 24 hourly readings.

    Quantiles are empirical over the day's non-missing cells, linear
    interpolation between order statistics; a day keeping fewer than
    MIN_WEATHER_CELLS readings for any kind is refused.
    """
    config = config or FeatureConfig()
    quantiles = {}
    for kind in config.weather_kinds:
        if kind not in weather_row:
            raise UnknownColumnError(f"weather kind {kind!r} missing for {calendar.date}")
        row = np.asarray(weather_row[kind], dtype=np.float64).ravel()
        if row.shape != (24,):
            raise ParameterError(f"{kind} row for {calendar.date} is not 24 hourly values")
        cells = row[~np.isnan(row)]
        if len(cells) < MIN_WEATHER_CELLS:
            raise InsufficientDataError(
                f"{kind} has {len(cells)} usable cells on {calendar.date}; "
                f"need >= {MIN_WEATHER_CELLS}"
            )
        quantiles[kind] = tuple(
            float(np.quantile(cells, q, method="linear")) for q in config.quantile_levels
        )
    return FeatureVector(calendar, quantiles, float(gdp), config)


def _gdp_for_date(gdp, date: dt.date) -> float:
    """Resolve the economic scalar: a constant, or a (year, month) step map."""
    if isinstance(gdp, (int, float)):
        return float(gdp)
    keys = sorted(gdp)
    key = (date.year, date.month)
    chosen = None
    for k in keys:
        if k <= key:
            chosen = k
        else:
            break
    if chosen is None:
        raise ParameterError(f"no economic value at or before {date.year}-{date.month:02d}")
    return float(gdp[chosen])


def feature_matrix(
    dates,
    weather: Mapping[str, WideHourlyTable],
    gdp,
    holidays=frozenset(),
    config: FeatureConfig | None = None,
) -> np.ndarray:
    """Stack per-date vectors for a span of dates.

    ``weather`` maps each configured kind to a wide hourly table covering all
    requested dates; ``gdp`` is a constant or a {(year, month): value} map
    applied stepwise.
    """
    config = config or FeatureConfig()
    indices = {}
    for kind in config.weather_kinds:
        if kind not in weather:
            raise UnknownColumnError(f"no weather table for kind {kind!r}")
        indices[kind] = {d: i for i, d in enumerate(weather[kind].dates)}
    rows = []
    for d in dates:
        row = {}
        for kind in config.weather_kinds:
            idx = indices[kind].get(d)
            if idx is None:
                raise InsufficientDataError(f"{kind} table has no row for {d}")
            row[kind] = weather[kind].values[idx]
        cal = CalendarInfo.from_date(d, holidays)
        rows.append(build_features(cal, row, _gdp_for_date(gdp, d), config).vector)
    if not rows:
        raise ParameterError("no dates requested")
    return np.vstack(rows)
