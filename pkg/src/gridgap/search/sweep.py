"""Grid sweep over variable subsets, windows, orders, and restriction rules.

Each combination runs the same gate sequence: difference the levels, screen
the differences for unit roots, screen the levels for cointegration, build
the restriction mask from precedence tests, estimate, then check stability
and residual autocorrelation. Survivors are ranked by BIC with AIC as the
tie-breaker; response-sign requirements act as an admissibility filter.
"""

from __future__ import annotations

import datetime as dt
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import NoModelError, ParameterError
from ..frames import TimeSeriesFrame
from ..rvar import (
    RVarModel,
    adf_test,
    durbin_watson,
    engle_granger,
    fevd,
    fit_restricted_var,
    information_criteria,
    irf,
    ljung_box,
    residuals,
    stability_test,
)
from ..transforms import difference
from .masks import build_restriction_mask, explainable_rate

ORDER_RANGE = range(1, 8)


@dataclass(frozen=True)
class SearchSpace:
    variable_subsets: tuple[tuple[str, ...], ...]
    date_ranges: tuple[tuple[dt.date, dt.date], ...]
    orders: tuple[int, ...]
    rules: tuple[int, ...] = (1, 2, 3)

    def __post_init__(self):
        subsets = tuple(tuple(s) for s in self.variable_subsets)
        object.__setattr__(self, "variable_subsets", subsets)
        object.__setattr__(
            self, "date_ranges", tuple((a, b) for a, b in self.date_ranges)
        )
        object.__setattr__(self, "orders", tuple(int(o) for o in self.orders))
        object.__setattr__(self, "rules", tuple(int(r) for r in self.rules))
        if not subsets:
            raise ParameterError("need at least one variable subset")
        target = subsets[0][0]
        for s in subsets:
            if len(s) < 2:
                raise ParameterError(f"subset {s} needs the target plus >= 1 driver")
            if s[0] != target:
                raise ParameterError(
                    f"every subset must lead with the target {target!r}, got {s}"
                )
            if len(set(s)) != len(s):
                raise ParameterError(f"duplicate name in subset {s}")
        if not self.date_ranges or not self.orders or not self.rules:
            raise ParameterError("date_ranges, orders and rules must be non-empty")
        for a, b in self.date_ranges:
            if a >= b:
                raise ParameterError(f"empty date range {a}..{b}")
        for o in self.orders:
            if o not in ORDER_RANGE:
                raise ParameterError(f"order {o} outside 1..7")
        for r in self.rules:
            if r not in (1, 2, 3):
                raise ParameterError(f"rule {r} outside {{1,2,3}}")

    @property
    def target(self) -> str:
        return self.variable_subsets[0][0]

    def combinations(self):
        """Deterministic enumeration order: subset, range, order, rule."""
        idx = 0
        for s in self.variable_subsets:
            for rng in self.date_ranges:
                for o in self.orders:
                    for r in self.rules:
                        yield idx, s, rng, o, r
                        idx += 1

    def size(self) -> int:
        return (
            len(self.variable_subsets)
            * len(self.date_ranges)
            * len(self.orders)
            * len(self.rules)
        )


@dataclass(frozen=True)
class ScoringConfig:
    adf_alpha: float = 0.05
    lb_alpha: float = 0.05
    lb_lags: int = 40
    dw_range: tuple[float, float] = (1.5, 2.5)
    required_signs: dict[str, int] = field(default_factory=dict)
    irf_horizon: int = 10
    fevd_horizon: int = 10

    def __post_init__(self):
        for name, sign in self.required_signs.items():
            if sign not in (-1, 1):
                raise ParameterError(f"required sign for {name!r} must be -1 or +1")


@dataclass(frozen=True)
class CandidateRecord:
    index: int
    subset: tuple[str, ...]
    date_range: tuple[dt.date, dt.date]
    order: int
    rule: int
    status: str  # "ok" or "failed:<gate>"
    stats: dict = field(default_factory=dict)

    @property
    def admissible(self) -> bool:
        return self.status == "ok"


@dataclass(frozen=True)
class SearchResult:
    records: tuple[CandidateRecord, ...]
    chosen_index: int
    model: RVarModel

    @property
    def chosen(self) -> CandidateRecord:
        return next(r for r in self.records if r.index == self.chosen_index)

    def ranked(self) -> tuple[CandidateRecord, ...]:
        """Admissible candidates by (BIC, AIC), then rejected ones in order."""
        ok = [r for r in self.records if r.admissible]
        ok.sort(key=lambda r: (r.stats["bic"], r.stats["aic"], r.index))
        rest = [r for r in self.records if not r.admissible]
        return tuple(ok + rest)


def _evaluate(index, subset, date_range, order, rule, frame: TimeSeriesFrame, scoring: ScoringConfig):
    stats: dict = {}
    try:
        levels = frame.select(subset).slice_dates(*date_range)
    except Exception as exc:
        return CandidateRecord(index, subset, date_range, order, rule, f"failed:window ({exc})", stats)
    try:
        diffed = difference(levels, 1)
    except Exception as exc:
        return CandidateRecord(index, subset, date_range, order, rule, f"failed:difference ({exc})", stats)

    for name in diffed.names:
        try:
            res = adf_test(diffed.column(name), "c")
        except Exception as exc:
            return CandidateRecord(index, subset, date_range, order, rule, f"failed:adf:{name} ({exc})", stats)
        stats[f"adf_p:{name}"] = res.pvalue
        if res.pvalue >= scoring.adf_alpha:
            return CandidateRecord(index, subset, date_range, order, rule, f"failed:adf:{name}", stats)

    coint = engle_granger(levels, alpha=scoring.adf_alpha, check_inputs=False)
    stats["coint_min_p"] = min(p.pvalue for p in coint.pairs)
    if not coint.screen_ok:
        return CandidateRecord(index, subset, date_range, order, rule, "failed:cointegration", stats)

    try:
        mask = build_restriction_mask(diffed, order, rule)
        model = fit_restricted_var(diffed, p=order, mask=mask)
    except Exception as exc:
        return CandidateRecord(index, subset, date_range, order, rule, f"failed:fit ({exc})", stats)

    stab = stability_test(model)
    stats["max_modulus"] = stab.max_modulus
    if not stab.stable:
        return CandidateRecord(index, subset, date_range, order, rule, "failed:stability", stats)

    resid = residuals(model, diffed)
    lags = min(scoring.lb_lags, len(resid) - 1)
    for name in model.names:
        e = resid.column(name)
        lb = ljung_box(e, lags)
        dw = durbin_watson(e)
        stats[f"lb_p:{name}"] = lb.pvalue
        stats[f"dw:{name}"] = dw
        if lb.pvalue < scoring.lb_alpha:
            return CandidateRecord(index, subset, date_range, order, rule, f"failed:whiteness:{name}", stats)
        if not scoring.dw_range[0] <= dw <= scoring.dw_range[1]:
            return CandidateRecord(index, subset, date_range, order, rule, f"failed:dw:{name}", stats)

    ic = information_criteria(model, diffed)
    stats["aic"] = ic.aic
    stats["bic"] = ic.bic

    target = subset[0]
    signs = {}
    for driver in subset[1:]:
        response = irf(model, shock=driver, horizon=scoring.irf_horizon)
        cumulative = float(response.responses[:, 0].sum())
        signs[driver] = cumulative
        required = scoring.required_signs.get(driver)
        if required is not None and np.sign(cumulative) not in (0, required):
            stats[f"irf_cum:{driver}"] = cumulative
            return CandidateRecord(index, subset, date_range, order, rule, f"failed:sign:{driver}", stats)
        stats[f"irf_cum:{driver}"] = cumulative

    decomp = fevd(model, horizon=scoring.fevd_horizon)
    stats["explainable_rate"] = explainable_rate(decomp, target)
    return CandidateRecord(index, subset, date_range, order, rule, "ok", stats)


_SWEEP_STATE: dict = {}


def _sweep_initializer(frame, scoring):
    _SWEEP_STATE["args"] = (frame, scoring)


def _sweep_task(combo):
    frame, scoring = _SWEEP_STATE["args"]
    return _evaluate(*combo, frame, scoring)


def run_search(
    frame: TimeSeriesFrame,
    space: SearchSpace,
    scoring: ScoringConfig | None = None,
    jobs: int = 1,
) -> SearchResult:
    """Evaluate every combination, then pick the admissible one with least BIC.

    Per-combination failures never abort the sweep; they are logged with the
    first gate that rejected the candidate. An empty admissible set raises a
    no-model error carrying every failure reason.
    """
    scoring = scoring or ScoringConfig()
    missing = [
        name
        for subset in space.variable_subsets
        for name in subset
        if name not in frame.names
    ]
    if missing:
        raise ParameterError(f"frame lacks columns {sorted(set(missing))}")
    combos = list(space.combinations())
    if jobs > 1:
        with ProcessPoolExecutor(
            max_workers=jobs,
            initializer=_sweep_initializer,
            initargs=(frame, scoring),
        ) as pool:
            records = list(pool.map(_sweep_task, combos, chunksize=4))
    else:
        records = [_evaluate(*combo, frame, scoring) for combo in combos]
    records.sort(key=lambda r: r.index)

    admissible = [r for r in records if r.admissible]
    if not admissible:
        raise NoModelError(
            "no combination passed every gate",
            [(r.index, r.status) for r in records],
        )
    best = min(admissible, key=lambda r: (r.stats["bic"], r.stats["aic"], r.index))
    levels = frame.select(best.subset).slice_dates(*best.date_range)
    diffed = difference(levels, 1)
    mask = build_restriction_mask(diffed, best.order, best.rule)
    model = fit_restricted_var(diffed, p=best.order, mask=mask)
    return SearchResult(tuple(records), best.index, model)


_LOG_COLUMNS = (
    "index",
    "subset",
    "start",
    "end",
    "order",
    "rule",
    "status",
    "aic",
    "bic",
    "explainable_rate",
    "max_modulus",
)


def search_log_csv(result_or_records) -> str:
    """One CSV row per combination: parameters, key statistics, verdict."""
    records = (
        result_or_records.records
        if isinstance(result_or_records, SearchResult)
        else tuple(result_or_records)
    )
    out = io.StringIO()
    extra = sorted(
        {k for r in records for k in r.stats if k not in _LOG_COLUMNS}
    )
    header = list(_LOG_COLUMNS) + extra
    out.write(",".join(header) + "\n")
    for r in records:
        row = [
            str(r.index),
            "|".join(r.subset),
            r.date_range[0].isoformat(),
            r.date_range[1].isoformat(),
            str(r.order),
            str(r.rule),
            r.status,
        ]
        for key in ("aic", "bic", "explainable_rate", "max_modulus"):
            v = r.stats.get(key)
            row.append("" if v is None else repr(float(v)))
        for key in extra:
            v = r.stats.get(key)
            row.append("" if v is None else repr(float(v)))
        out.write(",".join(row) + "\n")
    return out.getvalue()


def parse_search_space(text: str) -> SearchSpace:
    """Build a space from key-value text.

    Keys: ``subsets`` (semicolon-separated comma lists), ``ranges``
    (semicolon-separated ``start..end`` ISO dates), ``orders`` and ``rules``
    (comma-separated integers).
    """
    from ..ingest import parse_keyvalue_text

    pairs = parse_keyvalue_text(text)
    for key in ("subsets", "ranges", "orders"):
        if key not in pairs:
            raise ParameterError(f"search space text lacks {key!r}")
    subsets = tuple(
        tuple(n.strip() for n in chunk.split(",") if n.strip())
        for chunk in pairs["subsets"].split(";")
        if chunk.strip()
    )
    ranges = []
    for chunk in pairs["ranges"].split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        if ".." not in chunk:
            raise ParameterError(f"range {chunk!r} is not start..end")
        a, b = chunk.split("..", 1)
        ranges.append((dt.date.fromisoformat(a.strip()), dt.date.fromisoformat(b.strip())))
    orders = tuple(int(v) for v in pairs["orders"].split(",") if v.strip())
    rules = (
        tuple(int(v) for v in pairs["rules"].split(",") if v.strip())
        if "rules" in pairs
        else (1, 2, 3)
    )
    return SearchSpace(subsets, tuple(ranges), orders, rules)
