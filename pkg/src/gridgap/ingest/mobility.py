"""Device-panel mobility metrics and retail visit aggregation.

The social-distancing panel reports, per county and day, the device count C
and four behavioural tallies: C1 devices that stayed home all day, C2 the
median minutes spent at home, C3 devices resembling part-time on-site
workers, and C4 devices resembling full-time on-site workers.  All derived
metrics are rates in [0, 1] so that counties of different panel size are
comparable.
"""

from __future__ import annotations

import datetime as dt
from dataclasses import dataclass

import numpy as np

from ..errors import DomainError, EmptyInputError
from ..frames import TimeSeriesFrame

MINUTES_PER_DAY = 1440.0

# POI categories whose daily visits count as retail mobility.
RETAIL_CATEGORIES = frozenset(
    {
        "Automobile Dealers",
        "Automotive Parts, Accessories, and Tire Stores",
        "Beer, Wine, and Liquor Stores",
        "Book Stores and News Dealers",
        "Clothing Stores",
        "Department Stores",
        "Drinking Places (Alcoholic Beverages)",
        "Electronics and Appliance Stores",
        "Florists",
        "Furniture Stores",
        "Gasoline Stations",
        "General Merchandise Stores, including Warehouse Clubs and Super-centers",
        "Grocery Stores",
        "Health and Personal Care Stores",
        "Home Furnishings Stores",
        "Jewelry, Luggage, and Leather Goods Stores",
        "Lawn and Garden Equipment and Supplies Stores",
        "Office Supplies, Stationery, and Gift Stores",
        "Other Miscellaneous Store Retailers",
        "Other Motor Vehicle Dealers",
        "Restaurants and Other Eating Places",
        "Shoe Stores",
        "Specialty Food Stores",
        "Sporting Goods, Hobby, and Musical Instrument Stores",
        "Used Merchandise Stores",
    }
)

METRIC_NAMES = ("stay_home", "home_dwell", "parttime_onsite", "fulltime_onsite")


@dataclass(frozen=True)
class MobilityPanelRow:
    """One county-day from the social-distancing panel."""

    date: dt.date
    county: str
    devices: int
    stay_home_devices: int
    median_home_minutes: float
    parttime_devices: int
    fulltime_devices: int

    def __post_init__(self):
        label = f"{self.county} {self.date.isoformat()}"
        if self.devices <= 0:
            raise DomainError(f"{label}: device panel is empty")
        for name, count in (
            ("stay_home_devices", self.stay_home_devices),
            ("parttime_devices", self.parttime_devices),
            ("fulltime_devices", self.fulltime_devices),
        ):
            if not 0 <= count <= self.devices:
                raise DomainError(f"{label}: {name}={count} outside 0..{self.devices}")
        if not 0.0 <= self.median_home_minutes <= MINUTES_PER_DAY:
            raise DomainError(
                f"{label}: median_home_minutes={self.median_home_minutes} outside 0..1440"
            )


@dataclass(frozen=True)
class MobilityMetrics:
    """Rates derived from one panel row; each lies in [0, 1]."""

    date: dt.date
    county: str
    stay_home: float
    home_dwell: float
    parttime_onsite: float
    fulltime_onsite: float


def mobility_metrics(rows: list[MobilityPanelRow]) -> list[MobilityMetrics]:
    """Stay-home, home-dwell, and on-site worker rates per county-day."""
    if not rows:
        raise EmptyInputError("no panel rows")
    out = []
    for r in rows:
        out.append(
            MobilityMetrics(
                r.date,
                r.county,
                r.stay_home_devices / r.devices,
                r.median_home_minutes / MINUTES_PER_DAY,
                r.parttime_devices / r.devices,
                r.fulltime_devices / r.devices,
            )
        )
    return out


def metrics_frames(metrics: list[MobilityMetrics]) -> dict[str, TimeSeriesFrame]:
    """Group metric rows into one four-column frame per county."""
    if not metrics:
        raise EmptyInputError("no metrics rows")
    by_county: dict[str, dict[dt.date, MobilityMetrics]] = {}
    for m in metrics:
        by_county.setdefault(m.county, {})[m.date] = m
    out = {}
    for county, rows in by_county.items():
        dates = tuple(sorted(rows))
        values = np.array(
            [
                [rows[d].stay_home, rows[d].home_dwell, rows[d].parttime_onsite, rows[d].fulltime_onsite]
                for d in dates
            ]
        )
        out[county] = TimeSeriesFrame(dates, METRIC_NAMES, values)
    return out


@dataclass(frozen=True)
class PoiVisitRow:
    """Daily visit count for one POI category in one county."""

    date: dt.date
    county: str
    category: str
    visits: float

    def __post_init__(self):
        if self.visits < 0:
            raise DomainError(
                f"{self.county} {self.date.isoformat()} {self.category!r}: negative visits"
            )


def retail_visits(rows: list[PoiVisitRow]) -> dict[str, TimeSeriesFrame]:
    """Total daily retail-sector visits per county.

    Only the categories in :data:`RETAIL_CATEGORIES` count.  The date index
    per county is every date that county appears on at all, so a day with
    visits only to non-retail categories shows an explicit zero.
    """
    if not rows:
        raise EmptyInputError("no visit rows")
    totals: dict[str, dict[dt.date, float]] = {}
    for r in rows:
        days = totals.setdefault(r.county, {})
        days.setdefault(r.date, 0.0)
        if r.category in RETAIL_CATEGORIES:
            days[r.date] += r.visits
    out = {}
    for county, days in totals.items():
        dates = tuple(sorted(days))
        values = np.array([[days[d]] for d in dates])
        out[county] = TimeSeriesFrame(dates, ("retail_visits",), values)
    return out
