"""Aggregation of county-level series onto market regions."""

from __future__ import annotations

import numpy as np

from ..errors import EmptyInputError, MappingError, ParameterError
from ..frames import TimeSeriesFrame


def aggregate_geo(
    county_frames: list[tuple[str, TimeSeriesFrame]],
    region_map: dict[str, str],
    regions=None,
) -> tuple[dict[str, TimeSeriesFrame], list[str]]:
    """Sum county frames into one frame per region.

    ``region_map`` assigns counties to regions; when ``regions`` is given,
    mapping a county to a region outside it is an error.  Counties absent
    from the map are excluded with a warning.  Region dates are the union of
    member county dates; a county missing a date contributes zero there,
    which is also warned about since it usually means ragged source coverage.
    """
    if not county_frames:
        raise EmptyInputError("no county frames to aggregate")
    warnings: list[str] = []
    members: dict[str, list[tuple[str, TimeSeriesFrame]]] = {}
    for county, frame in county_frames:
        region = region_map.get(county)
        if region is None:
            warnings.append(f"county {county!r} not in region map; excluded")
            continue
        if regions is not None and region not in regions:
            raise MappingError(f"county {county!r} mapped to unknown region {region!r}")
        members.setdefault(region, []).append((county, frame))
    out: dict[str, TimeSeriesFrame] = {}
    for region in sorted(members):
        frames = members[region]
        names = frames[0][1].names
        for county, frame in frames[1:]:
            if frame.names != names:
                raise ParameterError(
                    f"county {county!r} columns {frame.names} differ from {names}"
                )
        all_dates = sorted({d for _, f in frames for d in f.dates})
        totals = np.zeros((len(all_dates), len(names)))
        pos = {d: i for i, d in enumerate(all_dates)}
        for county, frame in frames:
            have = set(frame.dates)
            for d in all_dates:
                if d not in have:
                    warnings.append(
                        f"region {region!r}: county {county!r} missing {d.isoformat()}; "
                        "contributes zero"
                    )
            rows = [pos[d] for d in frame.dates]
            totals[rows, :] += frame.values
        out[region] = TimeSeriesFrame(tuple(all_dates), names, totals)
    return out, warnings
