"""Detection-event enumeration, simultaneity rectification and gap analysis.

Winding the cable at constant speed from full extension sweeps every mark
past every sensor.  Each meeting is an event pinning the free length to
``rho = ||BM_i|| - (h - ||OS_j||)`` at time ``t = (l_max - ||BM_i|| -
||OS_j||) / v``.  Two different pairs can meet at the same instant; the
rectification rule keeps exactly one of them so that every instant maps to a
unique event.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

from .model import GEOM_TOL, CalibrationDesign

EVENT_CSV_HEADER = "t,i,j,rho,delta_rho"


@dataclass(frozen=True)
class Event:
    """Detection of mark i by sensor j at time t, free length rho."""

    t: float
    i: int
    j: int
    rho: float


@dataclass(frozen=True)
class EventTable:
    """Time-ordered detection events with derived length gaps.

    A raw table may hold simultaneous events; a rectified one has strictly
    increasing times and strictly positive gaps.
    """

    events: tuple[Event, ...]
    rectified: bool = False

    def __post_init__(self) -> None:
        for a, b in zip(self.events, self.events[1:]):
            if b.t < a.t - GEOM_TOL:
                raise ValueError("events must be time-ordered")
            if self.rectified and b.t <= a.t + GEOM_TOL:
                raise ValueError("rectified tables need strictly increasing times")

    @property
    def count(self) -> int:
        return len(self.events)

    @property
    def gaps(self) -> tuple[float, ...]:
        """Length wound between consecutive detections (count - 1 values)."""
        return tuple(a.rho - b.rho for a, b in zip(self.events, self.events[1:]))

    @property
    def rho_values(self) -> tuple[float, ...]:
        return tuple(e.rho for e in self.events)


@dataclass(frozen=True)
class DeltaStats:
    """Mean and spread of the wound length between successive detections."""

    mean: float
    std: float
    count: int


@dataclass(frozen=True)
class StartStroke:
    """Identification cost when winding starts at one rectified event.

    k is the number of detections after the first needed before the observed
    gap sequence matches a single position in the table; stroke is the cable
    wound over those k detections.  Both are None when no suffix of the table
    ever becomes unique from this start.
    """

    start: int
    k: int | None
    stroke: float | None

    @property
    def identifiable(self) -> bool:
        return self.k is not None


@dataclass(frozen=True)
class StrokeProfile:
    """Per-start identification strokes plus worst-case and mean summaries."""

    entries: tuple[StartStroke, ...]
    worst_stroke: float | None
    mean_stroke: float | None

    @property
    def unidentifiable_starts(self) -> int:
        return sum(1 for e in self.entries if not e.identifiable)

    def entry(self, start: int) -> StartStroke:
        return self.entries[start - 1]


def detection_time(design: CalibrationDesign, i: int, j: int) -> float:
    """Instant at which mark i meets sensor j when winding from full extension.

    Negative values mean the pair would only meet while unwinding; callers
    filter to the winding window.
    """
    g = design.geometry
    return (g.l_max - design.marks.position(i) - design.sensors.height(j)) / g.v


def enumerate_events(design: CalibrationDesign) -> EventTable:
    """All physically reachable mark/sensor meetings, sorted by time.

    Pairs with negative detection time or non-positive free length are
    excluded (the cable starts at full extension and the platform cannot
    pass the support).  Simultaneous events are kept; ties are ordered by
    ascending mark index then descending sensor index for stable output.
    """
    found: list[Event] = []
    for i in range(1, design.marks.count + 1):
        for j in range(1, design.sensors.count + 1):
            t = detection_time(design, i, j)
            rho = design.rho_at(i, j)
            if t >= -GEOM_TOL and rho > GEOM_TOL:
                found.append(Event(t, i, j, rho))
    found.sort(key=lambda e: (e.t, e.i, -e.j))
    return EventTable(tuple(found), rectified=False)


def rectify(table: EventTable) -> EventTable:
    """Resolve simultaneous detections so each instant maps to one event.

    Within a group of equal-time events the survivor is the pair minimising
    the index ratio i/j; on a ratio tie the smaller mark index wins.  This
    keeps the detection closest to the support, i.e. the shortest stroke.
    Idempotent: rectifying a rectified table is a no-op.
    """
    survivors: list[Event] = []
    group: list[Event] = []
    for event in table.events:
        if group and event.t - group[0].t > GEOM_TOL:
            survivors.append(min(group, key=lambda e: (e.i / e.j, e.i)))
            group = []
        group.append(event)
    if group:
        survivors.append(min(group, key=lambda e: (e.i / e.j, e.i)))
    return EventTable(tuple(survivors), rectified=True)


def delta_stats(table: EventTable) -> DeltaStats:
    """Mean and spread of the gaps of a rectified table.

    The mean divides the gap sum by count - 1 (the number of gaps); the
    spread divides the squared deviations by count - 2.  Both denominators
    are part of the toolkit's contract, so downstream numbers stay
    reproducible.
    """
    if not table.rectified:
        raise ValueError("delta_stats needs a rectified table")
    n = table.count
    if n < 3:
        raise ValueError(f"need at least 3 events for gap statistics, got {n}")
    gaps = table.gaps
    mean = sum(gaps) / (n - 1)
    var = sum((g - mean) ** 2 for g in gaps) / (n - 2)
    return DeltaStats(mean=mean, std=math.sqrt(var), count=n)


def stroke_profile(table: EventTable, tolerance: float = 0.01) -> StrokeProfile:
    """How much cable each starting position must wind before it is unique.

    For every start p the profile finds the smallest k such that the gap
    run (g_p .. g_{p+k-1}) matches exactly one position in the whole gap
    list, comparing gaps within ``tolerance``.  Starts whose observable gap
    run never becomes unique (including the final event, which has none)
    are flagged rather than scored.
    """
    if not table.rectified:
        raise ValueError("stroke_profile needs a rectified table")
    gaps = table.gaps
    n_gaps = len(gaps)
    entries: list[StartStroke] = []
    for start in range(1, table.count + 1):
        first = start - 1  # 0-based index of this start's first gap
        result: tuple[int, float] | None = None
        for k in range(1, n_gaps - first + 1):
            window = gaps[first : first + k]
            matches = 0
            for q in range(n_gaps - k + 1):
                if all(abs(gaps[q + off] - window[off]) <= tolerance for off in range(k)):
                    matches += 1
                    if matches > 1:
                        break
            if matches == 1:
                result = (k, sum(window))
                break
        if result is None:
            entries.append(StartStroke(start, None, None))
        else:
            entries.append(StartStroke(start, result[0], result[1]))

    strokes = [e.stroke for e in entries if e.stroke is not None]
    worst = max(strokes) if strokes else None
    mean = sum(strokes) / len(strokes) if strokes else None
    return StrokeProfile(tuple(entries), worst, mean)


def format_event_csv(table: EventTable, precision: str = "table") -> str:
    """Render a table as CSV: ``t,i,j,rho,delta_rho`` with the gap column
    empty on the first row.

    ``table`` precision fixes two decimals to match the printed layout
    tables; ``full`` emits shortest round-trip floats.
    """
    if precision not in ("table", "full"):
        raise ValueError(f"precision must be 'table' or 'full', got {precision!r}")

    def num(x: float) -> str:
        return f"{x:.2f}" if precision == "table" else repr(x)

    lines = [EVENT_CSV_HEADER]
    prev_rho: float | None = None
    for e in table.events:
        delta = "" if prev_rho is None else num(prev_rho - e.rho)
        lines.append(f"{num(e.t)},{e.i},{e.j},{num(e.rho)},{delta}")
        prev_rho = e.rho
    return "\n".join(lines) + "\n"


def write_event_csv(table: EventTable, stream, precision: str = "table") -> None:
    stream.write(format_event_csv(table, precision))


def parse_event_csv(text: str, rectified: bool = False) -> EventTable:
    """Parse CSV produced by :func:`format_event_csv`.

    The gap column is derived data and is ignored on input.
    """
    lines = [ln for ln in io.StringIO(text).read().splitlines() if ln.strip()]
    if not lines or lines[0].strip() != EVENT_CSV_HEADER:
        raise ValueError(f"expected header {EVENT_CSV_HEADER!r}")
    parsed: list[Event] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 columns, got {len(parts)}")
        try:
            parsed.append(
                Event(float(parts[0]), int(parts[1]), int(parts[2]), float(parts[3]))
            )
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return EventTable(tuple(parsed), rectified=rectified)
