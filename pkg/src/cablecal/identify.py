"""Online cable-length identification by candidate elimination.

The first detection says nothing about where on the cable we are.  Every
further detection contributes one observed length gap; table positions whose
gap run disagrees are eliminated.  A single survivor identifies the event
sequence and therefore the absolute cable length; an empty survivor set
signals a sensor fault or a design/trace mismatch.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .events import EventTable, enumerate_events, rectify
from .model import CalibrationDesign
from .simulate import ObservationTrace

DEFAULT_GAP_TOLERANCE = 0.05


class Status(enum.Enum):
    AWAITING_FIRST = "awaiting_first"
    AMBIGUOUS = "ambiguous"
    IDENTIFIED = "identified"
    NO_MATCH = "no_match"


@dataclass(frozen=True)
class IdentifierState:
    """Survivor set after some number of observed gaps.

    Candidates are 1-based starting indices into the rectified table; the
    state is identified exactly when one survives after at least one gap,
    and dead (no_match) when none do.
    """

    table: EventTable
    tolerance: float
    observed: tuple[float, ...]
    candidates: frozenset[int]
    status: Status
    identified_index: int | None = None
    identified_rho: float | None = None
    by_exhaustion: bool = False

    @property
    def candidate_count(self) -> int:
        return len(self.candidates)

    @property
    def terminal(self) -> bool:
        return self.status in (Status.IDENTIFIED, Status.NO_MATCH)


@dataclass(frozen=True)
class CalibrationResult:
    """Outcome of replaying one observation trace against a design."""

    status: str  # identified | identified_by_exhaustion | ambiguous | no_match
    rho: float | None
    detections_used: int
    stroke: float | None
    candidate_history: tuple[int, ...]
    corrector_scale: float | None = None
    corrector_offset: float | None = None

    def lines(self) -> list[str]:
        history = " -> ".join(str(c) for c in self.candidate_history) or "-"
        out = [
            f"status: {self.status}",
            f"rho: {self.rho:.2f}" if self.rho is not None else "rho: -",
            f"detections_used: {self.detections_used}",
            f"stroke: {self.stroke:.2f}" if self.stroke is not None else "stroke: -",
            f"candidate_history: {history}",
        ]
        if self.corrector_scale is not None:
            out.append(f"corrector_scale: {self.corrector_scale:.6f}")
            out.append(f"corrector_offset: {self.corrector_offset:.6f}")
        return out


def awaiting(table: EventTable, tolerance: float = DEFAULT_GAP_TOLERANCE) -> IdentifierState:
    """State before any detection: armed but without position information."""
    if not table.rectified:
        raise ValueError("identifier needs a rectified event table")
    if table.count < 2:
        raise ValueError("identification needs a table with at least 2 events")
    if tolerance <= 0:
        raise ValueError("gap tolerance must be positive")
    return IdentifierState(
        table=table,
        tolerance=tolerance,
        observed=(),
        candidates=frozenset(range(1, table.count + 1)),
        status=Status.AWAITING_FIRST,
    )


def first_detection(state: IdentifierState) -> IdentifierState:
    """The first detection fires: every table position is now a candidate."""
    if state.status is not Status.AWAITING_FIRST:
        raise ValueError(f"cannot take a first detection on a {state.status.value} state")
    return replace(state, status=Status.AMBIGUOUS)


def start(table: EventTable, tolerance: float = DEFAULT_GAP_TOLERANCE) -> IdentifierState:
    """State right after the first detection: every table position is possible."""
    return first_detection(awaiting(table, tolerance))


def observe(state: IdentifierState, gap: float) -> IdentifierState:
    """Fold one measured gap into the survivor set.

    A candidate start p survives when the table still has an m-th gap after
    it and that gap matches the observation within tolerance.  Survivors
    only ever shrink.
    """
    if state.status is not Status.AMBIGUOUS:
        raise ValueError(f"cannot observe on a {state.status.value} state")
    gaps = state.table.gaps
    m = len(state.observed) + 1
    n = state.table.count
    survivors = frozenset(
        p
        for p in state.candidates
        if p + m <= n and abs(gaps[p + m - 2] - gap) <= state.tolerance
    )
    observed = state.observed + (gap,)
    if not survivors:
        return replace(state, observed=observed, candidates=survivors, status=Status.NO_MATCH)
    if len(survivors) == 1:
        (p,) = survivors
        here = p + m
        return replace(
            state,
            observed=observed,
            candidates=survivors,
            status=Status.IDENTIFIED,
            identified_index=here,
            identified_rho=state.table.events[here - 1].rho,
        )
    return replace(state, observed=observed, candidates=survivors)


def check_no_detection(
    state: IdentifierState, design: CalibrationDesign, wound_since_last: float
) -> tuple[IdentifierState, float | None]:
    """Fallback when the cable winds past the largest possible mark spacing.

    Winding strictly more than d_n - d_0 without a detection means the
    remaining cable is the mark-free distal segment; the length estimate is
    then the last-event length plus that spacing.  The returned state is
    flagged as identified by exhaustion, distinct from sequence
    identification.  Below the threshold nothing changes.
    """
    if state.terminal:
        raise ValueError("state is already terminal")
    spacing = design.marks.distal_reserve - design.proximal_reserve
    if wound_since_last <= spacing:
        return state, None
    estimate = design.rho_at(design.marks.count, 1) + spacing
    new_state = replace(
        state,
        status=Status.IDENTIFIED,
        identified_index=None,
        identified_rho=estimate,
        by_exhaustion=True,
    )
    return new_state, estimate


@dataclass(frozen=True)
class ClosedLoopCorrector:
    """Least-squares encoder correction from identified lengths.

    Each identified detection pairs a true length (the setpoint) with the
    raw register (the measurement).  With two or more samples at distinct
    lengths the register model ``reading = scale * (start_rho - rho) +
    offset`` is fitted, after which raw readings convert back to corrected
    lengths.
    """

    start_rho: float
    samples: tuple[tuple[float, float], ...] = ()

    def _fit(self) -> tuple[float, float] | None:
        distinct = {rho for rho, _ in self.samples}
        if len(distinct) < 2:
            return None
        xs = [self.start_rho - rho for rho, _ in self.samples]
        ys = [reading for _, reading in self.samples]
        n = len(xs)
        mx = sum(xs) / n
        my = sum(ys) / n
        sxx = sum((x - mx) ** 2 for x in xs)
        sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
        scale = sxy / sxx
        offset = my - scale * mx
        return scale, offset

    @property
    def scale(self) -> float | None:
        fit = self._fit()
        return fit[0] if fit else None

    @property
    def offset(self) -> float | None:
        fit = self._fit()
        return fit[1] if fit else None

    def corrected_length(self, reading: float) -> float:
        fit = self._fit()
        if fit is None:
            raise ValueError("corrector needs two samples at distinct lengths")
        scale, offset = fit
        return self.start_rho - (reading - offset) / scale


def corrector_update(
    corrector: ClosedLoopCorrector, identified_rho: float, raw_reading: float
) -> ClosedLoopCorrector:
    """Append one (setpoint, measurement) sample; the fit refreshes lazily."""
    return replace(corrector, samples=corrector.samples + ((identified_rho, raw_reading),))


def run_trace(
    design: CalibrationDesign,
    trace: ObservationTrace,
    tolerance: float = DEFAULT_GAP_TOLERANCE,
) -> CalibrationResult:
    """Replay a trace: eliminate candidates gap by gap, then close the loop.

    The first record arms the identifier; each further record contributes
    the encoder-measured gap.  On identification every record maps back to
    a table event, all of them feed the encoder corrector, and the stroke
    is the table length wound from the first to the identifying detection.
    A trace that ends ambiguous falls back to the exhaustion estimate when
    the drive continued far enough past the last detection.
    """
    table = rectify(enumerate_events(design))
    records = trace.records

    if not records:
        # A whole drive without one detection: only the distal segment fits.
        if trace.start_rho is not None and trace.stop_rho is not None:
            wound = trace.start_rho - trace.stop_rho
            spacing = design.marks.distal_reserve - design.proximal_reserve
            if wound > spacing:
                estimate = design.rho_at(design.marks.count, 1) + spacing
                return CalibrationResult(
                    "identified_by_exhaustion", estimate, 0, None, ()
                )
        return CalibrationResult("ambiguous", None, 0, None, ())

    state = start(table, tolerance)
    history = [state.candidate_count]
    consumed = 1
    for prev, rec in zip(records, records[1:]):
        state = observe(state, rec.reading - prev.reading)
        consumed += 1
        history.append(state.candidate_count)
        if state.terminal:
            break

    if state.status is Status.AMBIGUOUS and trace.stop_rho is not None:
        last_truth = records[consumed - 1].truth_rho
        if last_truth is not None:
            tail_wound = last_truth - trace.stop_rho
            state, _ = check_no_detection(state, design, tail_wound)

    if state.status is Status.NO_MATCH:
        return CalibrationResult("no_match", None, consumed, None, tuple(history))
    if state.by_exhaustion:
        return CalibrationResult(
            "identified_by_exhaustion",
            state.identified_rho,
            consumed,
            None,
            tuple(history),
        )
    if state.status is not Status.IDENTIFIED:
        return CalibrationResult("ambiguous", None, consumed, None, tuple(history))

    here = state.identified_index
    assert here is not None
    first_index = here - len(state.observed)
    stroke = table.events[first_index - 1].rho - table.events[here - 1].rho

    scale = offset = None
    if trace.start_rho is not None:
        corrector = ClosedLoopCorrector(start_rho=trace.start_rho)
        for offset_in_trace, record in enumerate(records):
            event_index = first_index + offset_in_trace
            if event_index > table.count:
                break
            corrector = corrector_update(
                corrector, table.events[event_index - 1].rho, record.reading
            )
        scale, offset = corrector.scale, corrector.offset

    return CalibrationResult(
        "identified",
        state.identified_rho,
        consumed,
        stroke,
        tuple(history),
        scale,
        offset,
    )
