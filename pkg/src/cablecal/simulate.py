"""Synthetic winding traces from ground-truth physics plus an imperfect encoder.

The drum encoder integrates rotation times an assumed radius, so its scale
is uncertain and its register starts at an arbitrary offset.  The simulator
produces the detection instants analytically from the design and corrupts
only the encoder readings: scale error, offset and per-reading Gaussian
jitter drawn from a seeded Mersenne Twister (MT19937, Python's ``random``),
so traces are reproducible bit-for-bit across platforms.
"""

from __future__ import annotations

import io
import random
from dataclasses import dataclass

from .events import enumerate_events, rectify
from .model import GEOM_TOL, CalibrationDesign

TRACE_CSV_HEADER = "t,encoder_reading,truth_rho,truth_i,truth_j"


@dataclass(frozen=True)
class EncoderModel:
    """Incremental drum encoder with unknown scale and start offset.

    scale     multiplier on true wound length (unknown effective radius)
    offset    register value at the start of the drive
    noise_sd  standard deviation of per-reading jitter, metres
    seed      jitter stream seed
    """

    scale: float = 1.0
    offset: float = 0.0
    noise_sd: float = 0.0
    seed: int = 0

    def __post_init__(self) -> None:
        if self.scale <= 0:
            raise ValueError(f"encoder scale must be positive, got {self.scale}")
        if self.noise_sd < 0:
            raise ValueError(f"noise_sd must be non-negative, got {self.noise_sd}")


@dataclass(frozen=True)
class TraceRecord:
    """One detection: time, encoder register, and ground truth when known.

    Imported hardware logs lack the truth columns, hence the Nones.
    """

    t: float
    reading: float
    truth_rho: float | None = None
    truth_i: int | None = None
    truth_j: int | None = None


@dataclass(frozen=True)
class ObservationTrace:
    """Detections from one continuous winding drive."""

    records: tuple[TraceRecord, ...]
    start_rho: float | None
    stop_rho: float | None
    direction: str = "wind"

    def __post_init__(self) -> None:
        for a, b in zip(self.records, self.records[1:]):
            if b.t <= a.t:
                raise ValueError("trace times must strictly increase")
            if (
                a.truth_rho is not None
                and b.truth_rho is not None
                and b.truth_rho >= a.truth_rho
            ):
                raise ValueError("truth lengths must strictly decrease while winding")

    @property
    def count(self) -> int:
        return len(self.records)


def simulate(
    design: CalibrationDesign,
    encoder: EncoderModel,
    start_rho: float,
    stop_rho: float,
) -> ObservationTrace:
    """Wind from start_rho down to stop_rho and record every detection.

    Events are the design's rectified detections whose free length lies in
    [stop_rho, start_rho]; simultaneous truth events collapse to the single
    rectified survivor, since one physical instant yields one record.  The
    encoder register reads ``offset + scale * wound + jitter``.  Equal start
    and stop produce an empty trace.  Deterministic for a given seed.
    """
    g = design.geometry
    if not (g.b - GEOM_TOL <= stop_rho <= start_rho <= g.rho_max + GEOM_TOL):
        raise ValueError(
            f"need b <= stop_rho <= start_rho <= rho_max, got "
            f"stop={stop_rho}, start={start_rho} (b={g.b}, rho_max={g.rho_max})"
        )
    if abs(start_rho - stop_rho) <= GEOM_TOL:
        return ObservationTrace((), start_rho, stop_rho)

    table = rectify(enumerate_events(design))
    rng = random.Random(encoder.seed)
    records: list[TraceRecord] = []
    for event in table.events:
        if not (stop_rho - GEOM_TOL <= event.rho <= start_rho + GEOM_TOL):
            continue
        wound = start_rho - event.rho
        jitter = rng.gauss(0.0, encoder.noise_sd) if encoder.noise_sd > 0 else 0.0
        records.append(
            TraceRecord(
                t=wound / g.v,
                reading=encoder.offset + encoder.scale * wound + jitter,
                truth_rho=event.rho,
                truth_i=event.i,
                truth_j=event.j,
            )
        )
    return ObservationTrace(tuple(records), start_rho, stop_rho)


def wound_between(trace: ObservationTrace, a: int, b: int) -> float:
    """Encoder-measured cable wound between records a and b (0-based, a < b).

    This is the identifier's observable; it inherits the encoder's scale
    error and jitter, while any register offset cancels.
    """
    if not 0 <= a < b < trace.count:
        raise IndexError(f"need 0 <= a < b < {trace.count}, got a={a}, b={b}")
    return trace.records[b].reading - trace.records[a].reading


def format_trace_csv(trace: ObservationTrace) -> str:
    """Render a trace as CSV with a metadata comment line.

    Floats use shortest round-trip formatting so re-parsing reproduces the
    trace exactly; truth columns are left empty when unknown.
    """
    lines = []
    meta = []
    if trace.start_rho is not None:
        meta.append(f"start_rho={trace.start_rho!r}")
    if trace.stop_rho is not None:
        meta.append(f"stop_rho={trace.stop_rho!r}")
    meta.append(f"direction={trace.direction}")
    lines.append("# " + " ".join(meta))
    lines.append(TRACE_CSV_HEADER)
    for r in trace.records:
        truth_rho = "" if r.truth_rho is None else repr(r.truth_rho)
        truth_i = "" if r.truth_i is None else str(r.truth_i)
        truth_j = "" if r.truth_j is None else str(r.truth_j)
        lines.append(f"{r.t!r},{r.reading!r},{truth_rho},{truth_i},{truth_j}")
    return "\n".join(lines) + "\n"


def write_trace_csv(trace: ObservationTrace, stream) -> None:
    stream.write(format_trace_csv(trace))


def parse_trace_csv(text: str) -> ObservationTrace:
    """Parse CSV produced by :func:`format_trace_csv`.

    The metadata comment is optional (hardware logs will not have it); the
    drive window is then unknown and exhaustion checks are skipped.
    """
    start_rho: float | None = None
    stop_rho: float | None = None
    direction = "wind"
    lines = [ln for ln in io.StringIO(text).read().splitlines() if ln.strip()]
    if lines and lines[0].startswith("#"):
        for token in lines[0][1:].split():
            key, _, value = token.partition("=")
            if key == "start_rho":
                start_rho = float(value)
            elif key == "stop_rho":
                stop_rho = float(value)
            elif key == "direction":
                direction = value
        lines = lines[1:]
    if not lines or lines[0].strip() != TRACE_CSV_HEADER:
        raise ValueError(f"expected header {TRACE_CSV_HEADER!r}")
    records: list[TraceRecord] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise ValueError(f"line {lineno}: expected 5 columns, got {len(parts)}")
        try:
            records.append(
                TraceRecord(
                    t=float(parts[0]),
                    reading=float(parts[1]),
                    truth_rho=float(parts[2]) if parts[2] else None,
                    truth_i=int(parts[3]) if parts[3] else None,
                    truth_j=int(parts[4]) if parts[4] else None,
                )
            )
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
    return ObservationTrace(tuple(records), start_rho, stop_rho, direction)
