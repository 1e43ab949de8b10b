"""Geometric domain model for instrumented-cable autocalibration designs.

The cable runs from the winch centre O, over the support top A, down to the
platform attachment B.  Metallic marks are fixed on the cable at known
distances from B; inductive sensors sit on the support at known heights above
O.  Every sensor/mark meeting pins the free cable length exactly, which is
what the rest of the toolkit exploits.

All lengths are metres, speeds metres per second.  Indices are 1-based to
match the usual engineering drawings: mark 1 is the one farthest from B,
sensor 1 the lowest on the support.
"""

from __future__ import annotations

from dataclasses import dataclass

# Equality tolerance for geometric checks.  Desk-scale layouts are specified
# as exact quarter-metre rationals, so this only needs to absorb binary
# floating-point noise.
GEOM_TOL = 1e-9

_CONDITION_NAMES = ("C1", "C2", "C3", "C4", "C5", "C6", "C7")


@dataclass(frozen=True)
class RobotGeometry:
    """Winch and support geometry of a single cable run.

    h         support height ||OA||
    rho_max   maximum free cable length ||AB||
    v         constant winding speed used during calibration
    b         boost reserve that keeps the platform off the support at the
              final detection
    """

    h: float
    rho_max: float
    v: float = 1.0
    b: float = 1.0

    def __post_init__(self) -> None:
        if self.h <= 0:
            raise ValueError(f"support height must be positive, got {self.h}")
        if self.rho_max <= 0:
            raise ValueError(f"rho_max must be positive, got {self.rho_max}")
        if self.v <= 0:
            raise ValueError(f"winding speed must be positive, got {self.v}")
        if self.b < 0:
            raise ValueError(f"boost must be non-negative, got {self.b}")

    @property
    def l_max(self) -> float:
        """Total cable length to provision: support height plus max free length."""
        return self.h + self.rho_max


@dataclass(frozen=True)
class SensorLayout:
    """Sensor heights ||OS_j|| above the winch centre, strictly ascending."""

    heights: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.heights:
            raise ValueError("a layout needs at least one sensor")
        if any(x <= 0 for x in self.heights):
            raise ValueError(f"sensor heights must be positive: {self.heights}")
        for lo, hi in zip(self.heights, self.heights[1:]):
            if hi <= lo:
                raise ValueError(
                    f"sensor heights must strictly ascend, got {lo} before {hi}"
                )

    @property
    def count(self) -> int:
        return len(self.heights)

    @property
    def gaps(self) -> tuple[float, ...]:
        """Distances z_j between successive sensors (empty for one sensor)."""
        return tuple(hi - lo for lo, hi in zip(self.heights, self.heights[1:]))

    def height(self, j: int) -> float:
        """||OS_j|| for 1-based sensor index j."""
        if not 1 <= j <= len(self.heights):
            raise IndexError(f"sensor index {j} out of range 1..{len(self.heights)}")
        return self.heights[j - 1]


@dataclass(frozen=True)
class MarkLayout:
    """Mark distances ||BM_i|| from the platform end, strictly descending.

    Mark 1 is farthest from B (nearest the support at full extension); the
    last mark defines the distal reserve d_n = ||BM_n||.
    """

    positions: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.positions:
            raise ValueError("a layout needs at least one mark")
        if any(x <= 0 for x in self.positions):
            raise ValueError(f"mark positions must be positive: {self.positions}")
        for hi, lo in zip(self.positions, self.positions[1:]):
            if lo >= hi:
                raise ValueError(
                    f"mark positions must strictly descend, got {hi} before {lo}"
                )

    @property
    def count(self) -> int:
        return len(self.positions)

    @property
    def gaps(self) -> tuple[float, ...]:
        """Distances d_i between successive marks (empty for one mark)."""
        return tuple(hi - lo for hi, lo in zip(self.positions, self.positions[1:]))

    @property
    def distal_reserve(self) -> float:
        """d_n: distance from B to the last mark."""
        return self.positions[-1]

    def position(self, i: int) -> float:
        """||BM_i|| for 1-based mark index i."""
        if not 1 <= i <= len(self.positions):
            raise IndexError(f"mark index {i} out of range 1..{len(self.positions)}")
        return self.positions[i - 1]


@dataclass(frozen=True)
class CalibrationDesign:
    """A complete geometry + sensor + mark configuration.

    Construction only enforces structural sanity (ordered layouts, sensors on
    the support).  Conformance to the placement conditions C1..C7 is a
    report, not a constructor error: non-conforming designs are legitimate
    objects of study and some are shipped as fixtures.
    """

    geometry: RobotGeometry
    sensors: SensorLayout
    marks: MarkLayout

    def __post_init__(self) -> None:
        top = self.sensors.heights[-1]
        if top >= self.geometry.h:
            raise ValueError(
                f"top sensor at {top} must sit below the support top h={self.geometry.h}"
            )

    @property
    def proximal_reserve(self) -> float:
        """d_0: distance from A to the first mark at full extension."""
        return self.geometry.rho_max - self.marks.positions[0]

    def rho_at(self, i: int, j: int) -> float:
        """Free cable length ||AB|| when mark i sits at sensor j.

        May be negative for non-conforming designs; callers filter to the
        physical winding window.
        """
        return self.marks.position(i) - (self.geometry.h - self.sensors.height(j))


@dataclass(frozen=True)
class Condition:
    """Outcome of one placement condition check."""

    name: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class ConditionReport:
    """Pass/fail verdicts for the seven placement conditions C1..C7."""

    conditions: tuple[Condition, ...]

    def __post_init__(self) -> None:
        names = tuple(c.name for c in self.conditions)
        if names != _CONDITION_NAMES:
            raise ValueError(f"report must contain exactly C1..C7, got {names}")

    def __getitem__(self, name: str) -> Condition:
        for cond in self.conditions:
            if cond.name == name:
                return cond
        raise KeyError(name)

    def __iter__(self):
        return iter(self.conditions)

    def passed(self, *names: str) -> bool:
        return all(self[n].passed for n in names)

    @property
    def hard_pass(self) -> bool:
        """True when the mandatory conditions C1..C5 all hold."""
        return self.passed("C1", "C2", "C3", "C4", "C5")

    @property
    def soft_failures(self) -> tuple[str, ...]:
        """Variability conditions (C6/C7) that failed; a warning, not an error."""
        return tuple(n for n in ("C6", "C7") if not self[n].passed)

    @property
    def all_pass(self) -> bool:
        return all(c.passed for c in self.conditions)


def validate_design(design: CalibrationDesign, tol: float = GEOM_TOL) -> ConditionReport:
    """Check the seven placement conditions and report each verdict.

    C1  d_0 is the smallest gap of the whole mark layout and the top sensor
        sits exactly d_0 below the support top.
    C2  no two successive marks coincide.
    C3  the distal reserve satisfies h - ||OS_1|| - d_n + b = 0, so the last
        detection leaves exactly the boost length free.
    C4  no two successive sensors coincide.
    C5  after resolving simultaneous detections, every instant maps to one
        event with a strictly positive length gap (checked by enumerating the
        design's event table).
    C6  successive mark gaps differ (gap variability on the cable).
    C7  successive sensor gaps differ (gap variability on the support).

    Pure: identical input yields an identical report.
    """
    g = design.geometry
    d_gaps = design.marks.gaps
    z_gaps = design.sensors.gaps
    d0 = design.proximal_reserve
    dn = design.marks.distal_reserve
    top_sensor = design.sensors.heights[-1]

    checks: list[Condition] = []

    # C1: d_0 = min of {d_0} U {d_i}, and ||OS_n|| = h - d_0.
    problems = []
    if d0 <= tol:
        problems.append(f"d0={d0:.6g} is not positive")
    if d_gaps and min(d_gaps) < d0 - tol:
        problems.append(f"d0={d0:.6g} exceeds smallest mark gap {min(d_gaps):.6g}")
    if abs(top_sensor - (g.h - d0)) > tol:
        problems.append(
            f"top sensor at {top_sensor:.6g}, expected h-d0={g.h - d0:.6g}"
        )
    checks.append(
        Condition("C1", not problems, "; ".join(problems) or f"d0={d0:.6g}")
    )

    # C2: successive marks must not superpose.
    bad = [idx + 1 for idx, gap in enumerate(d_gaps) if gap <= tol]
    checks.append(
        Condition(
            "C2",
            not bad,
            f"zero mark gaps after marks {bad}" if bad else f"{len(d_gaps)} mark gaps",
        )
    )

    # C3: h - ||OS_1|| - d_n + b = 0.
    residual = g.h - design.sensors.heights[0] - dn + g.b
    checks.append(
        Condition(
            "C3",
            abs(residual) <= tol,
            f"h-OS1-dn+b = {residual:.6g}" + ("" if abs(residual) <= tol else " (should be 0)"),
        )
    )

    # C4: successive sensors must not superpose.
    bad = [idx + 1 for idx, gap in enumerate(z_gaps) if gap <= tol]
    checks.append(
        Condition(
            "C4",
            not bad,
            f"zero sensor gaps after sensors {bad}" if bad else f"{len(z_gaps)} sensor gaps",
        )
    )

    # C5: one event per instant once simultaneities are resolved.
    from . import events as _events  # local import: events builds on this module

    raw = _events.enumerate_events(design)
    rect = _events.rectify(raw)
    residual_ties = sum(1 for gap in rect.gaps if gap <= tol)
    merged = raw.count - rect.count
    checks.append(
        Condition(
            "C5",
            residual_ties == 0,
            f"{merged} simultaneous detections resolved, {rect.count} exploitable events"
            + (f"; {residual_ties} unresolved ties" if residual_ties else ""),
        )
    )

    # C6: successive mark gaps must differ.
    bad = [
        idx + 1
        for idx, (a, b_) in enumerate(zip(d_gaps, d_gaps[1:]))
        if abs(b_ - a) <= tol
    ]
    checks.append(
        Condition(
            "C6",
            not bad,
            f"equal successive mark gaps at {bad}" if bad else "mark gaps vary",
        )
    )

    # C7: successive sensor gaps must differ.
    bad = [
        idx + 1
        for idx, (a, b_) in enumerate(zip(z_gaps, z_gaps[1:]))
        if abs(b_ - a) <= tol
    ]
    checks.append(
        Condition(
            "C7",
            not bad,
            f"equal successive sensor gaps at {bad}" if bad else "sensor gaps vary",
        )
    )

    return ConditionReport(tuple(checks))
