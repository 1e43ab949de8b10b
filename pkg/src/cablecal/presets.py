"""Reference designs used throughout the tests, docs and shipped configs.

Four desk-scale configurations covering the interesting regimes: constant
gaps everywhere (deliberately non-conforming on gap variability, so every
interior start is ambiguous), variable mark gaps with constant sensor gaps,
variable gaps on both layouts, and a low-support workshop bay whose event
table drives the identification walkthrough in the docs.

Positions are explicit: these are pinned datasets, not generator output.
"""

from __future__ import annotations

from .model import CalibrationDesign, MarkLayout, RobotGeometry, SensorLayout


def medium_cube() -> CalibrationDesign:
    """6 m support over a 6 m cube; two sensors, constant 1 m mark gaps.

    Every detection gap equals 1 m, so winding never disambiguates interior
    starting positions: the canonical why-gaps-must-vary counterexample.
    """
    return CalibrationDesign(
        RobotGeometry(h=6.0, rho_max=11.0, v=1.0, b=1.0),
        SensorLayout((2.0, 5.0)),
        MarkLayout((10.0, 9.0, 8.0, 7.0, 6.0, 5.0)),
    )


def large_cube() -> CalibrationDesign:
    """12 m support over a 12 m cube; three sensors at a constant 3.75 m pitch,
    mark gaps drawn from {0.5, 0.75, 1.0, 1.25, 1.5}."""
    return CalibrationDesign(
        RobotGeometry(h=12.0, rho_max=21.0, v=1.0, b=1.0),
        SensorLayout((4.0, 7.75, 11.5)),
        MarkLayout(
            (20.5, 19.75, 18.75, 17.5, 16.0, 15.5, 14.75, 13.75, 12.5, 11.0, 10.25, 9.75, 9.0)
        ),
    )


def xl_cube() -> CalibrationDesign:
    """18 m support over an 18 m cube; five sensors and mark gaps both variable."""
    return CalibrationDesign(
        RobotGeometry(h=18.0, rho_max=32.0, v=1.0, b=1.0),
        SensorLayout((6.0, 11.0, 14.0, 16.0, 17.75)),
        MarkLayout(
            (31.75, 31.25, 30.5, 29.5, 28.25, 26.75, 25.0, 23.0, 20.75, 18.25, 18.0, 16.75, 15.25, 13.0)
        ),
    )


def workshop() -> CalibrationDesign:
    """3 m support over a 3 x 7 x 10 m bay; the identification walkthrough design."""
    return CalibrationDesign(
        RobotGeometry(h=3.0, rho_max=13.0, v=1.0, b=1.0),
        SensorLayout((1.0, 1.5, 2.75)),
        MarkLayout((12.75, 12.25, 11.5, 10.5, 9.25, 7.75, 6.0, 5.75, 5.25, 4.5, 3.0)),
    )


ALL = {
    "medium-cube": medium_cube,
    "large-cube": large_cube,
    "xl-cube": xl_cube,
    "workshop": workshop,
}
