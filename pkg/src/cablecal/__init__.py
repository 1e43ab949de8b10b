"""Cable-length autocalibration toolkit for winch-driven cable robots.

Design mark/sensor layouts, enumerate and rectify detection events, simulate
winding drives with an imperfect incremental encoder, identify the absolute
cable length online by candidate elimination, and search layouts that
minimise the calibration stroke.
"""

from .designer import (
    BuildResult,
    DesignRecipe,
    InfeasibleRecipe,
    build_design,
    distal_reserve,
    first_sensor_height,
    mark_count_estimate,
    place_marks,
    place_sensors,
    sensor_count,
)
from .events import (
    DeltaStats,
    Event,
    EventTable,
    StartStroke,
    StrokeProfile,
    delta_stats,
    detection_time,
    enumerate_events,
    rectify,
    stroke_profile,
)
from .identify import (
    CalibrationResult,
    ClosedLoopCorrector,
    IdentifierState,
    Status,
    awaiting,
    check_no_detection,
    corrector_update,
    first_detection,
    observe,
    run_trace,
    start,
)
from .model import (
    GEOM_TOL,
    CalibrationDesign,
    Condition,
    ConditionReport,
    MarkLayout,
    RobotGeometry,
    SensorLayout,
    validate_design,
)
from .optimize import ObjectiveScore, SearchResult, compare, score, search
from .simulate import (
    EncoderModel,
    ObservationTrace,
    TraceRecord,
    simulate,
    wound_between,
)

__version__ = "0.1.0"
