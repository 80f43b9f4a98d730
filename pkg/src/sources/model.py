"""
Scenario data model: frames of scene observations around the ego vehicle.

All values are immutable. Distances are meters, speeds meters/second, paths
are in the ego frame (x lateral, y longitudinal).
"""

from dataclasses import dataclass
from typing import Optional, Tuple, Union

from src.config import DEFAULT_DECELERATION, DEFAULT_REACTION_TIME
from src.core.errors import ScenarioError

Number = Union[int, float]
LaneId = Union[int, str]
Point = Tuple[Number, Number]


@dataclass(frozen=True)
class Trajectory:
    """Predicted path: ordered (x, y) points."""
    points: Tuple[Point, ...]

    def __len__(self) -> int:
        return len(self.points)


@dataclass(frozen=True)
class TrafficSign:
    """A detected sign; `value` is set for speed_limit(V) signs."""
    kind: str
    value: Optional[Number] = None


@dataclass(frozen=True)
class Intersection:
    kind: str
    signaling: str
    position: str


@dataclass(frozen=True)
class ObjectObs:
    """
    One detected object.

    Attributes:
        id: Object symbol, unique within a frame
        object_class: Member of the object class vocabulary
        lane: Lane id or 'offroad'
        distance_ahead: Signed meters, positive ahead of the ego vehicle
        rel_speed: Signed meters/second, positive when receding
        pred_path: Predicted path, if annotated
    """
    id: str
    object_class: str
    lane: LaneId
    distance_ahead: Number
    rel_speed: Number = 0
    pred_path: Optional[Trajectory] = None


@dataclass(frozen=True)
class Frame:
    """Scene observations at one timestamp."""
    timestamp: int
    ego_speed: Number
    ego_lane: LaneId
    lanes: Tuple[LaneId, ...]
    intent: str
    posted_speed_limit: Optional[Number] = None
    location_class: Optional[str] = None
    objects: Tuple[ObjectObs, ...] = ()
    traffic_light: str = 'none'
    traffic_signs: Tuple[TrafficSign, ...] = ()
    intersection: Optional[Intersection] = None
    arrival_rank: Optional[int] = None
    sensors: Tuple[Tuple[str, Number], ...] = ()
    ego_pred_path: Optional[Trajectory] = None


@dataclass(frozen=True)
class Scenario:
    """
    Named sequence of frames with strictly increasing timestamps.

    `reaction_time` and `deceleration` parameterize the stopping-distance
    model; `environment` tags the scenario for benchmark grouping.
    """
    name: str
    frames: Tuple[Frame, ...]
    reaction_time: Number = DEFAULT_REACTION_TIME
    deceleration: Number = DEFAULT_DECELERATION
    environment: Optional[str] = None
    source: Optional[str] = None

    @property
    def timestamps(self) -> Tuple[int, ...]:
        return tuple(frame.timestamp for frame in self.frames)

    @property
    def environment_class(self) -> str:
        """Declared environment, else the first frame's location class."""
        if self.environment:
            return self.environment
        for frame in self.frames:
            if frame.location_class:
                return frame.location_class
        return 'unknown'

    def frame(self, t: int) -> Frame:
        """
        Frame at timestamp t.

        Raises:
            ScenarioError: when the scenario has no frame t
        """
        for frame in self.frames:
            if frame.timestamp == t:
                return frame
        raise ScenarioError([f"unknown timestamp {t} (scenario has {_span(self.timestamps)})"],
                            self.source)

    def history(self, t: int) -> Tuple[Frame, ...]:
        """Frames up to and including t, oldest first."""
        return tuple(frame for frame in self.frames if frame.timestamp <= t)


def _span(timestamps: Tuple[int, ...]) -> str:
    if not timestamps:
        return 'no frames'
    return f"frames {timestamps[0]}..{timestamps[-1]}"
