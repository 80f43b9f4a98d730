"""
Frame invariant checks.

Every violation is reported; validation never stops at the first problem.
"""

import math
from typing import List, Optional, Sequence

from src.config import (
    INTENTS, INTERSECTION_KINDS, INTERSECTION_POSITIONS, LOCATION_CLASSES,
    OBJECT_CLASSES, OFFROAD_LANE, SENSOR_SIDES, SIGNALING, TRAFFIC_LIGHTS, TRAFFIC_SIGNS,
)
from src.sources.model import Frame, LaneId, Trajectory


def format_lanes(lanes: Sequence[LaneId]) -> str:
    return '[' + ','.join(str(lane) for lane in lanes) + ']'


def validate_path(path: Trajectory, label: str) -> List[str]:
    """Paths need at least 2 finite points with no repeated consecutive point."""
    problems = []
    if len(path.points) < 2:
        problems.append(f"{label} has {len(path.points)} point(s), needs at least 2")
    for x, y in path.points:
        if not (math.isfinite(x) and math.isfinite(y)):
            problems.append(f"{label} has a non-finite point ({x}, {y})")
            break
    for previous, current in zip(path.points, path.points[1:]):
        if previous == current:
            problems.append(f"{label} repeats point ({current[0]}, {current[1]})")
            break
    return problems


def _check_vocabulary(value: Optional[str], vocabulary: Sequence[str], what: str,
                      problems: List[str]) -> None:
    if value is not None and value not in vocabulary:
        problems.append(f"unknown {what} '{value}'")


def validate_frame(frame: Frame) -> List[str]:
    """
    Check every frame invariant.

    Args:
        frame: Frame to check

    Returns:
        Diagnostics, one per violation; empty when the frame is valid
    """
    problems: List[str] = []
    if frame.timestamp < 0:
        problems.append(f"negative timestamp {frame.timestamp}")
    if frame.ego_speed < 0:
        problems.append(f"negative ego speed {frame.ego_speed}")
    if not frame.lanes:
        problems.append("no lanes declared")
    elif len(set(frame.lanes)) != len(frame.lanes):
        problems.append(f"duplicate lane ids in {format_lanes(frame.lanes)}")
    if frame.ego_lane not in frame.lanes:
        problems.append(f"ego lane {frame.ego_lane} not in declared lanes {format_lanes(frame.lanes)}")
    if frame.posted_speed_limit is not None and frame.posted_speed_limit < 0:
        problems.append(f"negative speed limit {frame.posted_speed_limit}")

    _check_vocabulary(frame.intent, INTENTS, 'intent', problems)
    _check_vocabulary(frame.location_class, LOCATION_CLASSES, 'location class', problems)
    _check_vocabulary(frame.traffic_light, TRAFFIC_LIGHTS, 'traffic light', problems)
    for sign in frame.traffic_signs:
        _check_vocabulary(sign.kind, TRAFFIC_SIGNS, 'traffic sign', problems)
        if (sign.kind == 'speed_limit') != (sign.value is not None):
            problems.append(f"traffic sign '{sign.kind}' has a malformed value")
        elif sign.value is not None and sign.value < 0:
            problems.append(f"negative speed_limit sign value {sign.value}")

    if frame.intersection is not None:
        _check_vocabulary(frame.intersection.kind, INTERSECTION_KINDS, 'intersection kind', problems)
        _check_vocabulary(frame.intersection.signaling, SIGNALING, 'intersection signaling', problems)
        _check_vocabulary(frame.intersection.position, INTERSECTION_POSITIONS,
                          'intersection position', problems)
    if frame.arrival_rank is not None:
        if frame.arrival_rank < 1:
            problems.append(f"arrival rank {frame.arrival_rank} must be at least 1")
        if frame.intersection is None:
            problems.append("arrival rank given without an intersection")
        elif frame.intersection.signaling != 'unsignalized':
            problems.append(f"arrival rank given at a {frame.intersection.signaling} intersection")

    for side, distance in frame.sensors:
        _check_vocabulary(side, SENSOR_SIDES, 'sensor side', problems)
        if distance < 0:
            problems.append(f"negative {side} sensor distance {distance}")

    if frame.ego_pred_path is not None:
        problems.extend(validate_path(frame.ego_pred_path, 'ego predicted path'))

    seen = set()
    for obj in frame.objects:
        if obj.id in seen:
            problems.append(f"duplicate object id '{obj.id}'")
        seen.add(obj.id)
        _check_vocabulary(obj.object_class, OBJECT_CLASSES, f"class for object '{obj.id}':", problems)
        if obj.lane != OFFROAD_LANE and obj.lane not in frame.lanes:
            problems.append(
                f"object '{obj.id}' lane {obj.lane} not in declared lanes {format_lanes(frame.lanes)}"
            )
        if obj.pred_path is not None:
            problems.extend(validate_path(obj.pred_path, f"predicted path of object '{obj.id}'"))
    return problems
