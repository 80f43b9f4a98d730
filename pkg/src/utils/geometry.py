"""
Geometry for scene builtins: stopping distance and path intersection.
"""

from typing import Sequence, Tuple, Union

import numpy as np

from src.config import DEFAULT_DECELERATION, DEFAULT_REACTION_TIME

Number = Union[int, float]

# Cross products smaller than this count as collinear
COLLINEAR_TOLERANCE = 1e-12


def stopping_distance(speed: Number, reaction_time: Number = DEFAULT_REACTION_TIME,
                      deceleration: Number = DEFAULT_DECELERATION) -> float:
    """
    Distance travelled while reacting and then braking to a stop.

    Args:
        speed: Meters/second, non-negative
        reaction_time: Seconds before braking starts
        deceleration: Braking deceleration, meters/second^2

    Returns:
        speed * reaction_time + speed^2 / (2 * deceleration), in meters

    Raises:
        ValueError: when speed is negative or deceleration is not positive
    """
    if speed < 0:
        raise ValueError(f"negative speed {speed}")
    if deceleration <= 0:
        raise ValueError(f"deceleration must be positive, got {deceleration}")
    return float(speed * reaction_time + speed * speed / (2.0 * deceleration))


def _orientation(p: np.ndarray, q: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Sign of the turn p -> q -> r: 1 counterclockwise, -1 clockwise, 0 collinear."""
    cross = ((q[..., 0] - p[..., 0]) * (r[..., 1] - p[..., 1])
             - (q[..., 1] - p[..., 1]) * (r[..., 0] - p[..., 0]))
    return np.where(np.abs(cross) <= COLLINEAR_TOLERANCE, 0, np.sign(cross))


def _segments(points: Sequence[Tuple[Number, Number]]) -> Tuple[np.ndarray, np.ndarray]:
    array = np.asarray(points, dtype=float).reshape(-1, 2)
    return array[:-1], array[1:]


def path_intersects(a: Sequence[Tuple[Number, Number]], b: Sequence[Tuple[Number, Number]]) -> bool:
    """
    Whether any segment of polyline a touches or crosses any segment of b.

    Every segment pair is tested at once by broadcasting the orientation
    test over an (len(a) - 1) x (len(b) - 1) grid. Endpoint contact counts
    as intersection; collinear segments intersect when their extents overlap.

    Args:
        a: Points of the first path (at least 2)
        b: Points of the second path (at least 2)

    Returns:
        True if the paths intersect
    """
    if len(a) < 2 or len(b) < 2:
        return False
    a_start, a_end = _segments(a)
    b_start, b_end = _segments(b)
    p1, p2 = a_start[:, None, :], a_end[:, None, :]
    p3, p4 = b_start[None, :, :], b_end[None, :, :]

    o1 = _orientation(p1, p2, p3)
    o2 = _orientation(p1, p2, p4)
    o3 = _orientation(p3, p4, p1)
    o4 = _orientation(p3, p4, p2)

    crossing = (o1 * o2 <= 0) & (o3 * o4 <= 0)
    collinear = (o1 == 0) & (o2 == 0) & (o3 == 0) & (o4 == 0)
    overlap = np.all(
        np.maximum(np.minimum(p1, p2), np.minimum(p3, p4))
        <= np.minimum(np.maximum(p1, p2), np.maximum(p3, p4)),
        axis=-1,
    )
    return bool(np.any(np.where(collinear, overlap, crossing)))


def minimum_sampled_distance(a: Sequence[Tuple[Number, Number]], b: Sequence[Tuple[Number, Number]],
                             resolution: float = 0.01) -> float:
    """
    Smallest distance between points sampled along two paths.

    Used as a slow reference for `path_intersects`.

    Args:
        a: First path
        b: Second path
        resolution: Sampling step in meters
    """
    sampled_a = _sample(a, resolution)
    sampled_b = _sample(b, resolution)
    best = np.inf
    # chunk to bound memory
    for start in range(0, len(sampled_a), 512):
        chunk = sampled_a[start:start + 512]
        distances = np.linalg.norm(chunk[:, None, :] - sampled_b[None, :, :], axis=-1)
        best = min(best, float(distances.min()))
    return best


def _sample(points: Sequence[Tuple[Number, Number]], resolution: float) -> np.ndarray:
    starts, ends = _segments(points)
    samples = []
    for start, end in zip(starts, ends):
        steps = max(1, int(np.ceil(np.linalg.norm(end - start) / resolution)))
        fractions = np.linspace(0.0, 1.0, steps + 1)[:, None]
        samples.append(start + fractions * (end - start))
    return np.concatenate(samples)
