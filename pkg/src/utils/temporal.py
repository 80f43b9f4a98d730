"""Reasoning over the sequence of traffic-light observations."""

from typing import Sequence

from src.config import FLASHING_MIN_CHANGES, FLASHING_WINDOW

_FLASHING_STATES = frozenset({'red', 'none'})


def count_flash_changes(history: Sequence[str]) -> int:
    """Number of consecutive red <-> none changes in a light history."""
    changes = 0
    for previous, current in zip(history, history[1:]):
        if previous != current and {previous, current} == _FLASHING_STATES:
            changes += 1
    return changes


def detect_flashing(history: Sequence[str], window: int = FLASHING_WINDOW,
                    min_changes: int = FLASHING_MIN_CHANGES) -> bool:
    """
    Whether a red light is flashing.

    Args:
        history: Traffic-light values, oldest first
        window: Number of trailing observations considered
        min_changes: Red/none alternations needed inside the window

    Returns:
        True when the trailing window holds at least `min_changes` changes
    """
    recent = list(history)[-window:]
    return count_flash_changes(recent) >= min_changes
