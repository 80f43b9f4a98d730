"""Shared fixtures for the test suite."""

from pathlib import Path
from typing import Iterable

import pytest

from src.config import SCENARIO_DIR
from src.processors.rulebase import Rulebase, load_rulebase
from src.sources.model import Frame, ObjectObs, Scenario
from src.sources.scenario_parser import load_scenario


@pytest.fixture(scope='session')
def rulebase() -> Rulebase:
    return load_rulebase()


@pytest.fixture(scope='session')
def corpus_dir() -> Path:
    return Path(SCENARIO_DIR)


@pytest.fixture
def load():
    """Load a shipped scenario by name."""
    def _load(name: str) -> Scenario:
        return load_scenario(Path(SCENARIO_DIR) / f"{name}.scn")
    return _load


def make_frame(t: int = 0, **fields) -> Frame:
    """A plain frame: 10 m/s in lane 2 of [1, 2, 3] on a road, keeping the lane."""
    values = dict(ego_speed=10, ego_lane=2, lanes=(1, 2, 3), intent='continue_in_lane',
                  location_class='road')
    values.update(fields)
    return Frame(timestamp=t, **values)


def make_object(oid: str, object_class: str, lane, distance, rel_speed=0, pred_path=None) -> ObjectObs:
    return ObjectObs(oid, object_class, lane, distance, rel_speed, pred_path)


def make_scenario(frames: Iterable[Frame], name: str = 'test', **fields) -> Scenario:
    return Scenario(name, tuple(frames), **fields)
