import json

import pytest

from src.core.errors import InputError
from src.processors.decision import decide
from src.processors.records import RECORD_FIELDS, DecisionRecord


@pytest.fixture
def merge_decision(rulebase, load):
    return decide(rulebase, load('merge_left'), 1)


def test_record_summarizes_decision(merge_decision):
    record = DecisionRecord.from_decision(merge_decision)
    assert (record.scenario, record.t, record.action) == ('merge_left', 1, 'change_lane_left')
    assert record.suggested == ('accelerate', 'change_lane_left')
    assert record.justification is None
    assert record.latency_ms >= 0


def test_json_line_field_order(merge_decision):
    line = DecisionRecord.from_decision(merge_decision, explain=True).to_json()
    assert '\n' not in line
    assert list(json.loads(line)) == list(RECORD_FIELDS)


def test_justification_is_omitted_unless_requested(merge_decision):
    assert 'justification' not in json.loads(DecisionRecord.from_decision(merge_decision).to_json())


def test_json_round_trip(merge_decision):
    record = DecisionRecord.from_decision(merge_decision, explain=True, max_depth=3)
    assert DecisionRecord.from_json(record.to_json()) == record


def test_invalid_records():
    with pytest.raises(InputError, match='invalid decision record'):
        DecisionRecord.from_json('{not json')
    with pytest.raises(InputError, match='expected an object'):
        DecisionRecord.from_json('[1, 2]')
    with pytest.raises(InputError, match='missing action'):
        DecisionRecord.from_json('{"scenario": "s", "t": 0, "suggested": [], "latency_ms": 1.0}')


def test_text_format():
    record = DecisionRecord('boxed_in', 0, 'brake', ('brake',), 1.23456)
    assert record.format_text() == 'boxed_in t=0: brake (suggested: brake; 1.23 ms)\n'
    empty = DecisionRecord('s', 0, 'cruise', (), 0.5, 'why\n')
    assert empty.format_text() == 's t=0: cruise (suggested: none; 0.50 ms)\nwhy\n'


def test_runs_compare_without_latency(rulebase, load):
    scenario = load('merge_right')
    first = [DecisionRecord.from_decision(decide(rulebase, scenario, t)).without_latency()
             for t in scenario.timestamps]
    second = [DecisionRecord.from_decision(decide(rulebase, scenario, t)).without_latency()
              for t in scenario.timestamps]
    assert first == second
