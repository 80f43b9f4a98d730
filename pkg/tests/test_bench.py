import pytest
from dateutil.parser import isoparse

from src.config import DEFAULT_AVG_BUDGET_MS, DEFAULT_MAX_BUDGET_MS
from src.core.errors import InputError
from src.processors.bench import run_bench
from src.sources.scenario_parser import load_corpus


@pytest.fixture(scope='module')
def corpus(corpus_dir):
    return load_corpus(corpus_dir)


@pytest.fixture(scope='module')
def report(rulebase, corpus):
    return run_bench(rulebase, corpus, repetitions=1)


def test_rows_per_environment(report, corpus):
    assert [row.environment for row in report.environments] == ['city', 'road', 'residential', 'campus']
    assert report.frames == sum(len(scenario.frames) for scenario in corpus)
    for row in report.environments:
        assert 0 <= row.avg_ms <= row.max_ms


def test_scenario_rows_record_decisions(report):
    rows = {row.scenario: row for row in report.scenarios}
    assert rows['merge_right'].actions == ('brake', 'brake', 'change_lane_right')
    assert len(rows['flashing_red'].latencies_ms) == 7


def test_single_frame_average_equals_maximum(rulebase, load):
    single = run_bench(rulebase, [load('boxed_in')], repetitions=1)
    (row,) = single.environments
    assert row.frames == 1
    assert row.avg_ms == row.max_ms


def test_budgets(report):
    assert report.exceeds(avg_budget_ms=1e9, max_budget_ms=1e9) == []
    assert report.exceeds() == []
    problems = report.exceeds(max_budget_ms=0.0)
    assert len(problems) == 4
    assert problems[0].startswith('city: maximum')


def test_workers_give_the_same_decisions(rulebase, load):
    scenarios = [load('merge_right'), load('right_turn_pedestrian')]
    sequential = run_bench(rulebase, scenarios, repetitions=2)
    threaded = run_bench(rulebase, scenarios, repetitions=2, workers=4)
    assert [row.actions for row in threaded.scenarios] == [row.actions for row in sequential.scenarios]
    assert threaded.workers == 4


def test_report_dict(report):
    data = report.to_dict()
    assert isoparse(data['generated_at']).tzinfo is not None
    assert data['repetitions'] == 1
    assert [row['environment'] for row in data['environments']] == ['city', 'road', 'residential', 'campus']
    assert report.to_dict(generated_at='2024-01-01T00:00:00+00:00')['generated_at'] == '2024-01-01T00:00:00+00:00'


def test_table(report):
    table = report.format_table()
    assert table.splitlines()[0].split() == ['Environment', 'Frames', 'Avg', '(ms)', 'Max', '(ms)']
    assert 'boxed_in [city]:' in table


def test_bad_arguments(rulebase, load):
    with pytest.raises(InputError, match='must be positive'):
        run_bench(rulebase, [load('boxed_in')], repetitions=0)
    with pytest.raises(InputError, match='must be positive'):
        run_bench(rulebase, [load('boxed_in')], workers=0)
    with pytest.raises(InputError, match='no frames'):
        run_bench(rulebase, [], repetitions=1)


def test_corpus_within_default_budgets(report):
    assert report.exceeds(DEFAULT_AVG_BUDGET_MS, DEFAULT_MAX_BUDGET_MS) == []
