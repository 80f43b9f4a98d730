import json
from pathlib import Path

import pytest

from src.config import (
    EXIT_BUDGET_EXCEEDED, EXIT_ENGINE_ERROR, EXIT_INPUT_ERROR, EXIT_LINT_FAILURE, EXIT_OK,
    EXIT_STRATIFICATION_ERROR, OVERLAY_DIR,
)
from src.main import main, parse_arguments
from src.processors.records import RECORD_FIELDS, DecisionRecord


@pytest.fixture
def scenario_path(corpus_dir):
    def _path(name):
        return str(corpus_dir / f"{name}.scn")
    return _path


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text, encoding='utf-8')
    return str(path)


def test_parse_arguments_defaults():
    args = parse_arguments(['bench', 'scenarios'])
    assert args.reps == 10
    assert args.workers == 1
    assert args.overlay == []


def test_decide(capsys, scenario_path):
    assert main(['decide', scenario_path('boxed_in'), '--t', '0']) == EXIT_OK
    assert capsys.readouterr().out.startswith('boxed_in t=0: brake (suggested: ')


def test_decide_explain(capsys, scenario_path):
    assert main(['decide', scenario_path('merge_left'), '--t', '1', '--explain']) == EXIT_OK
    out = capsys.readouterr().out
    assert "QUERY: Does 'suggest_action' hold (for change_lane_left, and 1)?" in out
    assert out.splitlines()[-1] == 'The global constraints hold.'


def test_decide_json(capsys, scenario_path):
    assert main(['decide', scenario_path('right_turn_pedestrian'), '--t', '1', '--format', 'json']) == EXIT_OK
    record = json.loads(capsys.readouterr().out)
    assert record['action'] == 'turn_right'
    assert 'justification' not in record


def test_run(capsys, scenario_path):
    assert main(['run', scenario_path('merge_right'), '--format', 'json']) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert [json.loads(line)['action'] for line in lines] == ['brake', 'brake', 'change_lane_right']


def test_overlay_flag(capsys, scenario_path, tmp_path):
    overlay = write(tmp_path, 'no_brake.rules', "neg_select_action(brake, T) :- self_speed(_, T).\n")
    assert main(['--overlay', overlay, 'decide', scenario_path('boxed_in'), '--t', '0']) == EXIT_OK
    assert ': brake ' not in capsys.readouterr().out


def test_input_errors(capsys, scenario_path, tmp_path):
    assert main(['decide', str(tmp_path / 'absent.scn'), '--t', '0']) == EXIT_INPUT_ERROR
    assert main(['decide', scenario_path('boxed_in'), '--t', '9']) == EXIT_INPUT_ERROR
    broken = write(tmp_path, 'broken.scn', "frame(0).\nself_speed(10, 0)\n")
    assert main(['run', broken]) == EXIT_INPUT_ERROR
    assert capsys.readouterr().out == ''


def test_engine_error(tmp_path, scenario_path):
    overlay = write(tmp_path, 'unsafe.rules',
                    "neg_suggest_action(A, T) :- action(A), not gate(X), self_speed(_, T).\ngate(open).\n")
    assert main(['--overlay', overlay, 'decide', scenario_path('boxed_in'), '--t', '0']) == EXIT_ENGINE_ERROR


def test_check_catalog(capsys):
    assert main(['check']) == EXIT_OK
    out = capsys.readouterr().out
    assert any(line.startswith('BR-195') for line in out.splitlines())
    assert out.splitlines()[-1].endswith('0 warning(s)')


def test_check_overlay(capsys):
    assert main(['check', str(Path(OVERLAY_DIR) / 'no_turn_on_red.rules')]) == EXIT_OK
    assert 'TR-NO-RED' in capsys.readouterr().out


def test_check_standalone(capsys, tmp_path):
    good = write(tmp_path, 'good.rules', "p(a).\nq(X) :- p(X), not r(X).\nr(b).\n")
    assert main(['check', '--standalone', good]) == EXIT_OK
    assert capsys.readouterr().out == '3 rules, 2 strata, 0 warning(s)\n'


def test_check_rejects_naf_head(tmp_path):
    bad = write(tmp_path, 'bad.rules', "p(a).\nnot q(a) :- p(a).\n")
    assert main(['check', '--standalone', bad]) == EXIT_INPUT_ERROR


def test_check_rejects_negation_cycle(tmp_path):
    loop = write(tmp_path, 'loop.rules', "p :- not q.\nq :- not p.\n")
    assert main(['check', '--standalone', loop]) == EXIT_STRATIFICATION_ERROR
    assert main(['check', loop]) == EXIT_STRATIFICATION_ERROR


def test_check_strict(tmp_path):
    sloppy = write(tmp_path, 'sloppy.rules', "slow_zone(T) :- school_zone(T).\n")
    assert main(['check', sloppy]) == EXIT_OK
    assert main(['check', '--strict', sloppy]) == EXIT_LINT_FAILURE
    assert main(['check', '--standalone', '--strict', sloppy]) == EXIT_LINT_FAILURE


def test_check_standalone_needs_files():
    assert main(['check', '--standalone']) == EXIT_INPUT_ERROR


def test_bench(capsys, corpus_dir):
    assert main(['bench', str(corpus_dir), '--reps', '1', '--assert-avg-ms', '1e9',
                 '--assert-max-ms', '1e9']) == EXIT_OK
    assert capsys.readouterr().out.startswith('Environment')
    assert main(['bench', str(corpus_dir), '--reps', '1', '--assert-max-ms', '0']) == EXIT_BUDGET_EXCEEDED


def test_bench_json(capsys, tmp_path, scenario_path):
    corpus = tmp_path / 'corpus'
    corpus.mkdir()
    (corpus / 'boxed_in.scn').write_text(Path(scenario_path('boxed_in')).read_text(encoding='utf-8'),
                                      encoding='utf-8')
    assert main(['bench', str(corpus), '--reps', '2', '--workers', '2', '--format', 'json']) == EXIT_OK
    report = json.loads(capsys.readouterr().out)
    assert report['environments'][0]['frames'] == 1
    assert report['scenarios'][0]['frames'][0]['action'] == 'brake'


def test_bench_empty_corpus(tmp_path):
    assert main(['bench', str(tmp_path)]) == EXIT_INPUT_ERROR


def test_bench_rejects_non_positive_counts(capsys, corpus_dir):
    assert main(['bench', str(corpus_dir), '--reps', '0']) == EXIT_INPUT_ERROR
    assert main(['bench', str(corpus_dir), '--workers', '0']) == EXIT_INPUT_ERROR
    assert capsys.readouterr().out == ''


def test_undecodable_files_are_input_errors(capsys, tmp_path, scenario_path):
    binary_scenario = tmp_path / 'binary.scn'
    binary_scenario.write_bytes(b'\xff\xfe')
    binary_rules = tmp_path / 'binary.rules'
    binary_rules.write_bytes(b'\xff\xfe')
    assert main(['decide', str(binary_scenario), '--t', '0']) == EXIT_INPUT_ERROR
    assert main(['--overlay', str(binary_rules), 'decide', scenario_path('boxed_in'), '--t', '0']) == EXIT_INPUT_ERROR
    assert main(['check', '--standalone', str(binary_rules)]) == EXIT_INPUT_ERROR
    assert 'not valid UTF-8' in capsys.readouterr().err


def test_unknown_action_in_overlay(tmp_path, scenario_path):
    overlay = write(tmp_path, 'hover.rules', "action(hover).\nselect_action(hover, T) :- self_speed(_, T).\n")
    assert main(['--overlay', overlay, 'decide', scenario_path('boxed_in'), '--t', '0']) == EXIT_ENGINE_ERROR
    assert main(['check', '--strict', overlay]) == EXIT_LINT_FAILURE


def test_check_accepts_a_directory(capsys, tmp_path):
    write(tmp_path, 'a.rules', "p(a).\n")
    write(tmp_path, 'b.rules', "q(X) :- p(X).\n")
    assert main(['check', '--standalone', str(tmp_path)]) == EXIT_OK
    assert capsys.readouterr().out == '2 rules, 1 strata, 0 warning(s)\n'


@pytest.mark.parametrize('name', ['merge_right', 'flashing_red', 'city_crosswalk'])
def test_run_matches_decide_per_frame(capsys, scenario_path, name):
    assert main(['run', scenario_path(name), '--format', 'json', '--explain']) == EXIT_OK
    replayed = [DecisionRecord.from_json(line) for line in capsys.readouterr().out.splitlines()]
    decided = []
    for record in replayed:
        assert main(['decide', scenario_path(name), '--t', str(record.t),
                     '--format', 'json', '--explain']) == EXIT_OK
        decided.append(DecisionRecord.from_json(capsys.readouterr().out))
    assert [record.without_latency() for record in replayed] == \
        [record.without_latency() for record in decided]


def test_json_output_carries_no_diagnostics(capsys, scenario_path):
    assert main(['--verbose', 'run', scenario_path('animal_ahead_blocked'), '--format', 'json']) == EXIT_OK
    captured = capsys.readouterr()
    lines = captured.out.splitlines()
    assert lines
    for line in lines:
        assert set(json.loads(line)) <= set(RECORD_FIELDS)
    assert 'DEBUG' in captured.err
