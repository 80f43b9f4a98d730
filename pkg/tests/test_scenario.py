import pytest

from src.core.errors import InputError, ParseError, ScenarioError
from src.sources.model import Intersection, Trajectory
from src.sources.scenario_parser import load_corpus, load_scenario, parse_scenario

FRAME = ("frame({t}).\n"
         "self_speed(10, {t}).\n"
         "self_lane(2, {t}).\n"
         "lanes([1, 2], {t}).\n"
         "intent(continue_in_lane, {t}).\n")


def frames(*timestamps):
    return ''.join(FRAME.format(t=t) for t in timestamps)


def diagnostics(text):
    with pytest.raises(ScenarioError) as excinfo:
        parse_scenario(text, 'bad.scn')
    return excinfo.value.diagnostics


def test_parses_shipped_scenario(load):
    scenario = load('right_turn_pedestrian')
    assert scenario.name == 'right_turn_pedestrian'
    assert scenario.environment_class == 'city'
    assert scenario.timestamps == (0, 1)
    frame = scenario.frame(0)
    assert frame.intent == 'enter_right_lane'
    assert frame.intersection == Intersection('t_junction_major', 'unsignalized', 'at')
    assert frame.ego_pred_path == Trajectory(((0, 0), (5, 0), (10, -5)))
    (pedestrian,) = frame.objects
    assert pedestrian.object_class == 'pedestrian'
    assert pedestrian.lane == 'offroad'
    assert pedestrian.distance_ahead == 8.0


def test_header_directives():
    text = ("#scenario(night_drive).\n#environment(road).\n#first_frame(100).\n"
            "#reaction_time(1.5).\n#decel(5.0).\n") + frames(100, 101)
    scenario = parse_scenario(text)
    assert scenario.name == 'night_drive'
    assert scenario.environment == 'road'
    assert scenario.timestamps == (100, 101)
    assert (scenario.reaction_time, scenario.deceleration) == (1.5, 5.0)


def test_name_falls_back_to_source_stem():
    assert parse_scenario(frames(0), 'corpus/merge.scn').name == 'merge'


def test_defaults_for_optional_facts():
    frame = parse_scenario(frames(0)).frame(0)
    assert frame.traffic_light == 'none'
    assert frame.objects == ()
    assert frame.posted_speed_limit is None


def test_timestamps_must_be_contiguous():
    problems = diagnostics(frames(0, 2))
    assert any('frame 2 found where frame 1 was expected' in problem for problem in problems)


def test_facts_must_carry_their_frame_timestamp():
    problems = diagnostics(frames(0).replace('self_speed(10, 0)', 'self_speed(10, 3)'))
    assert any("stated under frame(0)" in problem for problem in problems)


def test_every_problem_is_reported():
    text = ("self_speed(1, 0).\n"
            + frames(0)
            + "warp_drive(on, 0).\n"
            + "intent(fly, 0).\n"
            + "obj_lane(ghost, 1, 0).\n")
    problems = diagnostics(text)
    assert any('before the first frame' in problem for problem in problems)
    assert any('unknown predicate warp_drive/2' in problem for problem in problems)
    assert any("unknown intent 'fly'" in problem for problem in problems)
    assert any("object 'ghost' used before obj" in problem for problem in problems)
    assert len(problems) >= 4


def test_missing_mandatory_fact():
    text = frames(0).replace("intent(continue_in_lane, 0).\n", '')
    assert 'frame 0: missing intent fact' in diagnostics(text)


def test_incomplete_object():
    text = frames(0) + "obj(car1, 0).\nclass(car1, car).\n"
    problems = diagnostics(text)
    assert any("object 'car1'" in problem and 'obj_lane' in problem and 'obj_distance' in problem
               for problem in problems)


def test_frame_invariants_are_validated():
    text = frames(0).replace('self_lane(2, 0)', 'self_lane(5, 0)')
    assert 'frame 0: ego lane 5 not in declared lanes [1,2]' in diagnostics(text)


def test_rules_are_not_scenario_facts():
    problems = diagnostics(frames(0) + "p(X) :- q(X).\n")
    assert any('facts only' in problem for problem in problems)


def test_empty_scenario():
    assert 'scenario has no frames' in diagnostics("#scenario(empty).\n")


def test_unknown_directive():
    problems = diagnostics("#weather(rain).\n" + frames(0))
    assert any('unknown directive #weather' in problem for problem in problems)


def test_syntax_errors_surface_as_parse_errors():
    with pytest.raises(ParseError):
        parse_scenario("frame(0)\nself_speed(10, 0).", 'bad.scn')


def test_unknown_timestamp():
    scenario = parse_scenario(frames(0, 1), 'two.scn')
    with pytest.raises(ScenarioError, match='unknown timestamp 7'):
        scenario.frame(7)


def test_load_missing_file(tmp_path):
    with pytest.raises(InputError, match='cannot read scenario'):
        load_scenario(tmp_path / 'absent.scn')


def test_load_corpus(tmp_path, corpus_dir):
    with pytest.raises(InputError, match='no scenario files found'):
        load_corpus(tmp_path)
    corpus = load_corpus(corpus_dir)
    assert len(corpus) == 18
    assert {scenario.environment_class for scenario in corpus} == {'city', 'road', 'residential', 'campus'}
