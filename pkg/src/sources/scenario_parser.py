"""
Scenario file parser.

A `.scn` file uses the clause syntax of the rulebase. Each frame starts with
`frame(T).` and is followed by ground scene facts whose last argument is T
(`class(Object, Class)` carries no timestamp). Header directives:

    #scenario(name).  #environment(city).  #first_frame(100).
    #reaction_time(1.5).  #decel(5.0).
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from src.config import (
    DEFAULT_DECELERATION, DEFAULT_REACTION_TIME, INTENTS, INTERSECTION_KINDS,
    INTERSECTION_POSITIONS, LOCATION_CLASSES, MANDATORY_FRAME_FACTS, OBJECT_CLASSES,
    SENSOR_SIDES, SIGNALING, TRAFFIC_LIGHTS,
)
from src.core.errors import InputError, ScenarioError
from src.core.parser import parse_clauses
from src.core.program import Directive
from src.core.terms import Atom, Compound, Num, PredicateKey, Sym, Term, is_ground, seq_to_list
from src.sources.model import (
    Frame, Intersection, LaneId, Number, ObjectObs, Scenario, TrafficSign, Trajectory,
)
from src.sources.validation import validate_frame
from src.utils.file_utils import find_scenario_files, read_text

logger = logging.getLogger(__name__)

# Scene facts whose last argument is not a timestamp
_UNTIMED = {('class', 2)}


class _FactError(Exception):
    """A scenario fact has a bad value."""


@dataclass
class _ObjectBuilder:
    id: str
    line: int
    object_class: Optional[str] = None
    lane: Optional[LaneId] = None
    distance_ahead: Optional[Number] = None
    rel_speed: Number = 0
    pred_path: Optional[Trajectory] = None


@dataclass
class _FrameBuilder:
    timestamp: int
    line: int
    values: Dict[str, object] = field(default_factory=dict)
    signs: List[TrafficSign] = field(default_factory=list)
    sensors: List[Tuple[str, Number]] = field(default_factory=list)
    objects: Dict[str, _ObjectBuilder] = field(default_factory=dict)
    failed: bool = False
    fact_line: int = 0

    def set_once(self, name: str, value: object) -> None:
        if name in self.values:
            raise _FactError(f"duplicate {name} fact in frame {self.timestamp}")
        self.values[name] = value

    def object(self, term: Term) -> _ObjectBuilder:
        oid = _symbol(term, 'object id')
        if oid not in self.objects:
            raise _FactError(f"object '{oid}' used before obj({oid}, {self.timestamp})")
        return self.objects[oid]


# Term readers

def _number(term: Term, what: str) -> Number:
    if not isinstance(term, Num):
        raise _FactError(f"{what} must be a number, got '{term}'")
    return term.value


def _symbol(term: Term, what: str) -> str:
    if not isinstance(term, Sym):
        raise _FactError(f"{what} must be a symbol, got '{term}'")
    return term.name


def _member(term: Term, vocabulary: Tuple[str, ...], what: str) -> str:
    value = _symbol(term, what)
    if value not in vocabulary:
        raise _FactError(f"unknown {what} '{value}'")
    return value


def _lane(term: Term) -> LaneId:
    if isinstance(term, Num) and isinstance(term.value, int):
        return term.value
    if isinstance(term, Sym):
        return term.name
    raise _FactError(f"lane id must be an integer or a symbol, got '{term}'")


def _path(term: Term, what: str) -> Trajectory:
    items = seq_to_list(term)
    if items is None:
        raise _FactError(f"{what} must be a list of pt(X, Y), got '{term}'")
    points = []
    for item in items:
        if not (isinstance(item, Compound) and item.functor == 'pt' and len(item.args) == 2):
            raise _FactError(f"{what} must be a list of pt(X, Y), got '{item}'")
        points.append((_number(item.args[0], 'path x'), _number(item.args[1], 'path y')))
    return Trajectory(tuple(points))


# Fact handlers, keyed by predicate

def _self_speed(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('self_speed', _number(args[0], 'ego speed'))


def _self_lane(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('self_lane', _lane(args[0]))


def _lanes(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    items = seq_to_list(args[0])
    if items is None:
        raise _FactError(f"lanes must be a list, got '{args[0]}'")
    frame.set_once('lanes', tuple(_lane(item) for item in items))


def _speed_limit(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('speed_limit', _number(args[0], 'speed limit'))


def _location(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('location', _member(args[0], LOCATION_CLASSES, 'location class'))


def _intent(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('intent', _member(args[0], INTENTS, 'intent'))


def _traffic_light(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('traffic_light', _member(args[0], TRAFFIC_LIGHTS, 'traffic light'))


def _traffic_sign(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    sign = args[0]
    if isinstance(sign, Compound) and sign.functor == 'speed_limit' and len(sign.args) == 1:
        frame.signs.append(TrafficSign('speed_limit', _number(sign.args[0], 'speed_limit sign')))
        return
    frame.signs.append(TrafficSign(_member(sign, ('stop', 'yield', 'merge'), 'traffic sign')))


def _intersection(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('intersection', Intersection(
        _member(args[0], INTERSECTION_KINDS, 'intersection kind'),
        _member(args[1], SIGNALING, 'intersection signaling'),
        _member(args[2], INTERSECTION_POSITIONS, 'intersection position'),
    ))


def _arrival_rank(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    rank = _number(args[0], 'arrival rank')
    if not isinstance(rank, int):
        raise _FactError(f"arrival rank must be an integer, got '{args[0]}'")
    frame.set_once('arrival_rank', rank)


def _sensor(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.sensors.append((_member(args[0], SENSOR_SIDES, 'sensor side'),
                          _number(args[1], 'sensor distance')))


def _self_pred_path(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.set_once('self_pred_path', _path(args[0], 'ego predicted path'))


def _obj(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    oid = _symbol(args[0], 'object id')
    if oid in frame.objects:
        raise _FactError(f"duplicate object id '{oid}'")
    frame.objects[oid] = _ObjectBuilder(oid, frame.fact_line)


def _class(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.object(args[0]).object_class = _member(args[1], OBJECT_CLASSES, 'object class')


def _obj_lane(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.object(args[0]).lane = _lane(args[1])


def _obj_distance(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.object(args[0]).distance_ahead = _number(args[1], 'object distance')


def _obj_rel_speed(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    frame.object(args[0]).rel_speed = _number(args[1], 'object relative speed')


def _obj_pred_path(frame: _FrameBuilder, args: Tuple[Term, ...]) -> None:
    oid = _symbol(args[0], 'object id')
    frame.object(args[0]).pred_path = _path(args[1], f"predicted path of object '{oid}'")


_HANDLERS: Dict[PredicateKey, Callable[[_FrameBuilder, Tuple[Term, ...]], None]] = {
    ('self_speed', 2): _self_speed,
    ('self_lane', 2): _self_lane,
    ('lanes', 2): _lanes,
    ('speed_limit', 2): _speed_limit,
    ('location', 2): _location,
    ('intent', 2): _intent,
    ('traffic_light', 2): _traffic_light,
    ('traffic_sign', 2): _traffic_sign,
    ('intersection', 4): _intersection,
    ('arrival_rank', 2): _arrival_rank,
    ('sensor', 3): _sensor,
    ('self_pred_path', 2): _self_pred_path,
    ('obj', 2): _obj,
    ('class', 2): _class,
    ('obj_lane', 3): _obj_lane,
    ('obj_distance', 3): _obj_distance,
    ('obj_rel_speed', 3): _obj_rel_speed,
    ('obj_pred_path', 3): _obj_pred_path,
}


@dataclass
class _Header:
    name: Optional[str] = None
    environment: Optional[str] = None
    first_frame: int = 0
    reaction_time: Optional[Number] = None
    deceleration: Optional[Number] = None


def _read_header(directives: Tuple[Directive, ...], diagnostics: List[str]) -> _Header:
    header = _Header()
    for directive in directives:
        try:
            if len(directive.args) != 1:
                raise _FactError(f"#{directive.name} takes one argument")
            arg = directive.args[0]
            if directive.name == 'scenario':
                header.name = _symbol(arg, 'scenario name')
            elif directive.name == 'environment':
                header.environment = _member(arg, LOCATION_CLASSES, 'environment class')
            elif directive.name == 'first_frame':
                first = _number(arg, 'first frame')
                if not isinstance(first, int) or first < 0:
                    raise _FactError(f"first frame must be a non-negative integer, got '{arg}'")
                header.first_frame = first
            elif directive.name in ('reaction_time', 'decel'):
                value = _number(arg, directive.name)
                if value <= 0:
                    raise _FactError(f"#{directive.name} must be positive, got {value}")
                if directive.name == 'reaction_time':
                    header.reaction_time = value
                else:
                    header.deceleration = value
            else:
                raise _FactError(f"unknown directive #{directive.name}")
        except _FactError as error:
            diagnostics.append(f"line {directive.line}: {error}")
    return header


def _build_frame(builder: _FrameBuilder, diagnostics: List[str]) -> Optional[Frame]:
    values = builder.values
    problems = [f"missing {name} fact" for name in MANDATORY_FRAME_FACTS if name not in values]
    objects = []
    for obj in builder.objects.values():
        missing = [label for label, value in (('class', obj.object_class), ('obj_lane', obj.lane),
                                              ('obj_distance', obj.distance_ahead))
                   if value is None]
        if missing:
            problems.append(f"object '{obj.id}' (line {obj.line}) has no {', '.join(missing)} fact")
            continue
        objects.append(ObjectObs(obj.id, obj.object_class, obj.lane, obj.distance_ahead,
                                 obj.rel_speed, obj.pred_path))
    if problems:
        diagnostics.extend(f"frame {builder.timestamp}: {problem}" for problem in problems)
        return None
    frame = Frame(
        timestamp=builder.timestamp,
        ego_speed=values['self_speed'],
        ego_lane=values['self_lane'],
        lanes=values['lanes'],
        intent=values['intent'],
        posted_speed_limit=values.get('speed_limit'),
        location_class=values.get('location'),
        objects=tuple(objects),
        traffic_light=values.get('traffic_light', 'none'),
        traffic_signs=tuple(builder.signs),
        intersection=values.get('intersection'),
        arrival_rank=values.get('arrival_rank'),
        sensors=tuple(builder.sensors),
        ego_pred_path=values.get('self_pred_path'),
    )
    diagnostics.extend(f"frame {frame.timestamp}: {problem}" for problem in validate_frame(frame))
    return frame


def _frame_number(atom: Atom) -> int:
    arg = atom.args[0]
    if not (isinstance(arg, Num) and isinstance(arg.value, int) and arg.value >= 0):
        raise _FactError(f"frame number must be a non-negative integer, got '{arg}'")
    return arg.value


def parse_scenario(text: str, source: Optional[str] = None, name: Optional[str] = None) -> Scenario:
    """
    Parse and validate a scenario.

    Args:
        text: Scenario source
        source: Name used in diagnostics
        name: Scenario name when the file has no #scenario directive

    Returns:
        Validated Scenario

    Raises:
        ParseError: on clause syntax errors
        ScenarioError: listing every vocabulary, schema and frame violation
    """
    rules, directives = parse_clauses(text, source)
    diagnostics: List[str] = []
    header = _read_header(directives, diagnostics)
    builders: List[_FrameBuilder] = []

    for rule in rules:
        current = builders[-1] if builders else None
        try:
            if rule.head is None or rule.body:
                raise _FactError("scenario files hold facts only")
            atom = rule.head
            if not is_ground(atom):
                raise _FactError(f"fact '{atom}' is not ground")
            if atom.key == ('frame', 1):
                builders.append(_FrameBuilder(_frame_number(atom), rule.line))
                continue
            handler = _HANDLERS.get(atom.key)
            if handler is None:
                raise _FactError(f"unknown predicate {atom.name}/{atom.arity}")
            if current is None:
                raise _FactError(f"'{atom}' appears before the first frame(T) fact")
            if atom.key not in _UNTIMED and atom.args[-1] != Num(current.timestamp):
                raise _FactError(
                    f"'{atom}' is stated under frame({current.timestamp})"
                )
            current.fact_line = rule.line
            handler(current, atom.args)
        except _FactError as error:
            diagnostics.append(f"line {rule.line}: {error}")
            if current is not None:
                current.failed = True

    if not builders:
        diagnostics.append("scenario has no frames")
    frames = []
    for index, builder in enumerate(builders):
        expected = header.first_frame + index
        if builder.timestamp != expected:
            diagnostics.append(
                f"line {builder.line}: frame {builder.timestamp} found where frame {expected} "
                f"was expected (timestamps must be contiguous from {header.first_frame})"
            )
        if builder.failed:
            continue
        frame = _build_frame(builder, diagnostics)
        if frame is not None:
            frames.append(frame)

    if diagnostics:
        raise ScenarioError(diagnostics, source)

    scenario = Scenario(
        name=header.name or name or (Path(source).stem if source else 'scenario'),
        frames=tuple(frames),
        reaction_time=header.reaction_time if header.reaction_time is not None else DEFAULT_REACTION_TIME,
        deceleration=header.deceleration if header.deceleration is not None else DEFAULT_DECELERATION,
        environment=header.environment,
        source=source,
    )
    logger.debug("Parsed scenario %s: %d frames", scenario.name, len(scenario.frames))
    return scenario


def load_scenario(path: str | Path) -> Scenario:
    """
    Read and parse a scenario file.

    Raises:
        InputError: when the file cannot be read
    """
    path = Path(path)
    text = read_text(path, 'scenario')
    return parse_scenario(text, str(path), path.stem)


def load_corpus(directory: str | Path) -> List[Scenario]:
    """
    Load every `.scn` file under a directory, in path order.

    Raises:
        InputError: when the directory holds no scenario files
    """
    paths = find_scenario_files(directory)
    if not paths:
        raise InputError("no scenario files found", str(directory))
    logger.info("Found %d scenario files in %s", len(paths), directory)
    return [load_scenario(path) for path in paths]
