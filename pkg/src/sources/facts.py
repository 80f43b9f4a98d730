"""
Frame to fact compilation and the scene builtins.

compile_frame is deterministic: facts come out grouped by predicate in
FACT_SCHEMA order, objects in annotation order.
"""

from typing import Dict, List, Sequence, Tuple

from src.config import FACT_SCHEMA
from src.core.builtins import BuiltinHook, function_hook, predicate_hook
from src.core.errors import ArithmeticTypeError
from src.core.terms import Atom, Compound, Num, PredicateKey, Seq, Sym, Term, seq_to_list
from src.sources.model import Frame, LaneId, Number, Scenario, Trajectory
from src.utils.geometry import path_intersects, stopping_distance
from src.utils.temporal import detect_flashing


def lane_term(lane: LaneId) -> Term:
    return Num(lane) if isinstance(lane, int) else Sym(lane)


def path_term(path: Trajectory) -> Seq:
    return Seq(tuple(Compound('pt', (Num(x), Num(y))) for x, y in path.points))


def frame_facts(frame: Frame, flashing: bool = False) -> Tuple[Atom, ...]:
    """
    Facts for one frame.

    Args:
        frame: Frame to compile
        flashing: Also emit traffic_light(flashing_red, t)

    Returns:
        Ground atoms in FACT_SCHEMA order
    """
    t = Num(frame.timestamp)
    grouped: Dict[str, List[Atom]] = {name: [] for name, _ in FACT_SCHEMA}

    def emit(name: str, *args: Term) -> None:
        grouped[name].append(Atom(name, args))

    emit('self_speed', Num(frame.ego_speed), t)
    emit('self_lane', lane_term(frame.ego_lane), t)
    emit('lanes', Seq(tuple(lane_term(lane) for lane in frame.lanes)), t)
    if frame.posted_speed_limit is not None:
        emit('speed_limit', Num(frame.posted_speed_limit), t)
    if frame.location_class is not None:
        emit('location', Sym(frame.location_class), t)
    emit('intent', Sym(frame.intent), t)
    emit('traffic_light', Sym(frame.traffic_light), t)
    if flashing:
        emit('traffic_light', Sym('flashing_red'), t)
    for sign in frame.traffic_signs:
        if sign.value is not None:
            emit('traffic_sign', Compound(sign.kind, (Num(sign.value),)), t)
        else:
            emit('traffic_sign', Sym(sign.kind), t)
    if frame.intersection is not None:
        emit('intersection', Sym(frame.intersection.kind), Sym(frame.intersection.signaling),
             Sym(frame.intersection.position), t)
    if frame.arrival_rank is not None:
        emit('arrival_rank', Num(frame.arrival_rank), t)
    for side, distance in frame.sensors:
        emit('sensor', Sym(side), Num(distance), t)
    if frame.ego_pred_path is not None:
        emit('self_pred_path', path_term(frame.ego_pred_path), t)
    for obj in frame.objects:
        oid = Sym(obj.id)
        emit('obj', oid, t)
        emit('class', oid, Sym(obj.object_class))
        emit('obj_lane', oid, lane_term(obj.lane), t)
        emit('obj_distance', oid, Num(obj.distance_ahead), t)
        emit('obj_rel_speed', oid, Num(obj.rel_speed), t)
        if obj.pred_path is not None:
            emit('obj_pred_path', oid, path_term(obj.pred_path), t)
    return tuple(atom for name, _ in FACT_SCHEMA for atom in grouped[name])


def compile_frame(scenario: Scenario, t: int) -> Tuple[Atom, ...]:
    """
    Ground facts describing frame t of a scenario.

    The traffic-light history up to t decides whether a flashing red light
    is reported.

    Raises:
        ScenarioError: when t is not a timestamp of the scenario
    """
    frame = scenario.frame(t)
    lights = [earlier.traffic_light for earlier in scenario.history(t)]
    return frame_facts(frame, flashing=detect_flashing(lights))


# Scene builtins

def _number(term: Term) -> Number:
    if not isinstance(term, Num):
        raise ArithmeticTypeError(f"expected a number, got {term}")
    return term.value


def term_points(term: Term) -> List[Tuple[Number, Number]]:
    """Points of a `[pt(X, Y), ...]` path term."""
    items = seq_to_list(term)
    if items is None:
        raise ArithmeticTypeError(f"expected a path, got {term}")
    points = []
    for item in items:
        if not (isinstance(item, Compound) and item.functor == 'pt' and len(item.args) == 2):
            raise ArithmeticTypeError(f"expected pt(X, Y) in path, got {item}")
        points.append((_number(item.args[0]), _number(item.args[1])))
    return points


def scene_builtins(reaction_time: Number, deceleration: Number) -> Dict[PredicateKey, BuiltinHook]:
    """
    Host predicates over scene values.

    Returns:
        `stopping_distance(Speed, Dist)` for the given braking model and
        `path_intersects(PathA, PathB)`
    """
    def distance(speed: Term) -> Num:
        try:
            return Num(stopping_distance(_number(speed), reaction_time, deceleration))
        except ValueError as error:
            raise ArithmeticTypeError(str(error)) from error

    return {
        ('stopping_distance', 2): function_hook(distance, 1),
        ('path_intersects', 2): predicate_hook(
            lambda a, b: path_intersects(term_points(a), term_points(b))
        ),
    }


def scenario_builtins(scenario: Scenario) -> Dict[PredicateKey, BuiltinHook]:
    return scene_builtins(scenario.reaction_time, scenario.deceleration)


def schema_keys() -> Sequence[PredicateKey]:
    return [(name, arity) for name, arity in FACT_SCHEMA]
