"""
Per-frame decision procedure.

Each frame is decided on a private working copy of the rulebase: the
frame facts are appended, the scenario's braking model replaces the default
scene builtins, every candidate action is queried through `suggest_action`,
and the arbitration policy picks one of the successes.
"""

import logging
import time
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from src.config import ARBITRATION_ORDER, FALLBACK_ACTION, TURN_PREFERENCE
from src.core.errors import EngineError
from src.core.program import Program
from src.core.proof import (
    CONSTRAINT_VIOLATED, CONSTRAINTS_HOLD, ProofTree, Verdict, render_justification,
)
from src.core.solver import ConstraintResult, Solver, check_constraints
from src.core.terms import Atom, Literal, Num, Rule, Sym, Var
from src.processors.rulebase import Rulebase
from src.sources.facts import compile_frame, scenario_builtins
from src.sources.model import Number, Scenario

logger = logging.getLogger(__name__)

FALLBACK_PREDICATE = 'no_action_suggested'
FALLBACK_GROUP = 'FALLBACK'


@dataclass(frozen=True)
class ArbitrationPolicy:
    """
    Priority order over the action vocabulary.

    Attributes:
        order: Actions from highest to lowest priority
        fallback: Action chosen when nothing is suggested
        tied: Actions sharing the priority of the first of them in `order`
        preferences: (intent, action) pairs that break a tie
    """
    order: Tuple[str, ...] = ARBITRATION_ORDER
    fallback: str = FALLBACK_ACTION
    tied: Tuple[str, ...] = ('turn_left', 'turn_right')
    preferences: Tuple[Tuple[str, str], ...] = tuple(TURN_PREFERENCE.items())

    def rank(self, action: str) -> int:
        """
        Position of an action in the order; tied actions share a rank.

        Raises:
            ValueError: for an action outside the order
        """
        if action in self.tied:
            return min(self.order.index(tied) for tied in self.tied)
        return self.order.index(action)

    def choose(self, suggested: Iterable[str], intent: Optional[str] = None) -> str:
        actions = set(suggested)
        unknown = sorted(actions - set(self.order))
        if unknown:
            raise ValueError(f"actions outside the arbitration order: {', '.join(unknown)}")
        if not actions:
            return self.fallback
        best = min(actions, key=lambda action: (self.rank(action), self.order.index(action)))
        if best in self.tied:
            preferred = dict(self.preferences).get(intent)
            if preferred in actions and preferred in self.tied:
                return preferred
        return best


DEFAULT_POLICY = ArbitrationPolicy()


def arbitrate(suggested: Union[Mapping[str, ProofTree], Iterable[str]], intent: Optional[str] = None,
              policy: ArbitrationPolicy = DEFAULT_POLICY) -> str:
    """
    Pick the highest-priority suggested action.

    Args:
        suggested: Suggested actions (a mapping's keys are used)
        intent: Current intent, used to break the turn tie
        policy: Priority order

    Returns:
        The chosen action; the policy fallback when nothing is suggested
    """
    return policy.choose(list(suggested), intent)


@dataclass(frozen=True)
class Decision:
    """
    Outcome of deciding one frame.

    Attributes:
        scenario: Scenario name
        timestamp: Frame timestamp
        action: Chosen action
        suggested: Suggested actions with their proofs, in candidate order
        justification: Proof of the chosen action (or of the fallback)
        constraints: Result of the integrity-constraint check
        latency_ms: Wall-clock time spent deciding
    """
    scenario: str
    timestamp: int
    action: str
    suggested: Dict[str, ProofTree]
    justification: ProofTree
    constraints: ConstraintResult
    latency_ms: float = field(default=0.0, compare=False)

    @property
    def fallback(self) -> bool:
        return self.action not in self.suggested

    def render(self, max_depth: Optional[int] = None) -> str:
        """
        English justification: query line, proof, violated constraint (if
        any) and the constraint footer.
        """
        text = render_justification(self.justification, max_depth,
                                    query=self.justification.goal.atom)
        if self.constraints.proof is not None:
            text += render_justification(self.constraints.proof, max_depth)
        return text + (CONSTRAINTS_HOLD if self.constraints.ok else CONSTRAINT_VIOLATED) + '\n'


def candidate_actions(solver: Solver) -> List[str]:
    """Actions enumerated by the candidate layer, in source order, without repeats."""
    query = Atom('action', (Var('A'),))
    actions: Dict[str, None] = {}
    for answer in solver.solve(query):
        action = answer.substitution.resolve(Var('A'))
        if isinstance(action, Sym):
            actions.setdefault(action.name, None)
    return list(actions)


def fallback_justification(solver: Solver, actions: Sequence[str], t: int,
                           explain: bool = True) -> ProofTree:
    """
    Justify the fallback: no candidate action is suggested at t.

    The node holds through the rule
    `no_action_suggested(t) :- not suggest_action(a1, t), ...` and each
    negated goal carries the failed search for that action.
    """
    tn = Num(t)
    goals = [Atom('suggest_action', (Sym(action), tn)) for action in actions]
    rule = Rule(Atom(FALLBACK_PREDICATE, (tn,)),
                tuple(Literal(goal, naf=True) for goal in goals), group=FALLBACK_GROUP)
    children = []
    for goal in goals:
        evidence = solver.explain_failure(goal).children if explain else ()
        children.append(ProofTree(Literal(goal, naf=True), Verdict.NO_EVIDENCE, children=evidence))
    return ProofTree(Literal(rule.head), Verdict.HOLDS, rule, tuple(children))


def frame_program(rulebase: Rulebase, scenario: Scenario, t: int,
                  extra_facts: Iterable[Atom] = ()) -> Program:
    """Working copy of the rulebase holding the facts of frame t."""
    facts = compile_frame(scenario, t) + tuple(extra_facts)
    return rulebase.program.with_facts(facts).with_builtins(scenario_builtins(scenario))


def decide(rulebase: Rulebase, scenario: Scenario, t: int,
           policy: ArbitrationPolicy = DEFAULT_POLICY, explain: bool = True,
           extra_facts: Iterable[Atom] = ()) -> Decision:
    """
    Decide the action for frame t of a scenario.

    Args:
        rulebase: Loaded catalog
        scenario: Parsed scenario
        t: Frame timestamp
        policy: Arbitration policy
        explain: Attach failed-search evidence under negated goals
        extra_facts: Additional ground facts for this frame only

    Returns:
        Decision with justification and constraint result

    Raises:
        ScenarioError: when t is not a timestamp of the scenario
        EngineError: on a dynamic engine error or a suggested action the
            policy cannot rank, naming scenario and frame
    """
    started = time.perf_counter()
    program = frame_program(rulebase, scenario, t, extra_facts)
    solver = Solver(program, explain_failures=explain)
    tn = Num(t)
    try:
        actions = candidate_actions(solver)
        suggested: Dict[str, ProofTree] = {}
        for action in actions:
            answer = solver.first(Atom('suggest_action', (Sym(action), tn)))
            if answer is not None:
                suggested[action] = answer.proof
        unknown = [action for action in suggested if action not in policy.order]
        if unknown:
            raise EngineError(f"actions outside the arbitration order: {', '.join(unknown)}")
        chosen = arbitrate(suggested, scenario.frame(t).intent, policy)
        if chosen in suggested:
            justification = suggested[chosen]
        else:
            justification = fallback_justification(solver, actions, t, explain)
        constraints = check_constraints(program, solver)
    except EngineError as error:
        raise EngineError(f"{scenario.name} at t={t}: {error}") from error
    latency_ms = (time.perf_counter() - started) * 1000.0

    logger.debug("%s t=%d: suggested {%s}, chose %s (%.2f ms)", scenario.name, t,
                 ', '.join(suggested), chosen, latency_ms)
    return Decision(scenario.name, t, chosen, suggested, justification, constraints, latency_ms)


def decide_all(rulebase: Rulebase, scenario: Scenario, policy: ArbitrationPolicy = DEFAULT_POLICY,
               explain: bool = True) -> List[Decision]:
    """One decision per frame in timestamp order."""
    return [decide(rulebase, scenario, t, policy, explain) for t in scenario.timestamps]


def effective_speed_limit(rulebase: Rulebase, location: str, posted: Number,
                          extra_facts: Iterable[Atom] = ()) -> Optional[Number]:
    """
    Speed limit the mitigation layer trusts for a posted value.

    Args:
        rulebase: Loaded catalog
        location: Location class
        posted: Posted limit in meters/second
        extra_facts: Additional facts, e.g. `abnormal(city, 15.6)`

    Returns:
        The first `max_speed(location, S)` answer, or None when no
        conclusion is reached
    """
    fact = Atom('posted_speed_limit', (Sym(location), Num(posted)))
    program = rulebase.program.with_facts((fact,) + tuple(extra_facts))
    answer = Solver(program, explain_failures=False).first(
        Atom('max_speed', (Sym(location), Var('S')))
    )
    if answer is None:
        return None
    value = answer.substitution.resolve(Var('S'))
    return value.value if isinstance(value, Num) else None
