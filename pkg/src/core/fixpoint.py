"""
Bottom-up perfect-model computation for ground stratified programs.

Independent of the solver: used as the reference the goal-directed search is
checked against.
"""

from typing import List, Set

from src.core.program import Program
from src.core.terms import Atom, Rule, is_ground
from src.core.unify import EMPTY_SUBSTITUTION


def perfect_model(program: Program) -> Set[Atom]:
    """
    Iterate each stratum to its least fixpoint, lowest stratum first.

    Args:
        program: Ground program (facts, rules, builtin literals over numbers)

    Returns:
        The set of atoms true in the perfect model (builtins excluded)

    Raises:
        ValueError: when a rule contains variables
        StratificationError: when the program is not stratified
    """
    strata = program.stratification()
    rules = [rule for rule in program.rules if not rule.is_constraint]
    for rule in rules:
        if not is_ground(rule.head) or not all(is_ground(literal) for literal in rule.body):
            raise ValueError(f"perfect_model needs a ground program, got: {rule}")

    layers: List[List[Rule]] = [[] for _ in range(max(strata.values(), default=0) + 1)]
    for rule in rules:
        layers[strata[rule.head.key]].append(rule)

    model: Set[Atom] = set()
    for layer in layers:
        changed = True
        while changed:
            changed = False
            for rule in layer:
                if rule.head not in model and _body_true(program, rule, model):
                    model.add(rule.head)
                    changed = True
    return model


def _body_true(program: Program, rule: Rule, model: Set[Atom]) -> bool:
    for literal in rule.body:
        hook = program.builtin(literal.key)
        if hook is not None:
            holds = next(hook(literal.atom.args, EMPTY_SUBSTITUTION), None) is not None
        else:
            holds = literal.atom in model
        if holds == literal.naf:
            return False
    return True
