"""
Goal-directed solver for stratified programs with negation-as-failure.

Search is depth-first over rules in source order with left-to-right body
selection. Negated goals must be ground when selected and succeed when the
sub-search for the atom finitely fails. A positive call identical to a
ground call already on the current path fails that branch.

Each Solver owns its search state (the renaming counter); a Program can be
shared by any number of solvers running concurrently.
"""

import itertools
import logging
from contextlib import contextmanager
from dataclasses import dataclass, replace
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from src.config import MAX_SEARCH_DEPTH
from src.core.errors import NonGroundNegationError, SearchDepthError
from src.core.parser import parse_goals
from src.core.program import Program
from src.core.proof import ProofTree, Verdict
from src.core.terms import Atom, Literal, Rule, Var, is_ground, variables_of
from src.core.unify import EMPTY_SUBSTITUTION, Substitution, unify_atoms

logger = logging.getLogger(__name__)

Goal = Union[Literal, Atom]
Goals = Union[str, Goal, Sequence[Goal]]
Path = frozenset

FALSE_ATOM = Atom('false')


@dataclass(frozen=True)
class Answer:
    """One solution: bindings plus one proof per query goal."""
    substitution: Substitution
    proofs: Tuple[ProofTree, ...]

    @property
    def proof(self) -> Optional[ProofTree]:
        return self.proofs[0] if self.proofs else None


@dataclass(frozen=True)
class ConstraintResult:
    """Outcome of checking the headless rules of a program."""
    ok: bool
    constraint: Optional[Rule] = None
    proof: Optional[ProofTree] = None


def _source_name(var: Var) -> str:
    return var.name.split('@', 1)[0]


@contextmanager
def _stack_guard(max_depth: int) -> Iterator[None]:
    """Report interpreter stack exhaustion as a search depth error."""
    try:
        yield
    except RecursionError as error:
        raise SearchDepthError(
            f"search nesting exhausted the interpreter stack below depth limit {max_depth}"
        ) from error


def _as_literals(goals: Goals) -> Tuple[Literal, ...]:
    if isinstance(goals, str):
        return parse_goals(goals)
    if isinstance(goals, (Literal, Atom)):
        goals = [goals]
    return tuple(goal if isinstance(goal, Literal) else Literal(goal) for goal in goals)


class Solver:
    """
    Depth-first resolution over one program.

    Args:
        program: Program to query (should already be stratified)
        explain_failures: Attach failed sub-search evidence to negated goals
            in returned proofs
        max_depth: Nesting limit for positive calls
    """

    def __init__(self, program: Program, explain_failures: bool = True,
                 max_depth: int = MAX_SEARCH_DEPTH):
        self.program = program
        self.explain_failures = explain_failures
        self.max_depth = max_depth
        self._fresh = itertools.count()
        self._rule_variables: Dict[Rule, Tuple[Var, ...]] = {}

    def solve(self, goals: Goals) -> Iterator[Answer]:
        """
        Enumerate answers to a conjunctive query in deterministic order.

        Raises:
            NonGroundNegationError: a negated goal has unbound variables when selected
            ArithmeticTypeError: arithmetic on non-numeric or unbound terms
            SearchDepthError: the nesting limit was exceeded
        """
        literals = _as_literals(goals)
        with _stack_guard(self.max_depth):
            for s, proofs in self._solve_goals(literals, EMPTY_SUBSTITUTION, 0, Path()):
                resolved = tuple(proof.resolve(s) for proof in proofs)
                if self.explain_failures:
                    resolved = tuple(self._elaborate(proof) for proof in resolved)
                yield Answer(s, resolved)

    def first(self, goals: Goals) -> Optional[Answer]:
        return next(self.solve(goals), None)

    def succeeds(self, goals: Goals) -> bool:
        literals = _as_literals(goals)
        with _stack_guard(self.max_depth):
            for _ in self._solve_goals(literals, EMPTY_SUBSTITUTION, 0, Path()):
                return True
        return False

    def explain_failure(self, goal: Goal) -> ProofTree:
        """
        Evidence that a positive goal has no answers.

        Returns:
            NO_EVIDENCE node whose children are the failed branches, one per
            rule whose head matched, each carrying the proofs of the literals
            it got through and the evidence for the literal that failed
        """
        literal = goal if isinstance(goal, Literal) else Literal(goal)
        with _stack_guard(self.max_depth):
            tree = self._explain_atom(literal.atom, EMPTY_SUBSTITUTION, 0, Path())
            return self._elaborate(tree)

    # Search

    def _solve_goals(self, goals: Tuple[Literal, ...], s: Substitution, depth: int,
                     path: Path) -> Iterator[Tuple[Substitution, Tuple[ProofTree, ...]]]:
        if not goals:
            yield s, ()
            return
        # one answer stream per selected literal; proofs[i] belongs to goals[i]
        streams = [self._solve_literal(goals[0], s, depth, path)]
        proofs: List[ProofTree] = []
        while streams:
            level = len(streams) - 1
            step = next(streams[-1], None)
            if step is None:
                streams.pop()
                continue
            s1, proof = step
            del proofs[level:]
            proofs.append(proof)
            if level + 1 == len(goals):
                yield s1, tuple(proofs)
            else:
                streams.append(self._solve_literal(goals[level + 1], s1, depth, path))

    def _solve_literal(self, literal: Literal, s: Substitution, depth: int,
                       path: Path) -> Iterator[Tuple[Substitution, ProofTree]]:
        if literal.naf:
            atom = self._ground_negation(literal, s)
            if not self._has_answer(atom, s, depth, path):
                yield s, ProofTree(Literal(atom, naf=True), Verdict.NO_EVIDENCE,
                                   builtin=self.program.is_builtin(atom.key))
            return
        hook = self.program.builtin(literal.key)
        if hook is not None:
            for s1 in hook(literal.atom.args, s):
                yield s1, ProofTree(literal, Verdict.HOLDS, builtin=True)
            return
        yield from self._solve_atom(literal.atom, s, depth + 1, path)

    def _solve_atom(self, atom: Atom, s: Substitution, depth: int,
                    path: Path) -> Iterator[Tuple[Substitution, ProofTree]]:
        if depth > self.max_depth:
            raise SearchDepthError(
                f"search depth limit {self.max_depth} exceeded at '{s.resolve(atom)}'"
            )
        path = self._enter(atom, s, path)
        if path is None:
            return
        for rule in self.program.rules_for(atom.key):
            renamed = self._rename(rule)
            s1 = unify_atoms(atom, renamed.head, s)
            if s1 is None:
                continue
            for s2, proofs in self._solve_goals(renamed.body, s1, depth, path):
                yield s2, ProofTree(Literal(atom), Verdict.HOLDS, renamed, proofs)

    def _has_answer(self, atom: Atom, s: Substitution, depth: int, path: Path) -> bool:
        hook = self.program.builtin(atom.key)
        if hook is not None:
            return next(hook(atom.args, s), None) is not None
        return next(self._solve_atom(atom, s, depth + 1, path), None) is not None

    def _ground_negation(self, literal: Literal, s: Substitution) -> Atom:
        atom = s.resolve(literal.atom)
        unbound = variables_of(atom)
        if unbound:
            source_names = Substitution({var: Var(_source_name(var))
                                         for var in variables_of(literal.atom) if '@' in var.name})
            shown = source_names.resolve(Literal(literal.atom, naf=True))
            raise NonGroundNegationError(
                str(shown), [_source_name(var) for var in unbound]
            )
        return atom

    @staticmethod
    def _enter(atom: Atom, s: Substitution, path: Path) -> Optional[Path]:
        """Extend the call path; None when an identical ground call is already on it."""
        resolved = s.resolve(atom)
        if not is_ground(resolved):
            return path
        if resolved in path:
            return None
        return path | {resolved}

    def _rename(self, rule: Rule) -> Rule:
        variables = self._rule_variables.get(rule)
        if variables is None:
            variables = variables_of(rule)
            self._rule_variables[rule] = variables
        if not variables:
            return rule
        suffix = next(self._fresh)
        renaming = Substitution({var: Var(f"{var.name}@{suffix}") for var in variables})
        return Rule(
            renaming.resolve(rule.head) if rule.head is not None else None,
            tuple(renaming.resolve(literal) for literal in rule.body),
            rule.line, rule.group, rule.completion,
        )

    # Failure evidence

    def _elaborate(self, tree: ProofTree) -> ProofTree:
        """Fill in the evidence under negated goals that succeeded."""
        if (tree.verdict is Verdict.NO_EVIDENCE and tree.goal.naf
                and not tree.children and not tree.builtin):
            evidence = self._explain_atom(tree.goal.atom, EMPTY_SUBSTITUTION, 0, Path())
            return replace(tree, children=tuple(self._elaborate(child)
                                                for child in evidence.children))
        if not tree.children:
            return tree
        return replace(tree, children=tuple(self._elaborate(child) for child in tree.children))

    def _explain_atom(self, atom: Atom, s: Substitution, depth: int, path: Path) -> ProofTree:
        goal = Literal(s.resolve(atom))
        if self.program.is_builtin(atom.key):
            return ProofTree(goal, Verdict.NO_EVIDENCE, builtin=True)
        if depth > self.max_depth:
            return ProofTree(goal, Verdict.NO_EVIDENCE)
        path = self._enter(atom, s, path)
        if path is None:
            return ProofTree(goal, Verdict.NO_EVIDENCE)
        branches = []
        for rule in self.program.rules_for(atom.key):
            renamed = self._rename(rule)
            s1 = unify_atoms(atom, renamed.head, s)
            if s1 is None:
                continue
            reached, s2, proofs = self._farthest(renamed.body, s1, depth, path)
            if reached == len(renamed.body):
                logger.debug("'%s' has an answer; no failure evidence", goal)
                continue
            evidence = self._failure_evidence(renamed.body[reached], s2, depth, path)
            branch = ProofTree(Literal(atom), Verdict.NO_EVIDENCE, renamed, proofs + (evidence,))
            branches.append(branch.resolve(s2))
        return ProofTree(goal, Verdict.NO_EVIDENCE, children=tuple(branches))

    def _farthest(self, body: Tuple[Literal, ...], s: Substitution, depth: int,
                  path: Path) -> Tuple[int, Substitution, Tuple[ProofTree, ...]]:
        """Longest provable prefix of a body: (length, substitution, prefix proofs)."""
        best: Tuple[int, Substitution, Tuple[ProofTree, ...]] = (0, s, ())
        if not body:
            return best
        streams = [self._solve_literal(body[0], s, depth, path)]
        proofs: List[ProofTree] = []
        while streams:
            level = len(streams) - 1
            step = next(streams[-1], None)
            if step is None:
                streams.pop()
                continue
            s1, proof = step
            del proofs[level:]
            proofs.append(proof)
            if level + 1 > best[0]:
                best = (level + 1, s1, tuple(proofs))
            if level + 1 == len(body):
                break
            streams.append(self._solve_literal(body[level + 1], s1, depth, path))
        return best

    def _failure_evidence(self, literal: Literal, s: Substitution, depth: int,
                          path: Path) -> ProofTree:
        if literal.naf:
            atom = s.resolve(literal.atom)
            if self.program.is_builtin(atom.key):
                return ProofTree(Literal(atom), Verdict.HOLDS, builtin=True)
            s1, proof = next(self._solve_atom(atom, s, depth + 1, path))
            return proof.resolve(s1)
        if self.program.is_builtin(literal.key):
            return ProofTree(Literal(s.resolve(literal.atom)), Verdict.NO_EVIDENCE, builtin=True)
        return self._explain_atom(literal.atom, s, depth + 1, path)


def solve(program: Program, goals: Goals, explain_failures: bool = True) -> Iterator[Answer]:
    """
    Stratify a program and enumerate answers to a query.

    Args:
        program: Parsed program
        goals: Query text or literals
        explain_failures: Attach failure evidence under negated goals

    Raises:
        StratificationError: when the program has a negation cycle
    """
    program.stratification()
    return Solver(program, explain_failures=explain_failures).solve(goals)


def check_constraints(program: Program, solver: Optional[Solver] = None) -> ConstraintResult:
    """
    Run every headless rule's body as a query.

    Returns:
        ok when all constraint bodies finitely fail; otherwise the first
        violated constraint with a proof of its body rooted at `false`
    """
    program.stratification()
    solver = solver or Solver(program)
    for constraint in program.constraints:
        answer = solver.first(constraint.body)
        if answer is None:
            continue
        s = answer.substitution
        instance = Rule(None, tuple(s.resolve(literal) for literal in constraint.body),
                        constraint.line, constraint.group, constraint.completion)
        logger.warning("Constraint violated: %s", instance)
        proof = ProofTree(Literal(FALSE_ATOM), Verdict.HOLDS, instance, answer.proofs)
        return ConstraintResult(False, constraint, proof)
    return ConstraintResult(True)
