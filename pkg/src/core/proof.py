"""
Justification trees and their English rendering.

A tree records why a goal holds (the rule instance and one child per body
literal) or why there is no evidence for it (one failed branch per rule
whose head matched, each ending at the literal that could not be proved).
"""

from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from src.core.builtins import BuiltinRegistry
from src.core.terms import Atom, Compound, Literal, Num, Rule, Seq, Sym, Term, Var, iter_variables
from src.core.unify import EMPTY_SUBSTITUTION, Substitution

CONSTRAINTS_HOLD = 'The global constraints hold.'
CONSTRAINT_VIOLATED = 'A global constraint is violated.'

# How builtin comparisons read in a justification
_COMPARISON_PHRASES = {
    '>': 'is greater than',
    '<': 'is less than',
    '>=': 'is greater or equal to',
    '=<': 'is less or equal to',
    '=': 'is equal to',
    '\\=': 'is not equal to',
    'is': 'is',
}


class Verdict(Enum):
    HOLDS = 'holds'
    NO_EVIDENCE = 'no-evidence'


@dataclass(frozen=True)
class ProofTree:
    """
    One node of a justification.

    Attributes:
        goal: The literal justified by this node
        verdict: HOLDS or NO_EVIDENCE
        rule: Rule instance used (HOLDS) or tried (per-rule failure branch)
        children: Body proofs, or the failed sub-search evidence
        builtin: True when the goal was evaluated by a builtin
    """
    goal: Literal
    verdict: Verdict
    rule: Optional[Rule] = None
    children: Tuple['ProofTree', ...] = ()
    builtin: bool = False

    @property
    def holds(self) -> bool:
        return self.verdict is Verdict.HOLDS

    @property
    def is_rule_failure(self) -> bool:
        """A failed branch through one rule; rendered through its children."""
        return self.verdict is Verdict.NO_EVIDENCE and self.rule is not None

    def resolve(self, s: Substitution) -> 'ProofTree':
        """Apply a substitution to every goal and rule instance of the tree."""
        rule = self.rule
        if rule is not None:
            rule = Rule(
                s.resolve(rule.head) if rule.head is not None else None,
                tuple(s.resolve(literal) for literal in rule.body),
                rule.line, rule.group, rule.completion,
            )
        return ProofTree(s.resolve(self.goal), self.verdict, rule,
                         tuple(child.resolve(s) for child in self.children), self.builtin)

    def nodes(self):
        """Pre-order iteration over the tree."""
        yield self
        for child in self.children:
            yield from child.nodes()

    def groups(self) -> List[str]:
        """Rule-group tags of the rule instances that hold, in pre-order, without repeats."""
        seen: Dict[str, None] = {}
        for node in self.nodes():
            if node.holds and node.rule is not None and node.rule.group:
                seen.setdefault(node.rule.group, None)
        return list(seen)

    def replays(self, builtins: Optional[BuiltinRegistry] = None) -> bool:
        """
        Check that the tree justifies its goal.

        A HOLDS node must re-derive its goal from its rule instance and
        children; a NO_EVIDENCE node must contain no successful branch.

        Args:
            builtins: Registry used to re-evaluate builtin leaves (skipped if None)
        """
        if self.holds:
            return self._replays_holds(builtins)
        if self.rule is not None:
            return self._replays_branch(builtins)
        return all(child.is_rule_failure and child.replays(builtins) for child in self.children)

    def _replays_holds(self, builtins: Optional[BuiltinRegistry]) -> bool:
        if self.goal.naf:
            return False
        if self.builtin:
            if builtins is None:
                return True
            hook = builtins.get(self.goal.key)
            return hook is not None and next(hook(self.goal.atom.args, EMPTY_SUBSTITUTION), None) is not None
        if self.rule is None:
            return False
        # a violated constraint is justified as `false`
        head = self.rule.head if self.rule.head is not None else Atom('false')
        if head != self.goal.atom:
            return False
        if len(self.children) != len(self.rule.body):
            return False
        return all(_replays_literal(literal, child, builtins)
                   for literal, child in zip(self.rule.body, self.children))

    def _replays_branch(self, builtins: Optional[BuiltinRegistry]) -> bool:
        body = self.rule.body
        if not self.children or len(self.children) > len(body):
            return False
        *prefix, last = self.children
        if not all(_replays_literal(literal, child, builtins) for literal, child in zip(body, prefix)):
            return False
        failing = body[len(prefix)]
        if failing.naf:
            return last.holds and last.goal == failing.positive() and last.replays(builtins)
        return (last.verdict is Verdict.NO_EVIDENCE and last.goal == failing
                and last.replays(builtins))


def _replays_literal(literal: Literal, child: ProofTree, builtins: Optional[BuiltinRegistry]) -> bool:
    if child.goal != literal:
        return False
    expected = Verdict.NO_EVIDENCE if literal.naf else Verdict.HOLDS
    return child.verdict is expected and child.replays(builtins)


# Rendering

def variable_names(trees: Sequence[ProofTree]) -> Dict[Var, str]:
    """Name unbound variables Var0, Var1, ... in rendering order."""
    names: Dict[Var, str] = {}
    for tree in trees:
        for node in tree.nodes():
            for var in iter_variables(node.goal):
                if var not in names:
                    names[var] = f"Var{len(names)}"
    return names


def format_term(term: Term, names: Optional[Dict[Var, str]] = None) -> str:
    if isinstance(term, Var):
        return (names or {}).get(term, term.name)
    if isinstance(term, (Sym, Num)):
        return str(term)
    if isinstance(term, Seq):
        inner = ', '.join(format_term(item, names) for item in term.items)
        if term.tail is not None:
            return f"[{inner} | {format_term(term.tail, names)}]"
        return f"[{inner}]"
    if isinstance(term, Compound):
        args = [format_term(arg, names) for arg in term.args]
        if len(args) == 2 and term.functor in ('+', '-', '*', '/'):
            return f"{args[0]}{term.functor}{args[1]}"
        if len(args) == 1 and term.functor == '-':
            return f"-{args[0]}"
        return f"{term.functor}({', '.join(args)})"
    return str(term)


def format_arguments(args: Sequence[Term], names: Optional[Dict[Var, str]] = None) -> str:
    """
    English argument list.

    Returns:
        '' for no arguments, ' (for a)', ' (for a, and b)', ' (for a, b, and c)'
    """
    if not args:
        return ''
    texts = [format_term(arg, names) for arg in args]
    if len(texts) == 1:
        return f" (for {texts[0]})"
    return f" (for {', '.join(texts[:-1])}, and {texts[-1]})"


def describe(atom: Atom, names: Optional[Dict[Var, str]] = None) -> str:
    """`'pred' holds (for args)` or the phrase for a builtin comparison."""
    phrase = _COMPARISON_PHRASES.get(atom.name)
    if phrase is not None and len(atom.args) == 2:
        return f"{format_term(atom.args[0], names)} {phrase} {format_term(atom.args[1], names)}"
    return f"'{atom.name}' holds{format_arguments(atom.args, names)}"


def _line(node: ProofTree, names: Dict[Var, str]) -> str:
    text = describe(node.goal.atom, names)
    if node.holds:
        return text
    if node.builtin and not node.goal.naf:
        return f"it is not the case that {text}"
    return f"there is no evidence that {text}"


def _visible_children(node: ProofTree) -> List[ProofTree]:
    visible = []
    for child in node.children:
        if child.is_rule_failure:
            visible.extend(_visible_children(child))
        else:
            visible.append(child)
    return visible


def render_justification(tree: ProofTree, max_depth: Optional[int] = None,
                         query: Optional[Atom] = None,
                         constraints_hold: Optional[bool] = None) -> str:
    """
    Render a justification as indented English lines.

    Args:
        tree: Proof tree from the solver
        max_depth: Number of levels to print (None for all); elided
            children are marked with ' ...'
        query: When given, a `QUERY: Does ...?` header line is printed first
        constraints_hold: When given, the global-constraint footer is printed

    Returns:
        The rendered text, ending with a newline
    """
    names = variable_names([tree])
    lines: List[str] = []
    if query is not None:
        lines.append(f"QUERY: Does '{query.name}' hold{format_arguments(query.args, names)}?")
    roots = _visible_children(tree) if tree.is_rule_failure else [tree]
    for root in roots:
        _render(root, 0, max_depth, names, lines)
    if constraints_hold is not None:
        lines.append(CONSTRAINTS_HOLD if constraints_hold else CONSTRAINT_VIOLATED)
    return '\n'.join(lines) + '\n'


def _render(node: ProofTree, depth: int, max_depth: Optional[int],
            names: Dict[Var, str], lines: List[str]) -> None:
    indent = '  ' * depth
    text = _line(node, names)
    children = _visible_children(node)
    if not children:
        lines.append(indent + text)
        return
    if max_depth is not None and depth + 1 >= max_depth:
        lines.append(indent + text + ' ...')
        return
    lines.append(indent + text + (' because' if node.holds else ''))
    for child in children:
        _render(child, depth + 1, max_depth, names, lines)
