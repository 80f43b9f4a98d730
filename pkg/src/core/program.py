"""
Program: an ordered rulebase plus its builtin registry.

A Program is immutable after construction and safe to share between
threads. Working copies (extra facts, extra builtins) are new Programs.
"""

from dataclasses import dataclass
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple

from src.core.builtins import STANDARD_BUILTINS, BuiltinHook, BuiltinRegistry
from src.core.stratify import stratify
from src.core.terms import Atom, Compound, Num, PredicateKey, Rule, Sym, Term, variables_of


@dataclass(frozen=True)
class Directive:
    """`#name(args).` line in a source file."""
    name: str
    args: Tuple[Term, ...]
    line: int = 0


def predicate_indicator(term: Term) -> Optional[PredicateKey]:
    """Read `name/arity` as a predicate key."""
    if (isinstance(term, Compound) and term.functor == '/' and len(term.args) == 2
            and isinstance(term.args[0], Sym) and isinstance(term.args[1], Num)
            and isinstance(term.args[1].value, int)):
        return (term.args[0].name, term.args[1].value)
    return None


def format_key(key: PredicateKey) -> str:
    return f"{key[0]}/{key[1]}"


class Program:
    """
    Ordered sequence of rules with a builtin registry.

    Rules keep their source order, which fixes the search order of the solver.
    """

    def __init__(self, rules: Sequence[Rule], builtins: Optional[BuiltinRegistry] = None,
                 directives: Sequence[Directive] = ()):
        self._rules: Tuple[Rule, ...] = tuple(rules)
        self._builtins: Dict[PredicateKey, BuiltinHook] = dict(
            STANDARD_BUILTINS if builtins is None else builtins
        )
        self._directives: Tuple[Directive, ...] = tuple(directives)
        index: Dict[PredicateKey, List[Rule]] = {}
        for rule in self._rules:
            if rule.head is not None:
                index.setdefault(rule.head.key, []).append(rule)
        self._index: Dict[PredicateKey, Tuple[Rule, ...]] = {
            key: tuple(rules) for key, rules in index.items()
        }
        self._constraints = tuple(rule for rule in self._rules if rule.is_constraint)
        self._strata: Optional[Dict[PredicateKey, int]] = None

    @property
    def rules(self) -> Tuple[Rule, ...]:
        return self._rules

    @property
    def builtins(self) -> Mapping[PredicateKey, BuiltinHook]:
        return self._builtins

    @property
    def directives(self) -> Tuple[Directive, ...]:
        return self._directives

    @property
    def constraints(self) -> Tuple[Rule, ...]:
        return self._constraints

    def __len__(self) -> int:
        return len(self._rules)

    def rules_for(self, key: PredicateKey) -> Tuple[Rule, ...]:
        return self._index.get(key, ())

    def is_builtin(self, key: PredicateKey) -> bool:
        return key in self._builtins

    def builtin(self, key: PredicateKey) -> Optional[BuiltinHook]:
        return self._builtins.get(key)

    def defined_predicates(self) -> Set[PredicateKey]:
        return set(self._index)

    def consumed_predicates(self) -> Dict[PredicateKey, Rule]:
        """Body predicates (excluding builtins), each with the first rule using it."""
        consumed: Dict[PredicateKey, Rule] = {}
        for rule in self._rules:
            for literal in rule.body:
                if literal.key not in self._builtins:
                    consumed.setdefault(literal.key, rule)
        return consumed

    def directive_values(self, name: str) -> List[Tuple[Term, ...]]:
        return [directive.args for directive in self._directives if directive.name == name]

    def hooks(self) -> Set[PredicateKey]:
        """Predicates declared with `#hook(name/arity).`"""
        hooks = set()
        for args in self.directive_values('hook'):
            for arg in args:
                key = predicate_indicator(arg)
                if key is not None:
                    hooks.add(key)
        return hooks

    def stratification(self) -> Dict[PredicateKey, int]:
        """
        Predicate -> stratum map, computed on first use.

        Raises:
            StratificationError: when a negation cycle exists
        """
        if self._strata is None:
            self._strata = stratify(self)
        return self._strata

    def with_facts(self, facts: Iterable[Atom]) -> 'Program':
        """
        Working copy with extra ground facts appended.

        Facts add no dependency edges, so a known stratification carries over
        with new predicates placed in stratum 0.
        """
        extra = tuple(Rule(fact) for fact in facts)
        copy = Program(self._rules + extra, self._builtins, self._directives)
        if self._strata is not None:
            strata = dict(self._strata)
            for rule in extra:
                strata.setdefault(rule.head.key, 0)
            copy._strata = strata
        return copy

    def with_builtins(self, builtins: Mapping[PredicateKey, BuiltinHook]) -> 'Program':
        """Working copy with extra or replaced builtins."""
        merged = dict(self._builtins)
        merged.update(builtins)
        copy = Program(self._rules, merged, self._directives)
        copy._strata = self._strata
        return copy

    def undefined_predicates(self, external: Iterable[PredicateKey] = ()) -> Dict[PredicateKey, Rule]:
        """
        Consumed predicates with no rules, no facts and no builtin.

        Args:
            external: Predicates supplied from outside the program (scene facts)
        """
        defined = self.defined_predicates() | self.hooks() | set(external)
        return {key: rule for key, rule in self.consumed_predicates().items()
                if key not in defined}

    def safety_warnings(self) -> List[str]:
        """
        Static groundedness check for negated literals.

        Every variable of a negated body literal must occur in the head or in
        an earlier positive body literal.
        """
        warnings = []
        for rule in self._rules:
            bound = set(variables_of(rule.head)) if rule.head is not None else set()
            for literal in rule.body:
                if literal.naf:
                    unbound = [var.name for var in variables_of(literal.atom) if var not in bound]
                    if unbound:
                        warnings.append(
                            f"line {rule.line}: variables {', '.join(unbound)} of "
                            f"'{literal}' are not bound before negation in: {rule}"
                        )
                else:
                    bound.update(variables_of(literal.atom))
        return warnings

    def lint(self, external: Iterable[PredicateKey] = ()) -> List[str]:
        """Load-time warnings: undefined predicates and unsafe negation."""
        warnings = [
            f"line {rule.line}: predicate {format_key(key)} has no rules or facts "
            f"and will always fail"
            for key, rule in self.undefined_predicates(external).items()
        ]
        warnings.extend(self.safety_warnings())
        return warnings
