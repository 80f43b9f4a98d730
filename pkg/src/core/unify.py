"""
Substitutions and most-general unification with occurs-check.
"""

from typing import Dict, Iterator, Mapping, Optional, Union

from src.core.terms import Atom, Compound, EMPTY_SEQ, Literal, Num, Seq, Term, Var


class Substitution(Mapping[Var, Term]):
    """
    Immutable variable bindings.

    Bindings may chain (``X -> Y``, ``Y -> a``); :meth:`resolve` follows them
    and returns a fully applied term, so resolving twice equals resolving once.
    """

    __slots__ = ('_bindings',)

    def __init__(self, bindings: Optional[Dict[Var, Term]] = None):
        self._bindings: Dict[Var, Term] = dict(bindings) if bindings else {}

    def __getitem__(self, var: Var) -> Term:
        return self._bindings[var]

    def __iter__(self) -> Iterator[Var]:
        return iter(self._bindings)

    def __len__(self) -> int:
        return len(self._bindings)

    def __repr__(self) -> str:
        inner = ', '.join(f"{var} -> {self.resolve(var)}" for var in self._bindings)
        return f"{{{inner}}}"

    def bind(self, var: Var, term: Term) -> 'Substitution':
        extended = Substitution()
        extended._bindings = {**self._bindings, var: term}
        return extended

    def walk(self, term: Term) -> Term:
        """Dereference a variable chain at the top level only."""
        while isinstance(term, Var):
            bound = self._bindings.get(term)
            if bound is None:
                return term
            term = bound
        return term

    def resolve(self, term: Union[Term, Atom, Literal]):
        """Apply the substitution throughout a term, atom or literal."""
        if isinstance(term, Literal):
            return Literal(self.resolve(term.atom), term.naf)
        if isinstance(term, Atom):
            if not term.args:
                return term
            return Atom(term.name, tuple(self.resolve(arg) for arg in term.args))
        term = self.walk(term)
        if isinstance(term, Compound):
            return Compound(term.functor, tuple(self.resolve(arg) for arg in term.args))
        if isinstance(term, Seq):
            items = [self.resolve(item) for item in term.items]
            tail = self.resolve(term.tail) if term.tail is not None else None
            # Flatten [a | [b, c]] into [a, b, c]
            while isinstance(tail, Seq):
                items.extend(tail.items)
                tail = tail.tail
            return Seq(tuple(items), tail)
        return term


EMPTY_SUBSTITUTION = Substitution()


def occurs(var: Var, term: Term, s: Substitution) -> bool:
    """True if ``var`` occurs in ``term`` under ``s``."""
    term = s.walk(term)
    if term == var:
        return True
    if isinstance(term, Compound):
        return any(occurs(var, arg, s) for arg in term.args)
    if isinstance(term, Seq):
        if any(occurs(var, item, s) for item in term.items):
            return True
        return term.tail is not None and occurs(var, term.tail, s)
    return False


def unify(a: Term, b: Term, s: Substitution = EMPTY_SUBSTITUTION) -> Optional[Substitution]:
    """
    Most general unifier of ``a`` and ``b`` extending ``s``.

    Args:
        a: First term
        b: Second term
        s: Substitution to extend

    Returns:
        The extended substitution, or None when the terms do not unify
    """
    a = s.walk(a)
    b = s.walk(b)
    if a == b and type(a) is type(b):
        return s
    if isinstance(a, Var):
        return None if occurs(a, b, s) else s.bind(a, b)
    if isinstance(b, Var):
        return None if occurs(b, a, s) else s.bind(b, a)
    if isinstance(a, Compound) and isinstance(b, Compound):
        if a.functor != b.functor or len(a.args) != len(b.args):
            return None
        for x, y in zip(a.args, b.args):
            s = unify(x, y, s)
            if s is None:
                return None
        return s
    if isinstance(a, Seq) and isinstance(b, Seq):
        return _unify_seq(a, b, s)
    if isinstance(a, Num) and isinstance(b, Num):
        return s if a.value == b.value else None
    return None


def _unify_seq(a: Seq, b: Seq, s: Substitution) -> Optional[Substitution]:
    shared = min(len(a.items), len(b.items))
    for x, y in zip(a.items[:shared], b.items[:shared]):
        s = unify(x, y, s)
        if s is None:
            return None
    rest_a = Seq(a.items[shared:], a.tail)
    rest_b = Seq(b.items[shared:], b.tail)
    if rest_a.items:
        return None if b.tail is None else unify(b.tail, rest_a, s)
    if rest_b.items:
        return None if a.tail is None else unify(a.tail, rest_b, s)
    if a.tail is None and b.tail is None:
        return s
    return unify(a.tail if a.tail is not None else EMPTY_SEQ,
                 b.tail if b.tail is not None else EMPTY_SEQ, s)


def unify_atoms(a: Atom, b: Atom, s: Substitution) -> Optional[Substitution]:
    """Unify two atoms argument-wise."""
    if a.name != b.name or len(a.args) != len(b.args):
        return None
    for x, y in zip(a.args, b.args):
        s = unify(x, y, s)
        if s is None:
            return None
    return s
