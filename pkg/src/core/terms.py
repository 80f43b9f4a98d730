"""
Term, literal and rule types of the logic language.

Terms are immutable and hashable so that ground atoms can be used as set
members (loop checking, fact sets) and programs can be shared across threads.
"""

from dataclasses import dataclass, field
from typing import Iterator, Optional, Tuple, Union

PredicateKey = Tuple[str, int]

# Functors rendered infix
ARITHMETIC_OPERATORS = ('+', '-', '*', '/')
COMPARISON_OPERATORS = ('=<', '<', '>=', '>', '=', '\\=', 'is')


@dataclass(frozen=True)
class Var:
    """Logic variable. Names start with an uppercase letter or '_'."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Sym:
    """Symbolic constant. Names start with a lowercase letter."""
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True)
class Num:
    """Integer or decimal constant."""
    value: Union[int, float]

    def __str__(self) -> str:
        return repr(self.value)


@dataclass(frozen=True)
class Seq:
    """Sequence `[a, b | Tail]`; `tail` is None for a closed sequence."""
    items: Tuple['Term', ...] = ()
    tail: Optional['Term'] = None

    def __str__(self) -> str:
        inner = ', '.join(str(item) for item in self.items)
        if self.tail is not None:
            return f"[{inner} | {self.tail}]"
        return f"[{inner}]"


@dataclass(frozen=True)
class Compound:
    """Functor applied to argument terms, e.g. `pt(0, 10)` or `V * 2`."""
    functor: str
    args: Tuple['Term', ...]

    def __str__(self) -> str:
        if self.functor in ARITHMETIC_OPERATORS and len(self.args) == 2:
            return f"{self.args[0]}{self.functor}{self.args[1]}"
        if self.functor == '-' and len(self.args) == 1:
            return f"-{self.args[0]}"
        return f"{self.functor}({', '.join(str(arg) for arg in self.args)})"


Term = Union[Var, Sym, Num, Seq, Compound]

EMPTY_SEQ = Seq()


@dataclass(frozen=True)
class Atom:
    """Predicate applied to arguments."""
    name: str
    args: Tuple[Term, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    @property
    def key(self) -> PredicateKey:
        return (self.name, len(self.args))

    def __str__(self) -> str:
        if self.name in COMPARISON_OPERATORS and len(self.args) == 2:
            return f"{self.args[0]} {self.name} {self.args[1]}"
        if not self.args:
            return self.name
        return f"{self.name}({', '.join(str(arg) for arg in self.args)})"


@dataclass(frozen=True)
class Literal:
    """Body literal: an atom, optionally under negation-as-failure."""
    atom: Atom
    naf: bool = False

    @property
    def key(self) -> PredicateKey:
        return self.atom.key

    def positive(self) -> 'Literal':
        return Literal(self.atom) if self.naf else self

    def __str__(self) -> str:
        return f"not {self.atom}" if self.naf else str(self.atom)


@dataclass(frozen=True)
class Rule:
    """
    Clause of a program.

    A fact has an empty body. A constraint has no head (``head is None``) and
    a nonempty body. ``line``, ``group`` and ``completion`` are source
    bookkeeping and do not take part in equality.
    """
    head: Optional[Atom]
    body: Tuple[Literal, ...] = ()
    line: int = field(default=0, compare=False)
    group: Optional[str] = field(default=None, compare=False)
    completion: bool = field(default=False, compare=False)

    @property
    def is_fact(self) -> bool:
        return self.head is not None and not self.body

    @property
    def is_constraint(self) -> bool:
        return self.head is None

    def __str__(self) -> str:
        body = ', '.join(str(lit) for lit in self.body)
        if self.head is None:
            return f":- {body}."
        if not self.body:
            return f"{self.head}."
        return f"{self.head} :- {body}."


def iter_variables(term: Union[Term, Atom, Literal, Rule]) -> Iterator[Var]:
    """Yield the variables of a term, atom, literal or rule in left-to-right order."""
    if isinstance(term, Var):
        yield term
    elif isinstance(term, Compound):
        for arg in term.args:
            yield from iter_variables(arg)
    elif isinstance(term, Seq):
        for item in term.items:
            yield from iter_variables(item)
        if term.tail is not None:
            yield from iter_variables(term.tail)
    elif isinstance(term, Atom):
        for arg in term.args:
            yield from iter_variables(arg)
    elif isinstance(term, Literal):
        yield from iter_variables(term.atom)
    elif isinstance(term, Rule):
        if term.head is not None:
            yield from iter_variables(term.head)
        for lit in term.body:
            yield from iter_variables(lit)


def variables_of(term: Union[Term, Atom, Literal, Rule]) -> Tuple[Var, ...]:
    """Distinct variables in first-appearance order."""
    seen = {}
    for var in iter_variables(term):
        seen.setdefault(var, None)
    return tuple(seen)


def is_ground(term: Union[Term, Atom, Literal]) -> bool:
    return next(iter_variables(term), None) is None


def seq_to_list(term: Term) -> Optional[Tuple[Term, ...]]:
    """Items of a closed, fully resolved sequence; None for anything else."""
    items = []
    while isinstance(term, Seq):
        items.extend(term.items)
        if term.tail is None:
            return tuple(items)
        term = term.tail
    return None
