"""
Builtin predicates evaluated by the host rather than by resolution.

A builtin hook takes the (unresolved) call arguments and the current
substitution and yields zero or more extended substitutions.
"""

from typing import Callable, Dict, Iterator, Mapping, Tuple, Union

from src.core.errors import ArithmeticTypeError
from src.core.terms import Compound, Num, PredicateKey, Seq, Term, Var
from src.core.unify import Substitution, unify

BuiltinHook = Callable[[Tuple[Term, ...], Substitution], Iterator[Substitution]]
BuiltinRegistry = Mapping[PredicateKey, BuiltinHook]

Number = Union[int, float]


def evaluate(term: Term, s: Substitution) -> Number:
    """
    Evaluate an arithmetic expression.

    Args:
        term: Number, bound variable, or `+ - * /` / unary minus / abs compound
        s: Current substitution

    Returns:
        The numeric value

    Raises:
        ArithmeticTypeError: on unbound variables or non-numeric terms
    """
    term = s.walk(term)
    if isinstance(term, Num):
        return term.value
    if isinstance(term, Var):
        raise ArithmeticTypeError(f"arithmetic on unbound variable {term}")
    if isinstance(term, Compound):
        if len(term.args) == 2 and term.functor in ('+', '-', '*', '/'):
            left = evaluate(term.args[0], s)
            right = evaluate(term.args[1], s)
            if term.functor == '+':
                return left + right
            if term.functor == '-':
                return left - right
            if term.functor == '*':
                return left * right
            if right == 0:
                raise ArithmeticTypeError(f"division by zero in {s.resolve(term)}")
            if isinstance(left, int) and isinstance(right, int) and left % right == 0:
                return left // right
            return left / right
        if len(term.args) == 1 and term.functor == '-':
            return -evaluate(term.args[0], s)
        if len(term.args) == 1 and term.functor == 'abs':
            return abs(evaluate(term.args[0], s))
    raise ArithmeticTypeError(f"arithmetic on non-numeric term {s.resolve(term)}")


def _comparison(test: Callable[[Number, Number], bool]) -> BuiltinHook:
    def hook(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
        if test(evaluate(args[0], s), evaluate(args[1], s)):
            yield s
    return hook


def _unify_builtin(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    extended = unify(args[0], args[1], s)
    if extended is not None:
        yield extended


def _not_unifiable(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    if unify(args[0], args[1], s) is None:
        yield s


def _is(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    extended = unify(args[0], Num(evaluate(args[1], s)), s)
    if extended is not None:
        yield extended


def _as_number(term: Term, value: Number, s: Substitution) -> Num:
    # argmin/argmax keep the original constant so 15.6 stays 15.6
    walked = s.walk(term)
    return walked if isinstance(walked, Num) else Num(value)


def _minimum(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    first, second = evaluate(args[0], s), evaluate(args[1], s)
    if first <= second:
        chosen = _as_number(args[0], first, s)
    else:
        chosen = _as_number(args[1], second, s)
    extended = unify(args[2], chosen, s)
    if extended is not None:
        yield extended


def _maximum(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    first, second = evaluate(args[0], s), evaluate(args[1], s)
    if first >= second:
        chosen = _as_number(args[0], first, s)
    else:
        chosen = _as_number(args[1], second, s)
    extended = unify(args[2], chosen, s)
    if extended is not None:
        yield extended


def _member(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
    sequence = s.walk(args[1])
    while isinstance(sequence, Seq):
        for item in sequence.items:
            extended = unify(args[0], item, s)
            if extended is not None:
                yield extended
        if sequence.tail is None:
            return
        sequence = s.walk(sequence.tail)


STANDARD_BUILTINS: Dict[PredicateKey, BuiltinHook] = {
    ('=<', 2): _comparison(lambda a, b: a <= b),
    ('<', 2): _comparison(lambda a, b: a < b),
    ('>=', 2): _comparison(lambda a, b: a >= b),
    ('>', 2): _comparison(lambda a, b: a > b),
    ('=', 2): _unify_builtin,
    ('\\=', 2): _not_unifiable,
    ('is', 2): _is,
    ('minimum', 3): _minimum,
    ('maximum', 3): _maximum,
    ('member', 2): _member,
}


def predicate_hook(test: Callable[..., bool]) -> BuiltinHook:
    """Wrap a host test over resolved arguments as a semidet builtin."""
    def hook(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
        if test(*(s.resolve(arg) for arg in args)):
            yield s
    return hook


def function_hook(compute: Callable[..., Term], inputs: int) -> BuiltinHook:
    """
    Wrap a host function as a builtin whose last argument receives the result.

    Args:
        compute: Called with the first ``inputs`` resolved arguments
        inputs: Number of input arguments

    Returns:
        Builtin hook unifying the computed term with the output argument
    """
    def hook(args: Tuple[Term, ...], s: Substitution) -> Iterator[Substitution]:
        result = compute(*(s.resolve(arg) for arg in args[:inputs]))
        extended = unify(args[inputs], result, s)
        if extended is not None:
            yield extended
    return hook
