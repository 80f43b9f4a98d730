import pytest

from src.core.errors import StratificationError
from src.core.parser import parse_program
from src.core.stratify import DependencyGraph, stratify


def test_even_loop_is_rejected():
    program = parse_program("p :- not q.\nq :- not p.\n")
    with pytest.raises(StratificationError) as excinfo:
        stratify(program)
    assert set(excinfo.value.cycle) == {'p/0', 'q/0'}
    assert 'negation cycle' in str(excinfo.value)


def test_self_negation_is_rejected():
    with pytest.raises(StratificationError, match=r'p/1'):
        parse_program("p(X) :- q(X), not p(X).\nq(a).").stratification()


def test_positive_recursion_is_allowed():
    program = parse_program(
        "path(X, Y) :- edge(X, Y).\n"
        "path(X, Y) :- edge(X, Z), path(Z, Y).\n"
        "edge(a, b).\n"
    )
    strata = stratify(program)
    assert strata[('path', 2)] == strata[('edge', 2)] == 0


def test_negation_raises_the_stratum():
    program = parse_program(
        "a :- not b.\n"
        "b :- c.\n"
        "c.\n"
        "d :- a, not c.\n"
    )
    strata = stratify(program)
    assert strata[('b', 0)] == strata[('c', 0)] == 0
    assert strata[('a', 0)] == 1
    assert strata[('d', 0)] == 1


def test_positive_cycle_shares_a_stratum_above_its_negations():
    program = parse_program(
        "p :- q, not r.\n"
        "q :- p.\n"
        "r.\n"
    )
    strata = stratify(program)
    assert strata[('p', 0)] == strata[('q', 0)] == 1
    assert strata[('r', 0)] == 0


def test_builtins_are_not_graph_nodes():
    program = parse_program("p(X) :- q(X), X > 3.\nq(5).")
    graph = DependencyGraph(program)
    assert ('>', 2) not in graph.nodes
    assert graph.edges[('p', 1)] == {('q', 1): False}


def test_components_come_dependencies_first():
    program = parse_program("top :- mid.\nmid :- low.\nlow.")
    order = [component[0] for component in DependencyGraph(program).components()]
    assert order.index(('low', 0)) < order.index(('mid', 0)) < order.index(('top', 0))


def test_long_chain_does_not_recurse():
    text = ''.join(f"p{i} :- not p{i + 1}.\n" for i in range(3000)) + "p3000.\n"
    strata = stratify(parse_program(text))
    assert strata[('p0', 0)] == 3000


def test_stratification_is_cached_on_program():
    program = parse_program("a :- not b.\nb.")
    assert program.stratification() is program.stratification()
