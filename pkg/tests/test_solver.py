import random

import pytest

from src.core.errors import ArithmeticTypeError, NonGroundNegationError, SearchDepthError
from src.core.fixpoint import perfect_model
from src.core.parser import parse_program
from src.core.proof import Verdict
from src.core.solver import Solver, check_constraints, solve
from src.core.terms import Atom, Literal, Num, Sym, Var


def answers(text, query, variable):
    program = parse_program(text)
    return [answer.substitution.resolve(Var(variable)) for answer in solve(program, query)]


def test_answers_follow_rule_and_fact_order():
    text = "p(a). p(b). q(X) :- p(X). q(c)."
    assert answers(text, "q(X)", 'X') == [Sym('a'), Sym('b'), Sym('c')]


def test_conjunction_left_to_right():
    text = "e(1, 2). e(2, 3). e(3, 4). two(X, Z) :- e(X, Y), e(Y, Z)."
    assert answers(text, "two(1, Z)", 'Z') == [Num(3)]


def test_negation_as_failure():
    program = parse_program("bird(tweety). bird(sam). penguin(sam). flies(X) :- bird(X), not penguin(X).")
    result = list(solve(program, "flies(X)"))
    assert [answer.substitution.resolve(Var('X')) for answer in result] == [Sym('tweety')]
    naf_child = result[0].proof.children[1]
    assert naf_child.goal.naf
    assert naf_child.verdict is Verdict.NO_EVIDENCE


def test_arithmetic():
    text = "speed(20). gap(G) :- speed(V), H is 2 * V, maximum(H, 10, G)."
    assert answers(text, "gap(G)", 'G') == [Num(40)]


def test_non_ground_negation_names_the_variable():
    program = parse_program("p(X) :- not q(X). q(a).")
    with pytest.raises(NonGroundNegationError) as excinfo:
        list(solve(program, "p(Y)"))
    assert excinfo.value.variables == ('X',)
    assert 'not q(X)' in str(excinfo.value)


def test_arithmetic_on_unbound_variable():
    program = parse_program("big(X) :- X > 3.")
    with pytest.raises(ArithmeticTypeError):
        list(solve(program, "big(Y)"))


def test_arithmetic_on_symbol():
    program = parse_program("v(fast). big :- v(X), X > 3.")
    with pytest.raises(ArithmeticTypeError):
        list(solve(program, "big"))


def test_depth_limit():
    program = parse_program("n(X) :- n(s(X)).")
    program.stratification()
    with pytest.raises(SearchDepthError, match='depth limit 50'):
        Solver(program, max_depth=50).first("n(zero)")


def test_ground_positive_loop_fails_the_branch():
    program = parse_program("p :- q. q :- p. q :- r. r.")
    assert Solver(program).succeeds("p")
    assert not Solver(parse_program("p :- p.")).succeeds("p")


def test_recursion_over_lists():
    text = ("left_of(L, X, [L, X | _]).\n"
            "left_of(L, X, [_ | R]) :- left_of(L, X, R).\n")
    assert answers(text, "left_of(L, 3, [1, 2, 3])", 'L') == [Num(2)]


def test_unknown_predicate_fails():
    assert not Solver(parse_program("p.")).succeeds("missing(a)")


def test_first_returns_none_without_answers():
    assert Solver(parse_program("p(a).")).first("p(b)") is None


def test_proof_records_rule_instance():
    program = parse_program("p(a). q(X) :- p(X).")
    proof = Solver(program).first("q(a)").proof
    assert proof.holds
    assert str(proof.rule) == "q(a) :- p(a)."
    assert proof.children[0].goal.atom == Atom('p', (Sym('a'),))


def test_solvers_share_a_program():
    program = parse_program("p(a). p(b).")
    first, second = Solver(program), Solver(program)
    assert first.succeeds("p(a)") and second.succeeds("p(b)")


def test_explain_failure_lists_each_rule():
    program = parse_program("ok(T) :- light(green, T).\nok(T) :- override(T).\nlight(red, 1).")
    tree = Solver(program).explain_failure(Atom('ok', (Num(1),)))
    assert tree.verdict is Verdict.NO_EVIDENCE
    assert len(tree.children) == 2
    assert all(child.is_rule_failure for child in tree.children)
    assert tree.replays()


def test_check_constraints():
    program = parse_program("lane(1, 0). lane(2, 0). :- lane(A, T), lane(B, T), A \\= B.")
    result = check_constraints(program)
    assert not result.ok
    assert result.proof.goal.atom == Atom('false')
    assert result.proof.replays(program.builtins)

    assert check_constraints(parse_program("lane(1, 0). :- lane(A, T), lane(B, T), A \\= B.")).ok


# Goal-directed search against the bottom-up perfect model

CONSTANTS = ('a', 'b', 'c')


def _random_atom(rng, predicate):
    name, arity = predicate
    return name if arity == 0 else f"{name}({rng.choice(CONSTANTS)})"


def random_stratified_program(rng):
    """Ground program over at most 8 predicates and 20 rules; negation only points down."""
    count = rng.randint(1, 8)
    predicates = [(f"p{i}", rng.choice((0, 1))) for i in range(count)]
    level = {predicate: rng.randint(0, 3) for predicate in predicates}
    lines = []
    for _ in range(rng.randint(1, 20)):
        head = rng.choice(predicates)
        body = []
        for _ in range(rng.randint(0, 3)):
            candidate = rng.choice(predicates)
            if level[candidate] < level[head] and rng.random() < 0.5:
                body.append("not " + _random_atom(rng, candidate))
            elif level[candidate] <= level[head]:
                body.append(_random_atom(rng, candidate))
        head_text = _random_atom(rng, head)
        lines.append(f"{head_text} :- {', '.join(body)}." if body else f"{head_text}.")
    base = [Atom(name) if arity == 0 else Atom(name, (Sym(constant),))
            for name, arity in predicates
            for constant in (CONSTANTS if arity else ('',))]
    return '\n'.join(lines) + '\n', base


def test_agrees_with_perfect_model():
    rng = random.Random(20240917)
    for _ in range(1000):
        text, base = random_stratified_program(rng)
        program = parse_program(text)
        model = perfect_model(program)
        solver = Solver(program, explain_failures=False)
        provable = {atom for atom in base if solver.succeeds([atom])}
        assert provable == model, text


def test_negation_is_the_dual_of_provability():
    rng = random.Random(8128)
    for _ in range(300):
        text, base = random_stratified_program(rng)
        solver = Solver(parse_program(text), explain_failures=False)
        for atom in base:
            assert solver.succeeds([Literal(atom, naf=True)]) != solver.succeeds([atom]), (text, atom)


def test_every_proof_replays():
    rng = random.Random(4096)
    for _ in range(300):
        text, base = random_stratified_program(rng)
        program = parse_program(text)
        solver = Solver(program)
        for atom in base:
            for literal in (Literal(atom), Literal(atom, naf=True)):
                answer = solver.first([literal])
                if answer is not None:
                    assert answer.proof.replays(program.builtins), (text, literal)


def test_strata_respect_dependencies():
    rng = random.Random(65537)
    for _ in range(300):
        text, _ = random_stratified_program(rng)
        program = parse_program(text)
        strata = program.stratification()
        for rule in program.rules:
            head = strata[rule.head.key]
            for literal in rule.body:
                body = strata.get(literal.key, 0)
                assert head > body if literal.naf else head >= body, (text, str(rule))


def chain_program(length, padding):
    """p0 :- f, ..., f, p1.  ...  p<length>."""
    body = ', '.join(['f'] * padding)
    lines = [f"p{i} :- {body}, p{i + 1}." for i in range(length)]
    return parse_program('\n'.join(lines) + f"\np{length}.\nf.\n")


def test_long_bodies_within_the_depth_limit():
    program = chain_program(120, 8)
    answer = Solver(program).first("p0")
    assert answer is not None
    assert len(answer.proof.children) == 9


def test_deep_chain_fails_with_depth_error():
    program = chain_program(400, 8)
    with pytest.raises(SearchDepthError):
        Solver(program).succeeds("p0")
    with pytest.raises(SearchDepthError):
        list(solve(program, "p0"))
