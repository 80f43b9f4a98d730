"""
Parser for the clause language shared by `.rules` and `.scn` files.

Built on ply: the lexer and LALR tables are generated once per process and
reused; every parse works on a cloned lexer carrying its own parse state.
"""

import bisect
import logging
import re
import threading
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import ply.lex as lex
import ply.yacc as yacc

from src.core.builtins import BuiltinRegistry
from src.core.errors import ParseError
from src.core.program import Directive, Program
from src.core.terms import (
    ARITHMETIC_OPERATORS, Atom, Compound, Literal, Num, Rule, Seq, Sym, Term, Var,
)

logger = logging.getLogger(__name__)

# `% [CLL-192] ...` labels the rules below it; `completion` marks catalog completions
GROUP_TAG_PATTERN = re.compile(r'^\s*%\s*\[([A-Z][A-Z0-9]*(?:-[A-Za-z0-9/*]+)*)\](.*)$')


@dataclass
class _ParseState:
    text: str
    source: Optional[str]
    group_lines: List[int]
    group_tags: List[Tuple[str, bool]]
    rules: List[Rule] = field(default_factory=list)
    directives: List[Directive] = field(default_factory=list)
    anonymous: int = 0

    def column(self, lexpos: int) -> int:
        return lexpos - self.text.rfind('\n', 0, lexpos)

    def group_at(self, line: int) -> Tuple[Optional[str], bool]:
        index = bisect.bisect_right(self.group_lines, line) - 1
        if index < 0:
            return None, False
        return self.group_tags[index]


def scan_group_tags(text: str) -> List[Tuple[int, str, bool]]:
    """
    Find rule-group tag comments.

    Args:
        text: Rulebase source

    Returns:
        List of (line number, tag, is_completion) in source order
    """
    tags = []
    for number, line in enumerate(text.splitlines(), start=1):
        match = GROUP_TAG_PATTERN.match(line)
        if match:
            tags.append((number, match.group(1), 'completion' in match.group(2).lower()))
    return tags


class _EndOfInput(Exception):
    """Input ended in the middle of a clause."""


class _ClauseGrammar:
    """ply lexer and grammar rules for clauses."""

    reserved = {'not': 'NOT', 'is': 'IS'}

    tokens = (
        'NAME', 'VARIABLE', 'INTEGER', 'DECIMAL', 'DIRECTIVE',
        'IF', 'DOT', 'COMMA', 'SEMI', 'PIPE',
        'LPAREN', 'RPAREN', 'LBRACKET', 'RBRACKET',
        'LE', 'GE', 'LT', 'GT', 'EQ', 'NE',
        'PLUS', 'MINUS', 'TIMES', 'DIVIDE',
        'NOT', 'IS',
    )

    precedence = (
        ('left', 'PLUS', 'MINUS'),
        ('left', 'TIMES', 'DIVIDE'),
        ('right', 'UMINUS'),
    )

    t_IF = r':-'
    t_DOT = r'\.'
    t_COMMA = r','
    t_SEMI = r';'
    t_PIPE = r'\|'
    t_LPAREN = r'\('
    t_RPAREN = r'\)'
    t_LBRACKET = r'\['
    t_RBRACKET = r'\]'
    t_LE = r'=<'
    t_GE = r'>='
    t_NE = r'\\='
    t_LT = r'<'
    t_GT = r'>'
    t_EQ = r'='
    t_PLUS = r'\+'
    t_MINUS = r'-'
    t_TIMES = r'\*'
    t_DIVIDE = r'/'

    t_ignore = ' \t\r'

    def t_COMMENT(self, t):
        r'%[^\n]*'

    def t_DECIMAL(self, t):
        r'\d+\.\d+'
        t.value = float(t.value)
        return t

    def t_INTEGER(self, t):
        r'\d+'
        t.value = int(t.value)
        return t

    def t_DIRECTIVE(self, t):
        r'\#[a-z][A-Za-z0-9_]*'
        t.value = t.value[1:]
        return t

    def t_NAME(self, t):
        r'[a-z][A-Za-z0-9_]*'
        t.type = self.reserved.get(t.value, 'NAME')
        return t

    def t_VARIABLE(self, t):
        r'[A-Z_][A-Za-z0-9_]*'
        if t.value == '_':
            state = t.lexer.state
            t.value = f"_{state.anonymous}"
            state.anonymous += 1
        return t

    def t_newline(self, t):
        r'\n+'
        t.lexer.lineno += len(t.value)

    def t_error(self, t):
        state = t.lexer.state
        raise ParseError('illegal character', t.lineno, state.column(t.lexpos),
                         t.value[0], state.source)

    # Grammar

    def p_program(self, p):
        '''program : clause_list'''

    def p_clause_list(self, p):
        '''clause_list : clause_list clause
                       | empty'''

    def p_empty(self, p):
        '''empty :'''

    def p_clause_fact(self, p):
        '''clause : term DOT'''
        self._add_rule(p, self._atom(p, p[1], 1), [[]])

    def p_clause_rule(self, p):
        '''clause : term IF body DOT'''
        self._add_rule(p, self._atom(p, p[1], 1), p[3])

    def p_clause_constraint(self, p):
        '''clause : IF body DOT'''
        self._add_rule(p, None, p[2])

    def p_clause_directive(self, p):
        '''clause : DIRECTIVE LPAREN arguments RPAREN DOT'''
        state = p.lexer.state
        state.directives.append(Directive(p[1], tuple(p[3]), p.lineno(1)))

    def p_clause_negated_head(self, p):
        '''clause : NOT term DOT
                  | NOT term IF body DOT'''
        state = p.lexer.state
        raise ParseError('negation-as-failure in rule head', p.lineno(1),
                         state.column(p.lexpos(1)), 'not', state.source)

    def p_body(self, p):
        '''body : conjunction
                | body SEMI conjunction'''
        if len(p) == 2:
            p[0] = [p[1]]
        else:
            p[0] = p[1] + [p[3]]

    def p_conjunction(self, p):
        '''conjunction : literal
                       | conjunction COMMA literal'''
        if len(p) == 2:
            p[0] = [p[1]]
        else:
            p[0] = p[1] + [p[3]]

    def p_literal_positive(self, p):
        '''literal : term'''
        p[0] = Literal(self._atom(p, p[1], 1))

    def p_literal_naf(self, p):
        '''literal : NOT term'''
        p[0] = Literal(self._atom(p, p[2], 2), naf=True)

    def p_literal_builtin(self, p):
        '''literal : term LE term
                   | term LT term
                   | term GE term
                   | term GT term
                   | term EQ term
                   | term NE term
                   | term IS term'''
        p[0] = Literal(Atom(p[2], (p[1], p[3])))

    def p_term_binary(self, p):
        '''term : term PLUS term
                | term MINUS term
                | term TIMES term
                | term DIVIDE term'''
        p[0] = Compound(p[2], (p[1], p[3]))

    def p_term_negative(self, p):
        '''term : MINUS term %prec UMINUS'''
        if isinstance(p[2], Num):
            p[0] = Num(-p[2].value)
        else:
            p[0] = Compound('-', (p[2],))

    def p_term_group(self, p):
        '''term : LPAREN term RPAREN'''
        p[0] = p[2]

    def p_term_symbol(self, p):
        '''term : NAME'''
        p[0] = Sym(p[1])

    def p_term_compound(self, p):
        '''term : NAME LPAREN arguments RPAREN'''
        p[0] = Compound(p[1], tuple(p[3]))

    def p_term_variable(self, p):
        '''term : VARIABLE'''
        p[0] = Var(p[1])

    def p_term_number(self, p):
        '''term : INTEGER
                | DECIMAL'''
        p[0] = Num(p[1])

    def p_term_sequence(self, p):
        '''term : LBRACKET RBRACKET
                | LBRACKET arguments RBRACKET
                | LBRACKET arguments PIPE term RBRACKET'''
        if len(p) == 3:
            p[0] = Seq()
        elif len(p) == 4:
            p[0] = Seq(tuple(p[2]))
        else:
            p[0] = Seq(tuple(p[2]), p[4])

    def p_arguments(self, p):
        '''arguments : term
                     | arguments COMMA term'''
        if len(p) == 2:
            p[0] = [p[1]]
        else:
            p[0] = p[1] + [p[3]]

    def p_error(self, t):
        if t is None:
            raise _EndOfInput()
        state = t.lexer.state
        raise ParseError('syntax error', t.lineno, state.column(t.lexpos), str(t.value),
                         state.source)

    # Helpers

    def _atom(self, p, term: Term, index: int) -> Atom:
        if isinstance(term, Sym):
            return Atom(term.name)
        if isinstance(term, Compound) and term.functor not in ARITHMETIC_OPERATORS:
            return Atom(term.functor, term.args)
        state = p.lexer.state
        raise ParseError('expected an atom', p.lineno(index),
                         state.column(p.lexpos(index)), str(term), state.source)

    def _add_rule(self, p, head: Optional[Atom], disjuncts: List[List[Literal]]) -> None:
        state = p.lexer.state
        line = p.lineno(1)
        group, completion = state.group_at(line)
        for conjunction in disjuncts:
            state.rules.append(Rule(head, tuple(conjunction), line, group, completion))


_grammar = _ClauseGrammar()
_lexer = None
_parser = None
_lock = threading.Lock()


def _build() -> None:
    global _lexer, _parser
    if _parser is None:
        _lexer = lex.lex(module=_grammar)
        _parser = yacc.yacc(module=_grammar, start='program', debug=False,
                            write_tables=False, errorlog=yacc.NullLogger())


def parse_clauses(text: str, source: Optional[str] = None) -> Tuple[Tuple[Rule, ...], Tuple[Directive, ...]]:
    """
    Parse clause text into rules and directives.

    Args:
        text: Source text (`%` line comments, clauses terminated by `.`)
        source: Name used in error messages

    Returns:
        Tuple of (rules in source order, directives in source order)

    Raises:
        ParseError: with line, column and offending token
    """
    tags = scan_group_tags(text)
    state = _ParseState(
        text=text,
        source=source,
        group_lines=[line for line, _, _ in tags],
        group_tags=[(tag, completion) for _, tag, completion in tags],
    )
    with _lock:
        _build()
        lexer = _lexer.clone()
        lexer.lineno = 1
        lexer.state = state
        try:
            _parser.parse(text, lexer=lexer, tracking=True)
        except _EndOfInput:
            lines = text.rstrip().splitlines() or ['']
            raise ParseError('unterminated clause (missing final ".")', len(lines),
                             len(lines[-1]), None, source) from None
    return tuple(state.rules), tuple(state.directives)


def parse_program(text: str, source: Optional[str] = None,
                  builtins: Optional[BuiltinRegistry] = None) -> Program:
    """
    Parse a rulebase into a Program.

    Args:
        text: Rulebase source
        source: Name used in error messages
        builtins: Builtin registry (defaults to the standard builtins)

    Returns:
        Program preserving source order; `;` bodies become one rule per disjunct
    """
    rules, directives = parse_clauses(text, source)
    logger.debug("Parsed %d rules and %d directives from %s",
                 len(rules), len(directives), source or '<text>')
    return Program(rules, builtins=builtins, directives=directives)


def parse_goals(text: str) -> Tuple[Literal, ...]:
    """
    Parse a query such as ``select_action(A, t0), not p`` into goal literals.

    Raises:
        ParseError: on syntax errors or when the query contains `;`
    """
    rules, _ = parse_clauses(f":- {text.strip().rstrip('.')}.", '<query>')
    if len(rules) != 1:
        raise ParseError('disjunction is not allowed in a query', 1, 1, ';', '<query>')
    return rules[0].body

