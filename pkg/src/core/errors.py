"""
Exception hierarchy for the decision engine.

Library code raises these; only the command-line front end turns them into
exit codes.
"""

from typing import Iterable, List, Optional, Sequence


class DiscernError(Exception):
    """Base class for every error raised by the engine."""


class InputError(DiscernError):
    """A source file cannot be read."""

    def __init__(self, message: str, source: Optional[str] = None):
        self.source = source
        super().__init__(f"{source}: {message}" if source else message)


class ParseError(DiscernError):
    """Syntax error in a rulebase or scenario source."""

    def __init__(self, message: str, line: int = 0, column: int = 0,
                 token: Optional[str] = None, source: Optional[str] = None):
        self.line = line
        self.column = column
        self.token = token
        self.source = source
        location = f"{source or '<text>'}:{line}:{column}"
        detail = f" near {token!r}" if token is not None else ''
        super().__init__(f"{location}: {message}{detail}")


class StratificationError(DiscernError):
    """The program has a negation-as-failure cycle."""

    def __init__(self, cycle: Sequence[str]):
        self.cycle = tuple(cycle)
        super().__init__(
            f"program is not stratified: negation cycle through {{{', '.join(self.cycle)}}}"
        )


class EngineError(DiscernError):
    """Dynamic error raised while solving."""


class NonGroundNegationError(EngineError):
    """A negated goal was selected before all of its variables were bound."""

    def __init__(self, literal: str, variables: Iterable[str]):
        self.literal = literal
        self.variables = tuple(variables)
        super().__init__(
            f"negated goal '{literal}' is not ground "
            f"(unbound: {', '.join(self.variables)})"
        )


class ArithmeticTypeError(EngineError):
    """Arithmetic was attempted on a non-numeric or unbound term."""


class SearchDepthError(EngineError):
    """The search exceeded the configured depth limit."""


class ScenarioError(DiscernError):
    """A scenario file is malformed or violates a frame invariant."""

    def __init__(self, diagnostics: Sequence[str], source: Optional[str] = None):
        self.diagnostics: List[str] = list(diagnostics)
        self.source = source
        prefix = f"{source}: " if source else ''
        super().__init__(prefix + '; '.join(self.diagnostics))


class LintError(DiscernError):
    """Strict-mode rulebase lint found problems."""

    def __init__(self, warnings: Sequence[str]):
        self.warnings = list(warnings)
        super().__init__(f"rulebase lint failed with {len(self.warnings)} warning(s)")
