"""
Main module for the discern driving decision engine.

This module provides the command line interface: deciding single frames,
replaying scenarios, benchmarking latency and checking rulebases.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

from src.config import (
    DEFAULT_BENCH_REPETITIONS,
    EXIT_BUDGET_EXCEEDED,
    EXIT_ENGINE_ERROR,
    EXIT_INPUT_ERROR,
    EXIT_LINT_FAILURE,
    EXIT_OK,
    EXIT_STRATIFICATION_ERROR,
)
from src.core.errors import (
    EngineError, InputError, LintError, ParseError, ScenarioError, StratificationError,
)
from src.core.parser import parse_clauses
from src.core.program import Program
from src.processors.bench import run_bench
from src.processors.decision import decide
from src.processors.records import DecisionRecord
from src.processors.rulebase import Rulebase, load_rulebase
from src.sources.scenario_parser import load_corpus, load_scenario
from src.utils.file_utils import expand_rules_paths, read_text

logger = logging.getLogger('discern')


def parse_arguments(argv: Optional[Sequence[str]] = None) -> argparse.Namespace:
    """Parse command line arguments."""
    parser = argparse.ArgumentParser(
        prog='discern',
        description='Rule-based driving decisions with English justifications.'
    )
    parser.add_argument(
        '--verbose', '-v',
        action='store_true',
        help='Log debug output to standard error'
    )
    parser.add_argument(
        '--overlay',
        action='append',
        default=[],
        metavar='RULES',
        help='Extra rulebase file loaded after the shipped catalog (repeatable)'
    )
    commands = parser.add_subparsers(dest='command', required=True)

    decide_parser = commands.add_parser('decide', help='Decide one frame of a scenario')
    decide_parser.add_argument('scenario', help='Scenario file (.scn)')
    decide_parser.add_argument('--t', type=int, required=True, help='Frame timestamp')
    _add_output_arguments(decide_parser)

    run_parser = commands.add_parser('run', help='Decide every frame of a scenario')
    run_parser.add_argument('scenario', help='Scenario file (.scn)')
    _add_output_arguments(run_parser)

    bench_parser = commands.add_parser('bench', help='Measure decision latency over a corpus')
    bench_parser.add_argument('corpus', help='Directory of scenario files')
    bench_parser.add_argument(
        '--reps',
        type=int,
        default=DEFAULT_BENCH_REPETITIONS,
        help=f'Decisions per frame (default: {DEFAULT_BENCH_REPETITIONS})'
    )
    bench_parser.add_argument('--assert-avg-ms', type=float, help='Fail if an average exceeds this')
    bench_parser.add_argument('--assert-max-ms', type=float, help='Fail if a maximum exceeds this')
    bench_parser.add_argument('--workers', type=int, default=1, help='Concurrent decision threads')
    bench_parser.add_argument('--format', choices=('text', 'json'), default='text')

    check_parser = commands.add_parser('check', help='Parse, stratify and lint rulebases')
    check_parser.add_argument(
        'rulebases',
        nargs='*',
        help='Rulebase files (or directories of .rules files) checked as overlays on the shipped catalog'
    )
    check_parser.add_argument('--strict', action='store_true', help='Fail on lint warnings')
    check_parser.add_argument(
        '--standalone',
        action='store_true',
        help='Check the given files without the shipped catalog'
    )

    return parser.parse_args(argv)


def _add_output_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--explain', action='store_true', help='Append the justification')
    parser.add_argument('--max-depth', type=int, help='Justification levels to print')
    parser.add_argument('--format', choices=('text', 'json'), default='text')


def configure_logging(verbose: bool = False) -> None:
    """Send diagnostics to standard error."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(levelname)s: %(message)s',
        stream=sys.stderr,
        force=True,
    )


def _load(args: argparse.Namespace) -> Rulebase:
    return load_rulebase([Path(path) for path in args.overlay])


def _emit(record: DecisionRecord, output_format: str) -> None:
    if output_format == 'json':
        print(record.to_json())
    else:
        sys.stdout.write(record.format_text())


def cmd_decide(args: argparse.Namespace) -> int:
    rulebase = _load(args)
    scenario = load_scenario(args.scenario)
    decision = decide(rulebase, scenario, args.t, explain=args.explain)
    _emit(DecisionRecord.from_decision(decision, args.explain, args.max_depth), args.format)
    return EXIT_OK


def cmd_run(args: argparse.Namespace) -> int:
    rulebase = _load(args)
    scenario = load_scenario(args.scenario)
    for t in scenario.timestamps:
        decision = decide(rulebase, scenario, t, explain=args.explain)
        _emit(DecisionRecord.from_decision(decision, args.explain, args.max_depth), args.format)
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    rulebase = _load(args)
    scenarios = load_corpus(args.corpus)
    report = run_bench(rulebase, scenarios, args.reps, args.workers)
    if args.format == 'json':
        print(json.dumps(report.to_dict(), indent=2))
    else:
        sys.stdout.write(report.format_table())

    problems = report.exceeds(args.assert_avg_ms, args.assert_max_ms)
    for problem in problems:
        logger.error(problem)
    return EXIT_BUDGET_EXCEEDED if problems else EXIT_OK


def _check_standalone(paths: Sequence[Path], strict: bool) -> int:
    rules = []
    directives = []
    for path in paths:
        parsed_rules, parsed_directives = parse_clauses(read_text(path, 'rulebase'), str(path))
        rules.extend(parsed_rules)
        directives.extend(parsed_directives)
    program = Program(rules, directives=directives)
    strata = program.stratification()
    warnings = program.lint()
    for warning in warnings:
        logger.warning(warning)
    if strict and warnings:
        raise LintError(warnings)
    print(f"{len(program)} rules, {max(strata.values(), default=0) + 1} strata, "
          f"{len(warnings)} warning(s)")
    return EXIT_OK


def cmd_check(args: argparse.Namespace) -> int:
    paths = expand_rules_paths(args.rulebases)
    if args.standalone:
        if not paths:
            raise InputError("--standalone needs at least one rulebase file")
        return _check_standalone(paths, args.strict)

    rulebase = load_rulebase([Path(path) for path in args.overlay] + paths, strict=args.strict)
    strata = rulebase.program.stratification()
    for group in rulebase.coverage():
        marker = ' (completion)' if group.completion else ''
        print(f"{group.tag:<18}{group.layer:<14}{group.rules:>3} rule(s){marker}")
    print(f"{len(rulebase.program)} rules, {max(strata.values(), default=0) + 1} strata, "
          f"{len(rulebase.warnings)} warning(s)")
    return EXIT_OK


COMMANDS = {
    'decide': cmd_decide,
    'run': cmd_run,
    'bench': cmd_bench,
    'check': cmd_check,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """Main entry point for the application."""
    args = parse_arguments(argv)
    configure_logging(args.verbose)

    try:
        return COMMANDS[args.command](args)
    except (InputError, ParseError, ScenarioError) as error:
        logger.error(str(error))
        return EXIT_INPUT_ERROR
    except StratificationError as error:
        logger.error(str(error))
        return EXIT_STRATIFICATION_ERROR
    except LintError as error:
        logger.error(str(error))
        return EXIT_LINT_FAILURE
    except EngineError as error:
        logger.error(str(error))
        return EXIT_ENGINE_ERROR


if __name__ == '__main__':
    sys.exit(main())
