"""
Loading, checking and auditing the driving rules catalog.

The shipped catalog is one `.rules` file per layer, read in CATALOG_LAYERS
order. Overlays are appended after it; they can only add rules.
"""

import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

from src.config import (
    ACTIONS, CATALOG_DIR, CATALOG_LAYERS, DEFAULT_DECELERATION, DEFAULT_REACTION_TIME,
)
from src.core.builtins import STANDARD_BUILTINS
from src.core.errors import LintError
from src.core.parser import parse_clauses
from src.core.program import Directive, Program, format_key
from src.core.terms import Rule, Sym
from src.sources.facts import scene_builtins, schema_keys
from src.utils.file_utils import read_text

logger = logging.getLogger(__name__)

OVERLAY_LAYER = 'overlay'

Overlay = Union[str, Path]


@dataclass(frozen=True)
class GroupCoverage:
    """Rules carrying one group tag."""
    tag: str
    layer: str
    rules: int
    completion: bool


@dataclass(frozen=True)
class Rulebase:
    """
    The loaded catalog.

    Attributes:
        program: All rules (catalog, then overlays) with scene builtins registered
        layers: Rules per layer name, in load order
        sources: Source names in load order
        warnings: Lint warnings found at load time
    """
    program: Program
    layers: Dict[str, Tuple[Rule, ...]]
    sources: Tuple[str, ...]
    warnings: Tuple[str, ...] = ()

    def coverage(self) -> List[GroupCoverage]:
        """Rule-group tags in source order with their rule counts."""
        counts: Dict[str, int] = {}
        info: Dict[str, Tuple[str, bool]] = {}
        for layer, rules in self.layers.items():
            for rule in rules:
                if rule.group is None:
                    continue
                counts[rule.group] = counts.get(rule.group, 0) + 1
                info.setdefault(rule.group, (layer, rule.completion))
        return [GroupCoverage(tag, info[tag][0], count, info[tag][1])
                for tag, count in counts.items()]

    def tags(self) -> List[str]:
        return [group.tag for group in self.coverage()]


def _read_overlay(overlay: Overlay, index: int) -> Tuple[str, str]:
    """Paths are read from disk; strings are rule text."""
    if isinstance(overlay, Path):
        return read_text(overlay, 'rulebase'), str(overlay)
    return overlay, f"<overlay {index}>"


def lint_rulebase(program: Program) -> List[str]:
    """
    Catalog checks on top of the generic program lint.

    Reports predicates that are consumed but never defined (scene facts and
    hooks count as defined), unsafe negation, scene facts no rule consumes,
    and `action` facts or `select_action` heads outside the action vocabulary.
    """
    schema = schema_keys()
    warnings = program.lint(external=schema)
    consumed = program.consumed_predicates()
    for key in schema:
        if key not in consumed:
            warnings.append(f"scene fact {format_key(key)} is not used by any rule")
    for rule in program.rules_for(('select_action', 2)):
        action = rule.head.args[0]
        if not (isinstance(action, Sym) and action.name in ACTIONS):
            warnings.append(f"line {rule.line}: select_action for unknown action '{action}'")
    for rule in program.rules_for(('action', 1)):
        action = rule.head.args[0]
        if not (isinstance(action, Sym) and action.name in ACTIONS):
            warnings.append(f"line {rule.line}: unknown action '{action}'")
    return warnings


def load_rulebase(overlays: Sequence[Overlay] = (), strict: bool = False,
                  catalog_dir: Optional[str | Path] = None) -> Rulebase:
    """
    Load the shipped catalog plus overlays.

    Args:
        overlays: Extra rulebase files (Path) or rule text (str), appended in order
        strict: Raise LintError when lint reports anything
        catalog_dir: Directory holding the layer files (defaults to the shipped catalog)

    Returns:
        Stratified Rulebase

    Raises:
        InputError: when a catalog layer or overlay file cannot be read
        ParseError: on syntax errors
        StratificationError: when the combined rules have a negation cycle
        LintError: in strict mode when lint warnings exist
    """
    catalog = Path(catalog_dir or CATALOG_DIR)
    layers: Dict[str, Tuple[Rule, ...]] = {}
    sources: List[str] = []
    rules: List[Rule] = []
    directives: List[Directive] = []

    def add(layer: str, text: str, source: str) -> None:
        parsed_rules, parsed_directives = parse_clauses(text, source)
        layers[layer] = layers.get(layer, ()) + parsed_rules
        rules.extend(parsed_rules)
        directives.extend(parsed_directives)
        sources.append(source)

    for layer, filename in CATALOG_LAYERS.items():
        path = catalog / filename
        add(layer, read_text(path, f"catalog layer '{layer}'"), str(path))
    for index, overlay in enumerate(overlays):
        text, source = _read_overlay(overlay, index)
        add(OVERLAY_LAYER, text, source)

    builtins = dict(STANDARD_BUILTINS)
    builtins.update(scene_builtins(DEFAULT_REACTION_TIME, DEFAULT_DECELERATION))
    program = Program(rules, builtins, directives)
    strata = program.stratification()
    logger.debug("Loaded %d rules from %d sources into %d strata",
                 len(program), len(sources), max(strata.values(), default=0) + 1)

    warnings = lint_rulebase(program)
    for warning in warnings:
        logger.warning(warning)
    if strict and warnings:
        raise LintError(warnings)
    return Rulebase(program, layers, tuple(sources), tuple(warnings))
