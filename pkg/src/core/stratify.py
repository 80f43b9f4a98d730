"""
Stratification of programs with negation-as-failure.

Builds the predicate dependency graph (an edge from each rule head to each
non-builtin body predicate, labelled negative for `not` literals), finds its
strongly connected components, rejects any component containing a negative
edge, and numbers the components bottom-up.
"""

from typing import TYPE_CHECKING, Dict, List, Set, Tuple

from src.core.errors import StratificationError
from src.core.terms import PredicateKey

if TYPE_CHECKING:
    from src.core.program import Program


class DependencyGraph:
    """Predicate dependency graph of a program."""

    def __init__(self, program: 'Program'):
        self.nodes: Dict[PredicateKey, None] = {}
        self.edges: Dict[PredicateKey, Dict[PredicateKey, bool]] = {}
        for rule in program.rules:
            head = rule.head.key if rule.head is not None else None
            if head is not None:
                self._add_node(head)
            for literal in rule.body:
                if program.is_builtin(literal.key):
                    continue
                self._add_node(literal.key)
                if head is not None:
                    targets = self.edges[head]
                    # negative wins when both polarities occur
                    targets[literal.key] = targets.get(literal.key, False) or literal.naf

    def _add_node(self, key: PredicateKey) -> None:
        if key not in self.nodes:
            self.nodes[key] = None
            self.edges[key] = {}

    def components(self) -> List[List[PredicateKey]]:
        """
        Strongly connected components, dependencies first.

        Iterative Tarjan: a component is emitted only after every component
        it depends on.
        """
        index_of: Dict[PredicateKey, int] = {}
        low: Dict[PredicateKey, int] = {}
        on_stack: Set[PredicateKey] = set()
        stack: List[PredicateKey] = []
        result: List[List[PredicateKey]] = []
        counter = 0

        for root in self.nodes:
            if root in index_of:
                continue
            work: List[Tuple[PredicateKey, int]] = [(root, 0)]
            while work:
                node, position = work.pop()
                if position == 0:
                    index_of[node] = low[node] = counter
                    counter += 1
                    stack.append(node)
                    on_stack.add(node)
                successors = list(self.edges[node])
                advanced = False
                for i in range(position, len(successors)):
                    target = successors[i]
                    if target not in index_of:
                        work.append((node, i + 1))
                        work.append((target, 0))
                        advanced = True
                        break
                    if target in on_stack:
                        low[node] = min(low[node], index_of[target])
                if advanced:
                    continue
                if low[node] == index_of[node]:
                    component = []
                    while True:
                        member = stack.pop()
                        on_stack.discard(member)
                        component.append(member)
                        if member == node:
                            break
                    result.append(component)
                if work:
                    parent = work[-1][0]
                    low[parent] = min(low[parent], low[node])
        return result


def stratify(program: 'Program') -> Dict[PredicateKey, int]:
    """
    Assign every predicate a stratum.

    Positive dependencies never point to a higher stratum; negative
    dependencies point strictly lower.

    Args:
        program: Parsed program

    Returns:
        Mapping predicate key -> stratum index (0 = bottom)

    Raises:
        StratificationError: naming the predicates of a negation cycle
    """
    graph = DependencyGraph(program)
    stratum: Dict[PredicateKey, int] = {}
    for component in graph.components():
        members = set(component)
        level = 0
        for node in component:
            for target, negative in graph.edges[node].items():
                if target in members:
                    if negative:
                        ordered = [key for key in graph.nodes if key in members]
                        raise StratificationError([f"{name}/{arity}" for name, arity in ordered])
                    continue
                level = max(level, stratum[target] + (1 if negative else 0))
        for node in component:
            stratum[node] = level
    return stratum
