"""
Latency benchmark over a scenario corpus.

Every frame of every scenario is decided `repetitions` times. Rows are
grouped by the scenario's environment class; averages and maxima are taken
over all measurements of the group.
"""

import logging
import statistics
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Any, Dict, List, Optional, Sequence, Tuple

from src.config import DEFAULT_BENCH_REPETITIONS, LOCATION_CLASSES
from src.core.errors import EngineError, InputError
from src.processors.decision import decide
from src.processors.rulebase import Rulebase
from src.sources.model import Scenario
from src.utils.timestamp_utils import report_timestamp

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EnvironmentRow:
    environment: str
    frames: int
    avg_ms: float
    max_ms: float


@dataclass(frozen=True)
class ScenarioRow:
    """Per-frame latencies (mean over repetitions) and the decisions taken."""
    scenario: str
    environment: str
    timestamps: Tuple[int, ...]
    latencies_ms: Tuple[float, ...]
    actions: Tuple[str, ...]


@dataclass(frozen=True)
class BenchReport:
    environments: Tuple[EnvironmentRow, ...]
    scenarios: Tuple[ScenarioRow, ...]
    repetitions: int
    workers: int = 1

    @property
    def frames(self) -> int:
        return sum(row.frames for row in self.environments)

    def exceeds(self, avg_budget_ms: Optional[float] = None,
                max_budget_ms: Optional[float] = None) -> List[str]:
        """
        Budget violations, one message per offending environment and budget.

        Returns:
            Empty list when every row is within budget
        """
        problems = []
        for row in self.environments:
            if avg_budget_ms is not None and row.avg_ms > avg_budget_ms:
                problems.append(f"{row.environment}: average {row.avg_ms:.2f} ms "
                                f"exceeds budget {avg_budget_ms:g} ms")
            if max_budget_ms is not None and row.max_ms > max_budget_ms:
                problems.append(f"{row.environment}: maximum {row.max_ms:.2f} ms "
                                f"exceeds budget {max_budget_ms:g} ms")
        return problems

    def to_dict(self, generated_at: Optional[str] = None) -> Dict[str, Any]:
        return {
            'generated_at': generated_at or report_timestamp(),
            'repetitions': self.repetitions,
            'workers': self.workers,
            'environments': [
                {'environment': row.environment, 'frames': row.frames,
                 'avg_ms': round(row.avg_ms, 3), 'max_ms': round(row.max_ms, 3)}
                for row in self.environments
            ],
            'scenarios': [
                {'scenario': row.scenario, 'environment': row.environment,
                 'frames': [{'t': t, 'latency_ms': round(latency, 3), 'action': action}
                            for t, latency, action in zip(row.timestamps, row.latencies_ms,
                                                          row.actions)]}
                for row in self.scenarios
            ],
        }

    def format_table(self) -> str:
        lines = [f"{'Environment':<14}{'Frames':>8}{'Avg (ms)':>12}{'Max (ms)':>12}"]
        for row in self.environments:
            lines.append(f"{row.environment:<14}{row.frames:>8}{row.avg_ms:>12.2f}{row.max_ms:>12.2f}")
        lines.append('')
        for row in self.scenarios:
            latencies = ' '.join(f"{latency:.2f}" for latency in row.latencies_ms)
            lines.append(f"{row.scenario} [{row.environment}]: {latencies}")
        return '\n'.join(lines) + '\n'


def _environment_order(environment: str) -> Tuple[int, str]:
    if environment in LOCATION_CLASSES:
        return LOCATION_CLASSES.index(environment), environment
    return len(LOCATION_CLASSES), environment


def run_bench(rulebase: Rulebase, scenarios: Sequence[Scenario],
              repetitions: int = DEFAULT_BENCH_REPETITIONS, workers: int = 1) -> BenchReport:
    """
    Decide every frame of a corpus repeatedly and collect latencies.

    Args:
        rulebase: Loaded catalog
        scenarios: Parsed corpus
        repetitions: Decisions per frame
        workers: Threads deciding frames concurrently

    Returns:
        BenchReport with environment and scenario rows

    Raises:
        InputError: when the corpus has no frames or a count is not positive
        EngineError: when repetitions of a frame disagree on the action
    """
    if repetitions < 1 or workers < 1:
        raise InputError(f"repetitions and workers must be positive (got {repetitions} and {workers})")
    jobs = [(index, scenario, t) for index, scenario in enumerate(scenarios)
            for t in scenario.timestamps for _ in range(repetitions)]
    if not jobs:
        raise InputError("benchmark corpus has no frames")

    def run(job):
        _, scenario, t = job
        decision = decide(rulebase, scenario, t, explain=False)
        return decision.action, decision.latency_ms

    logger.info("Benchmarking %d scenarios, %d repetitions, %d worker(s)",
                len(scenarios), repetitions, workers)
    if workers == 1:
        results = [run(job) for job in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, jobs))

    measured: Dict[Tuple[int, int], List[float]] = {}
    actions: Dict[Tuple[int, int], str] = {}
    for (index, scenario, t), (action, latency) in zip(jobs, results):
        key = (index, t)
        measured.setdefault(key, []).append(latency)
        previous = actions.setdefault(key, action)
        if previous != action:
            raise EngineError(f"{scenario.name} at t={t}: decisions differ between "
                              f"repetitions ({previous} and {action})")

    scenario_rows = []
    by_environment: Dict[str, List[float]] = {}
    frame_counts: Dict[str, int] = {}
    for index, scenario in enumerate(scenarios):
        environment = scenario.environment_class
        latencies = []
        for t in scenario.timestamps:
            samples = measured[(index, t)]
            latencies.append(statistics.fmean(samples))
            by_environment.setdefault(environment, []).extend(samples)
            frame_counts[environment] = frame_counts.get(environment, 0) + 1
        scenario_rows.append(ScenarioRow(
            scenario.name, environment, scenario.timestamps, tuple(latencies),
            tuple(actions[(index, t)] for t in scenario.timestamps),
        ))

    environment_rows = tuple(
        EnvironmentRow(environment, frame_counts[environment],
                       statistics.fmean(samples), max(samples))
        for environment, samples in sorted(by_environment.items(),
                                           key=lambda item: _environment_order(item[0]))
    )
    return BenchReport(environment_rows, tuple(scenario_rows), repetitions, workers)
