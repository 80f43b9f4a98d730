"""
Decision records: the output of `decide` and `run`.

The machine-readable form is one JSON object per line with the fields
scenario, t, action, suggested, latency_ms and, when requested,
justification.
"""

import json
from dataclasses import dataclass
from typing import Any, Dict, Optional, Tuple

from src.core.errors import InputError
from src.processors.decision import Decision

RECORD_FIELDS = ('scenario', 't', 'action', 'suggested', 'latency_ms', 'justification')


@dataclass(frozen=True)
class DecisionRecord:
    scenario: str
    t: int
    action: str
    suggested: Tuple[str, ...]
    latency_ms: float
    justification: Optional[str] = None

    @classmethod
    def from_decision(cls, decision: Decision, explain: bool = False,
                      max_depth: Optional[int] = None) -> 'DecisionRecord':
        """
        Summarize a decision.

        Args:
            decision: Decision to record
            explain: Include the rendered justification
            max_depth: Rendering depth for the justification
        """
        justification = decision.render(max_depth) if explain else None
        return cls(decision.scenario, decision.timestamp, decision.action,
                   tuple(decision.suggested), round(decision.latency_ms, 3), justification)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {
            'scenario': self.scenario,
            't': self.t,
            'action': self.action,
            'suggested': list(self.suggested),
            'latency_ms': self.latency_ms,
        }
        if self.justification is not None:
            data['justification'] = self.justification
        return data

    def to_json(self) -> str:
        """One line of JSON, fields in RECORD_FIELDS order."""
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_json(cls, line: str) -> 'DecisionRecord':
        """
        Parse a line written by to_json.

        Raises:
            InputError: when the line is not a decision record
        """
        try:
            data = json.loads(line)
        except json.JSONDecodeError as error:
            raise InputError(f"invalid decision record: {error}") from error
        if not isinstance(data, dict):
            raise InputError("invalid decision record: expected an object")
        missing = [name for name in RECORD_FIELDS[:-1] if name not in data]
        if missing:
            raise InputError(f"invalid decision record: missing {', '.join(missing)}")
        return cls(
            scenario=str(data['scenario']),
            t=int(data['t']),
            action=str(data['action']),
            suggested=tuple(str(action) for action in data['suggested']),
            latency_ms=float(data['latency_ms']),
            justification=data.get('justification'),
        )

    def without_latency(self) -> 'DecisionRecord':
        """The record with latency zeroed, for comparing runs."""
        return DecisionRecord(self.scenario, self.t, self.action, self.suggested, 0.0,
                              self.justification)

    def format_text(self) -> str:
        suggested = ', '.join(self.suggested) or 'none'
        text = (f"{self.scenario} t={self.t}: {self.action} "
                f"(suggested: {suggested}; {self.latency_ms:.2f} ms)\n")
        if self.justification is not None:
            text += self.justification
        return text
