"""Run reports: canonical machine-readable JSON plus a human summary.

The canonical form is deterministic byte for byte given (config, seed,
version): keys are sorted, floats serialize through repr, and wall-clock
timings are deliberately excluded (they live in the summary text only).
Every task payload carries an `op` field naming the module operation that
produced its numbers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from . import __version__


def _plain(obj):
    """Narrow numpy scalars (and similar) to plain Python for serialization."""
    if hasattr(obj, "item"):
        return obj.item()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


@dataclass
class TaskResult:
    name: str
    kind: str
    op: str                      # provenance: module.operation
    status: str                  # "ok" | "flagged" | "error"
    payload: dict = field(default_factory=dict)
    error: str | None = None
    wall_time: float = 0.0       # seconds; excluded from canonical JSON

    def canonical(self) -> dict:
        return {"name": self.name, "kind": self.kind, "op": self.op,
                "status": self.status, "payload": self.payload,
                "error": self.error}


@dataclass
class Report:
    seed: int
    plan: dict
    tasks: list[TaskResult]
    version: str = __version__

    @property
    def exit_code(self) -> int:
        return 1 if any(t.status in ("error", "flagged") for t in self.tasks) else 0

    def canonical(self) -> dict:
        return {
            "version": self.version,
            "provenance": {"seed": self.seed, "plan": self.plan},
            "tasks": [t.canonical() for t in self.tasks],
        }

    def to_json(self) -> str:
        return json.dumps(self.canonical(), sort_keys=True, indent=2,
                          allow_nan=True, default=_plain) + "\n"

    def summary_text(self) -> str:
        lines = [f"iterlab {self.version} report, seed={self.seed}"]
        lines.append(f"plan: {json.dumps(self.plan, sort_keys=True)}")
        for t in self.tasks:
            head = f"[{t.status.upper():7s}] {t.name} ({t.op}, {t.wall_time:.3f}s)"
            lines.append(head)
            if t.error:
                lines.append(f"    error: {t.error}")
            else:
                for k in sorted(t.payload):
                    v = t.payload[k]
                    text = json.dumps(v, sort_keys=True, default=str)
                    if len(text) > 120:
                        text = text[:117] + "..."
                    lines.append(f"    {k}: {text}")
        failed = [t.name for t in self.tasks if t.status != "ok"]
        lines.append("result: " + ("OK" if not failed else
                                   "PROBLEMS in " + ", ".join(failed)))
        return "\n".join(lines) + "\n"

    @staticmethod
    def from_json(text: str) -> "Report":
        data = json.loads(text)
        tasks = [TaskResult(name=t["name"], kind=t["kind"], op=t["op"],
                            status=t["status"], payload=t["payload"],
                            error=t["error"])
                 for t in data["tasks"]]
        return Report(seed=data["provenance"]["seed"],
                      plan=data["provenance"]["plan"], tasks=tasks,
                      version=data["version"])
