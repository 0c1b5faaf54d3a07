"""Verification reports: ordered, named checks with status and evidence."""

from __future__ import annotations

import time
from dataclasses import asdict, dataclass, field

from .errors import HopfForgeError

PASS = "pass"
FAIL = "fail"
INCONCLUSIVE = "inconclusive"
ASSUMED = "assumed"
STATUSES = (PASS, FAIL, INCONCLUSIVE, ASSUMED)

WITNESS_VERDICT = "non-Hopfian witness established"


@dataclass
class Entry:
    id: str
    description: str
    status: str
    evidence: str
    elapsed_ms: int = 0
    citation: str | None = None

    def to_json(self) -> dict:
        data = asdict(self)
        if self.citation is None:
            del data["citation"]
        return data


@dataclass
class VerificationReport:
    plan_name: str
    entries: list = field(default_factory=list)
    has_witness: bool = False

    def add(self, entry: Entry) -> Entry:
        if any(e.id == entry.id for e in self.entries):
            raise ValueError(f"duplicate report entry id {entry.id!r}")
        self.entries.append(entry)
        return entry

    def extend(self, entries):
        for e in entries:
            self.add(e)

    def check(self, id, description, fn):
        """Run ``fn() -> (passed_or_status, evidence)`` timed; engine errors become failures."""
        self.add(timed_entry(id, description, fn))

    def assume(self, id, description, citation):
        self.add(Entry(id, description, ASSUMED, f"assumed: {citation}", 0, citation))

    @property
    def failed(self) -> list:
        return [e for e in self.entries if e.status in (FAIL, INCONCLUSIVE)]

    @property
    def all_passed(self) -> bool:
        return not self.failed

    @property
    def verdict(self) -> str:
        if self.failed:
            if all(e.status == INCONCLUSIVE for e in self.failed):
                return "inconclusive"
            return "verification failed"
        if self.has_witness:
            return WITNESS_VERDICT
        return "all checks passed"

    def to_json(self) -> dict:
        return {"plan_name": self.plan_name,
                "entries": [e.to_json() for e in self.entries],
                "verdict": self.verdict}

    def format_table(self) -> str:
        width = max([len(e.id) for e in self.entries] + [2])
        lines = [f"plan: {self.plan_name}"]
        for e in self.entries:
            lines.append(f"  {e.status.upper():<12} {e.id:<{width}}  {e.elapsed_ms:>6} ms  {e.description}")
            if e.status != PASS and e.evidence:
                lines.append(f"  {'':<12} {'':<{width}}            {e.evidence}")
        lines.append(f"verdict: {self.verdict}")
        return "\n".join(lines)


def timed_entry(id, description, fn) -> Entry:
    start = time.perf_counter()
    try:
        status, evidence = fn()
    except HopfForgeError as exc:
        status, evidence = FAIL, f"{type(exc).__name__}: {exc}"
    if status is True:
        status = PASS
    elif status is False:
        status = FAIL
    elapsed = int(round((time.perf_counter() - start) * 1000))
    return Entry(id, description, status, evidence, elapsed)


REPORT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "hopf-forge verification report",
    "type": "object",
    "required": ["plan_name", "entries", "verdict"],
    "additionalProperties": False,
    "properties": {
        "plan_name": {"type": "string"},
        "verdict": {"type": "string"},
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "description", "status", "evidence", "elapsed_ms"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string", "minLength": 1},
                    "description": {"type": "string"},
                    "status": {"enum": list(STATUSES)},
                    "evidence": {"type": "string"},
                    "elapsed_ms": {"type": "integer", "minimum": 0},
                    "citation": {"type": "string", "minLength": 1},
                },
                "if": {"properties": {"status": {"const": ASSUMED}}},
                "then": {"required": ["citation"]},
            },
        },
    },
}
