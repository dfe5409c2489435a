"""Pass/fail bookkeeping for the sampled property checks."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class Check:
    name: str
    passed: int = 0
    failed: int = 0
    counterexample: str | None = None

    @property
    def ok(self) -> bool:
        return self.failed == 0 and self.passed > 0

    def record(self, ok: bool, detail: str | None = None) -> bool:
        if ok:
            self.passed += 1
        else:
            self.failed += 1
            if self.counterexample is None:
                self.counterexample = detail or "no detail"
        return ok

    def line(self) -> str:
        status = "PASS" if self.ok else "FAIL"
        text = f"[{status}] {self.name}: {self.passed} passed, {self.failed} failed"
        if self.counterexample is not None:
            text += f"\n       counterexample: {self.counterexample}"
        return text


@dataclass
class Report:
    title: str
    checks: dict[str, Check] = field(default_factory=dict)

    def check(self, name: str) -> Check:
        if name not in self.checks:
            self.checks[name] = Check(name)
        return self.checks[name]

    def record(self, name: str, ok: bool, detail: str | None = None) -> bool:
        return self.check(name).record(bool(ok), detail)

    def merge(self, other: Report) -> Report:
        for name, c in other.checks.items():
            mine = self.check(name)
            mine.passed += c.passed
            mine.failed += c.failed
            if mine.counterexample is None:
                mine.counterexample = c.counterexample
        return self

    @property
    def ok(self) -> bool:
        return bool(self.checks) and all(c.ok for c in self.checks.values())

    def failures(self) -> list[Check]:
        return [c for c in self.checks.values() if not c.ok]

    def render(self) -> str:
        lines = [f"== {self.title} =="]
        lines.extend(c.line() for c in self.checks.values())
        return "\n".join(lines)
