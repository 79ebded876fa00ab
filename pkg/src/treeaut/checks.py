"""Result records shared by every verification routine."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    passed: bool
    candidates: int = 0
    passing: int | None = None
    detail: str = ""
    counterexample: str | None = None
    seconds: float = 0.0
    data: dict = field(default_factory=dict, repr=False)

    def __bool__(self):
        return self.passed

    @property
    def status(self) -> str:
        return "PASS" if self.passed else "FAIL"

    def line(self) -> str:
        parts = [self.status, self.name]
        if self.candidates:
            parts.append(f"{self.candidates} candidates")
        if self.passing is not None:
            parts.append(f"{self.passing} passing")
        if self.detail:
            parts.append(self.detail)
        if self.counterexample is not None and not self.passed:
            parts.append(f"counterexample: {self.counterexample}")
        parts.append(f"{self.seconds:.3f}s")
        return "  ".join(parts)

    TSV_FIELDS = ("status", "name", "candidates", "passing", "detail", "counterexample", "seconds")

    def tsv(self) -> str:
        values = [self.status, self.name, str(self.candidates),
                  "" if self.passing is None else str(self.passing),
                  self.detail, self.counterexample or "", f"{self.seconds:.6f}"]
        return "\t".join(v.replace("\t", " ") for v in values)
