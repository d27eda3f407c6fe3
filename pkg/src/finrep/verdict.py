"""Verdicts and law reports.

Every checker in the workbench reports through these two shapes so the
command line layer can render any result uniformly.  Witnesses always name
elements by label, never by index.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Verdict:
    law: str
    ok: bool
    witness: tuple[str, ...] | None = None
    note: str = ""

    def describe(self) -> str:
        mark = "ok" if self.ok else "VIOLATION"
        out = f"{self.law}: {mark}"
        if self.witness is not None:
            out += " at (" + ", ".join(self.witness) + ")"
        if self.note:
            out += f"  [{self.note}]"
        return out


@dataclass
class LawReport:
    subject: str
    verdicts: list[Verdict] = field(default_factory=list)
    scope: str = ""

    @property
    def passed(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def first_failure(self) -> Verdict | None:
        for v in self.verdicts:
            if not v.ok:
                return v
        return None

    def add(self, verdict: Verdict) -> None:
        self.verdicts.append(verdict)

    def extend(self, other: "LawReport") -> None:
        self.verdicts.extend(other.verdicts)

    def describe(self) -> str:
        lines = [f"{self.subject}: {'pass' if self.passed else 'FAIL'}"]
        lines += ["  " + v.describe() for v in self.verdicts]
        if self.scope:
            lines.append(f"  scope: {self.scope}")
        return "\n".join(lines)
