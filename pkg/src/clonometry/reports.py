"""Result records shared by the physics modules and the scenario runner."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass
class MomentRow:
    name: str
    measured: float
    target: float | None = None
    tolerance: float | None = None
    note: str = ""

    @property
    def deviation(self) -> float | None:
        if self.target is None:
            return None
        return abs(self.measured - self.target)

    @property
    def passed(self) -> bool:
        if self.target is None or self.tolerance is None:
            return True
        return self.deviation <= self.tolerance


@dataclass
class MomentReport:
    """Named measured/target pairs plus free-form diagnostics."""

    title: str
    rows: list[MomentRow] = field(default_factory=list)
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def add(self, name: str, measured: float, target: float | None = None,
            tolerance: float | None = None, note: str = "") -> MomentRow:
        row = MomentRow(name, float(measured), None if target is None else float(target),
                        tolerance, note)
        self.rows.append(row)
        return row

    def __getitem__(self, name: str) -> MomentRow:
        for row in self.rows:
            if row.name == name:
                return row
        raise KeyError(name)

    def __contains__(self, name: str) -> bool:
        return any(row.name == name for row in self.rows)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    def failures(self) -> list[MomentRow]:
        return [row for row in self.rows if not row.passed]

    def records(self) -> list[dict[str, Any]]:
        return [
            {"name": r.name, "measured": r.measured, "target": r.target,
             "deviation": r.deviation, "tolerance": r.tolerance, "note": r.note}
            for r in self.rows
        ]
