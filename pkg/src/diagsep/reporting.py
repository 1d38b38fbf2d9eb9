"""Deterministic plain-text run reports plus CSV side files.

One report per CLI run: a config echo, result sections, PASS/FAIL verdicts,
and a trailing timings section.  Field order is fixed, values are rendered
canonically (rationals as num/den), and two runs with the same config differ
at most inside [timings]; ``strip_timings`` normalizes for comparison.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path


def format_value(value) -> str:
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, Fraction):
        if value.denominator == 1:
            return str(value.numerator)
        return f"{value.numerator}/{value.denominator}"
    if isinstance(value, float):
        return format(value, ".9g")
    if isinstance(value, (tuple, list)):
        return "[" + ", ".join(format_value(v) for v in value) + "]"
    if value is None:
        return "-"
    return str(value)


@dataclass
class Report:
    command: str
    config: list[tuple[str, object]]
    sections: list[tuple[str, list[tuple[str, object]]]] = field(default_factory=list)
    verdicts: list[tuple[str, bool]] = field(default_factory=list)
    timings: list[tuple[str, float]] = field(default_factory=list)
    csv_files: list[tuple[str, list[str], list[tuple]]] = field(default_factory=list)

    def add_section(self, name: str, items) -> None:
        pairs = list(items.items()) if isinstance(items, dict) else list(items)
        self.sections.append((name, pairs))

    def add_verdict(self, name: str, ok: bool) -> None:
        self.verdicts.append((name, bool(ok)))

    def add_timing(self, name: str, seconds: float) -> None:
        self.timings.append((name, float(seconds)))

    def add_csv(self, name: str, header: list[str], rows) -> None:
        self.csv_files.append((name, header, [tuple(r) for r in rows]))

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.verdicts)

    def render(self) -> str:
        lines = [f"report-format: 1", f"command: {self.command}"]
        lines.append("[config]")
        for key, value in self.config:
            lines.append(f"{key} = {format_value(value)}")
        for name, pairs in self.sections:
            lines.append(f"[{name}]")
            for key, value in pairs:
                lines.append(f"{key} = {format_value(value)}")
        lines.append("[verdicts]")
        for name, ok in self.verdicts:
            lines.append(f"{name} = {'PASS' if ok else 'FAIL'}")
        lines.append("[timings]")
        for name, seconds in self.timings:
            lines.append(f"time_{name}_s = {format_value(seconds)}")
        return "\n".join(lines) + "\n"

    def write(self, outdir) -> Path:
        outdir = Path(outdir)
        outdir.mkdir(parents=True, exist_ok=True)
        path = outdir / f"{self.command}.report.txt"
        path.write_text(self.render(), encoding="ascii")
        for name, header, rows in self.csv_files:
            csv_path = outdir / f"{self.command}.{name}.csv"
            with open(csv_path, "w", encoding="ascii") as fh:
                fh.write(",".join(header) + "\n")
                for row in rows:
                    fh.write(",".join(format_value(v) for v in row) + "\n")
        return path


def strip_timings(text: str) -> str:
    """Report text with the [timings] section removed."""
    head, sep, _tail = text.partition("[timings]")
    return head if sep else text
