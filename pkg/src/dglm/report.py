"""Report rendering: a rich table for people and a fixed-field text block for baselines."""

from __future__ import annotations

import io
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from enum import Enum

from rich import box
from rich.console import Console, Group
from rich.table import Table
from rich.text import Text

from dglm.core.dglie import SuiteResult
from dglm.core.exactlin import HomologyReport, Verdict, Witness

UNKNOWN = "?"


class OutputFormat(str, Enum):
    table = "table"
    machine = "machine"


@dataclass(frozen=True)
class Check:
    """One verdict line; ``ok`` is ``None`` when the check was cut short or not run."""

    name: str
    ok: bool | None
    witness: str | None = None

    @classmethod
    def of(cls, name: str, result: Verdict | SuiteResult | bool, witness: Witness | str | None = None) -> Check:
        if isinstance(result, SuiteResult):
            label = f"{name}:{result.name}" if name else result.name
            state = _state(result.failed, result.truncated)
            return cls(label, state, _truncation(result.witness, result.truncated, result.checked))
        if isinstance(result, Verdict):
            return cls(name, _state(not result.ok, result.truncated), _truncation(result.witness, result.truncated))
        return cls(name, bool(result), None if result else _text(witness))


def _text(witness: Witness | str | None) -> str | None:
    return None if witness is None else str(witness)


def _state(failed: bool, truncated: bool) -> bool | None:
    if failed:
        return False
    return None if truncated else True


def _truncation(witness: Witness | None, truncated: bool, count: int | None = None) -> str | None:
    if witness is not None or not truncated:
        return _text(witness)
    return "sample limit reached" if count is None else f"sample limit reached after {count} cases"


def _verdict(ok: bool | None) -> str:
    return UNKNOWN if ok is None else "pass" if ok else "fail"


@dataclass(frozen=True)
class Row:
    """One degree; ``None`` marks a value outside the valid range."""

    degree: int
    values: Mapping[str, int | str | None]


@dataclass
class Report:
    command: str
    models: list[str]
    lo: int | None = None
    hi: int | None = None
    columns: list[str] = field(default_factory=list)
    rows: list[Row] = field(default_factory=list)
    checks: list[Check] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """No check failed; checks reporting ``?`` do not fail the report."""
        return all(c.ok is not False for c in self.checks)

    @property
    def complete(self) -> bool:
        return all(c.ok is not None for c in self.checks)

    def add_checks(self, prefix: str, results: Sequence[SuiteResult]) -> None:
        self.checks.extend(Check.of(prefix, r) for r in results)

    def add_homology(self, h: HomologyReport, column: str = "dim_H") -> None:
        """Merge ``h`` into the rows and narrow the valid range to its valid degrees."""
        if column not in self.columns:
            self.columns.append(column)
        rows = {r.degree: dict(r.values) for r in self.rows}
        for n, d in sorted(h.degrees.items()):
            rows.setdefault(n, {})[column] = d.dim if d.valid else None
        self.rows = [Row(n, values) for n, values in sorted(rows.items())]
        valid = [n for n, d in h.degrees.items() if d.valid]
        if valid:
            lo, hi = min(valid), max(valid)
            self.lo = lo if self.lo is None else max(self.lo, lo)
            self.hi = hi if self.hi is None else min(self.hi, hi)

    def add_column(self, column: str, values: Mapping[int, int | str | None]) -> None:
        if column not in self.columns:
            self.columns.append(column)
        rows = {r.degree: dict(r.values) for r in self.rows}
        for n, v in values.items():
            rows.setdefault(n, {})[column] = v
        self.rows = [Row(n, vals) for n, vals in sorted(rows.items())]


def _cell(value: int | str | None) -> str:
    return UNKNOWN if value is None else str(value)


def _range(report: Report) -> str:
    if report.lo is None or report.hi is None:
        return "none"
    return f"{report.lo}..{report.hi}"


def render_table(report: Report) -> Group:
    """Header, per-degree table and verdict table as rich renderables."""
    header = Text()
    header.append(report.command, style="bold cyan")
    header.append(f"\nmodels: {', '.join(report.models)}")
    header.append(f"\nvalid degrees: {_range(report)}")
    parts: list[Text | Table] = [header]
    if report.rows:
        table = Table(box=box.SIMPLE_HEAD, show_edge=False)
        table.add_column("degree", justify="right", style="cyan")
        for column in report.columns:
            table.add_column(column, justify="right")
        for row in report.rows:
            table.add_row(str(row.degree), *(_cell(row.values.get(c)) for c in report.columns))
        parts.append(table)
    if report.checks:
        verdicts = Table(box=box.SIMPLE_HEAD, show_edge=False)
        verdicts.add_column("check")
        verdicts.add_column("verdict")
        verdicts.add_column("witness", overflow="fold")
        for c in report.checks:
            if c.ok is None:
                mark = Text(UNKNOWN, style="yellow")
            else:
                mark = Text("pass", style="green") if c.ok else Text("FAIL", style="bold red")
            verdicts.add_row(Text(c.name), mark, Text(c.witness or ""))
        parts.append(verdicts)
    parts.extend(Text(note, style="dim") for note in report.notes)
    return Group(*parts)


def render_machine(report: Report) -> str:
    """
    Line-oriented block with fixed field names.

    Degree lines carry ``degree`` and one ``name=value`` field per column;
    verdict lines carry ``check``, ``verdict`` and ``witness``. Unknown
    values print as ``?``, never as ``0``, and so does the verdict of a
    check that was cut short.
    """
    lines = [
        f"command\t{report.command}",
        f"models\t{','.join(report.models)}",
        f"valid_degrees\t{_range(report)}",
    ]
    for row in report.rows:
        fields = [f"degree={row.degree}"]
        fields.extend(f"{c}={_cell(row.values.get(c))}" for c in report.columns)
        lines.append("\t".join(fields))
    for c in report.checks:
        witness = (c.witness or "-").replace("\t", " ").replace("\n", " ")
        lines.append(f"check={c.name}\tverdict={_verdict(c.ok)}\twitness={witness}")
    lines.extend(f"note\t{note}" for note in report.notes)
    return "\n".join(lines) + "\n"


def render_text(report: Report, fmt: OutputFormat, width: int = 100) -> str:
    """The report as plain text, for ``--report`` files."""
    if fmt is OutputFormat.machine:
        return render_machine(report)
    buffer = io.StringIO()
    Console(file=buffer, width=width, color_system=None, force_terminal=False).print(render_table(report))
    return buffer.getvalue()
