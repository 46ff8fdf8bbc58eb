"""Rich tables for ``--format text`` output."""

import json
from collections.abc import Sequence
from typing import Any

from rich.console import Console, Group
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from ..checks import CheckReport
from ..lie_core import Mat, rat_str
from ..partitions import Partition
from ..stages import StageData


def report_table(report: CheckReport) -> Table:
    table = Table(title=report.subject, show_lines=False)
    table.add_column("check", style="cyan")
    table.add_column("result")
    table.add_column("witness", overflow="fold")
    for name, ok in report.checks.items():
        result = Text("pass", style="green") if ok else Text("FAIL", style="bold red")
        witness = report.witnesses.get(name)
        table.add_row(name, result, Text("" if witness is None else json.dumps(witness, default=str)))
    return table


def data_table(data: dict[str, Any], title: str = "data") -> Table:
    table = Table(title=title)
    table.add_column("key", style="cyan")
    table.add_column("value", overflow="fold")
    for key, value in data.items():
        table.add_row(key, Text(value if isinstance(value, str) else json.dumps(value, default=str)))
    return table


def matrix_text(m: Mat) -> Text:
    cells = [[rat_str(m.get(i, j)) for j in range(1, m.n + 1)] for i in range(1, m.n + 1)]
    width = max(len(c) for row in cells for c in row)
    return Text("\n".join(" ".join(c.rjust(width) for c in row) for row in cells))


def stage_panel(sd: StageData) -> Panel:
    """Matrices of one stage: e1, e2 and h2', followed by bases of m1 and k."""
    parts: list[Any] = []
    for label, m in (("e1", sd.e1), ("e2", sd.e2), ("h2'", sd.h2prime.matrix)):
        parts.append(Text(label, style="bold"))
        parts.append(matrix_text(m))
    parts.append(Text(f"K = {rat_str(sd.h2prime.K)} ({sd.h2prime.source})", style="dim"))
    parts.append(Text("m1: " + ", ".join(x.name() for x in sd.m1.basis)))
    parts.append(Text("k:  " + ", ".join(x.name() for x in sd.k.basis)))
    return Panel(Group(*parts), title=f"{sd.mu} ⋖ {sd.lam}")


def covers_table(rows: Sequence[tuple[Partition, Sequence[Partition]]]) -> Table:
    table = Table(title="covers")
    table.add_column("mu", style="cyan")
    table.add_column("covered by")
    for mu, above in rows:
        table.add_row(str(mu), Text(", ".join(str(lam) for lam in above) or "-"))
    return table


def print_report(report: CheckReport, console: Console) -> None:
    console.print(report_table(report))
    if report.data:
        console.print(data_table(report.data))
