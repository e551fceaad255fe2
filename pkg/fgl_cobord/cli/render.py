"""Human-readable (--emit table) rendering with rich."""
from __future__ import annotations

from rich.console import Console
from rich.table import Table

from fgl_cobord.core.fgl_calculus import CheckResult
from fgl_cobord.core.lazard import LazardPresentation


def presentation_table(L: LazardPresentation) -> Table:
    table = Table(title=f"Lazard ring L<={L.max_weight}")
    table.add_column("weight", justify="right")
    table.add_column("rank", justify="right")
    table.add_column("torsion")
    table.add_column("basis")
    for w, c in L.components.items():
        basis = ", ".join(L.representative(w, k).format() for k in range(c.size))
        table.add_row(str(w), str(c.rank), " ".join(map(str, c.torsion)) or "-", basis)
    return table


def checks_table(title: str, results: list[CheckResult]) -> Table:
    table = Table(title=title)
    table.add_column("check")
    table.add_column("status")
    table.add_column("residual")
    for r in results:
        status = "[green]PASS[/green]" if r else "[red]FAIL[/red]"
        residual = r.residual_text() + (f" ({r.detail})" if r.detail else "")
        table.add_row(r.name, status, residual)
    return table


def rows_table(title: str, header: tuple[str, str], rows: list[tuple[str, str]]) -> Table:
    table = Table(title=title)
    for name in header:
        table.add_column(name)
    for left, right in rows:
        table.add_row(left, right)
    return table


def render_text(renderable, width: int = 120) -> str:
    console = Console(width=width, force_terminal=False)
    with console.capture() as capture:
        console.print(renderable)
    return capture.get()
