"""
Text rendering for homology tables and e-matrices
"""

from typing import Dict, List, Tuple

import click
from rich import box
from rich.console import Console
from rich.table import Table

from packages.core.khoma.pipeline import HomologyReport, MapBlock, SplitReport


def _console() -> Console:
    return Console(highlight=False, soft_wrap=True)


def _cell(rank: int, torsion: List[int]) -> str:
    parts = [str(rank)] if rank else []
    parts += [f"Z/{t}" for t in torsion]
    return ", ".join(parts)


def homology_table(report: HomologyReport, delta: bool = False) -> Table:
    """j (or delta) rows descending, i columns ascending"""
    cells: Dict[Tuple[int, int], str] = {}
    for e in report.entries:
        row = 2 * e.i + e.j if delta else e.j
        text = _cell(e.rank, e.torsion)
        if text:
            cells[(row, e.i)] = f"{cells[(row, e.i)]}, {text}" if (row, e.i) in cells else text
    columns = sorted({i for _, i in cells})
    rows = sorted({r for r, _ in cells}, reverse=True)
    kind = "reduced Kh" if report.reduced else "Kh"
    table = Table(title=f"{kind}({report.link}; {report.ring})", box=box.SIMPLE)
    table.add_column("δ\\i" if delta else "j\\i", justify="right")
    for i in columns:
        table.add_column(str(i), justify="right")
    for r in rows:
        table.add_row(str(r), *(cells.get((r, i), "") for i in columns))
    return table


def print_homology(report: HomologyReport, delta: bool = False) -> None:
    _console().print(homology_table(report, delta=delta))
    click.echo(f"total: {report.total}")


def print_blocks(blocks: List[MapBlock], ring: str) -> None:
    """'Z(0, 6) -> Z(-2, 10); rank: 1' followed by the matrix rows"""
    for block in blocks:
        src = ", ".join(str(x) for x in block.source)
        tgt = ", ".join(str(x) for x in block.target)
        click.echo(f"{ring}({src}) -> {ring}({tgt}); rank: {block.rank}")
        for row in block.matrix:
            click.echo("  [" + " ".join(row) + "]")


def print_split(report: SplitReport) -> None:
    table = Table(title=f"H({report.link}, d + Σ w ξ; {report.ring})", box=box.SIMPLE)
    table.add_column("i+j", justify="right")
    table.add_column("dim", justify="right")
    for e in sorted(report.entries, key=lambda e: -e.g):
        table.add_row(str(e.g), str(e.dim))
    _console().print(table)
    click.echo(f"weights: {', '.join(report.weights)}")
    click.echo(f"total: {report.total}")
