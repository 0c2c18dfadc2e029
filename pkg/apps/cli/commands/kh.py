"""
khoma kh: Khovanov homology tables
"""

from pathlib import Path
from typing import Optional

import click

from apps.cli.render import print_homology

from . import handle_errors, link_arguments, output_options, resolve, ring_options, service


@click.command("kh")
@link_arguments
@ring_options
@output_options
@click.option("--reduced", is_flag=True, help="Reduced homology at the canonical basepoint")
@click.option("--delta", "delta", is_flag=True, help="Rows by delta = 2i + j instead of j")
@click.option(
    "--dump-complex",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write the unsimplified chain complex as JSON",
)
@click.pass_context
@handle_errors
def kh(
    ctx: click.Context,
    link: Optional[str],
    braid: Optional[str],
    pd: Optional[str],
    coefficients: Optional[str],
    prime: Optional[int],
    as_json: bool,
    reduced: bool,
    delta: bool,
    dump_complex: Optional[Path],
) -> None:
    """Khovanov homology of LINK (a table name, m(NAME), or --braid / --pd)."""
    svc = service(ctx)
    diagram = resolve(ctx, link, braid, pd)
    ring = svc.ring(coefficients, prime)
    if dump_complex is not None:
        complex_ = svc.complex(diagram, ring, reduced)
        text = complex_.to_json(indent=svc.config.output.json_indent)
        dump_complex.write_text(text, encoding="utf-8")
    report = svc.homology(diagram, ring, reduced=reduced)
    if as_json:
        click.echo(report.model_dump_json(indent=svc.config.output.json_indent))
        return
    print_homology(report, delta=delta or svc.config.output.delta_table)
