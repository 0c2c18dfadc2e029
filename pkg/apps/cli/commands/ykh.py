"""
khoma ykh: the e-action (sl2) and the deformed differential (split)
"""

from typing import Optional

import click

from apps.cli.render import print_blocks, print_homology, print_split
from packages.core.khoma.pipeline import y_weights

from . import handle_errors, link_arguments, output_options, resolve, ring_options, service


@click.group("ykh")
def ykh() -> None:
    """Computations with the dot-sliding homotopies."""


@ykh.command("sl2")
@link_arguments
@ring_options
@output_options
@click.option("--reduced", is_flag=True, help="Reduced homology at the canonical basepoint")
@click.option("--show-matrices", is_flag=True, help="Print the blocks of e on homology")
@click.option("--delta", "delta", is_flag=True, help="Rows by delta = 2i + j instead of j")
@click.option(
    "--formula",
    type=click.Choice(["traversal", "braid"]),
    default="traversal",
    show_default=True,
    help="How e is assembled; 'braid' needs a braid closure",
)
@click.pass_context
@handle_errors
def sl2(
    ctx: click.Context,
    link: Optional[str],
    braid: Optional[str],
    pd: Optional[str],
    coefficients: Optional[str],
    prime: Optional[int],
    as_json: bool,
    reduced: bool,
    show_matrices: bool,
    delta: bool,
    formula: str,
) -> None:
    """Homology of a knot with its e-string decomposition (or e-matrices over Z)."""
    svc = service(ctx)
    diagram = resolve(ctx, link, braid, pd)
    ring = svc.ring(coefficients, prime)
    report = svc.estrings(
        diagram, ring, reduced=reduced, show_matrices=show_matrices, formula=formula
    )
    if as_json:
        click.echo(report.model_dump_json(indent=svc.config.output.json_indent, by_alias=True))
        return
    print_homology(report.homology, delta=delta or svc.config.output.delta_table)
    if show_matrices:
        print_blocks(report.blocks, ring.name)
    click.echo(f"sl2 hypothesis: {'holds' if report.homology.sl2_hypothesis else 'fails'}")
    if report.decomposition is not None:
        click.echo(report.decomposition.render())


@ykh.command("split")
@link_arguments
@ring_options
@output_options
@click.option("--weights", required=True, help="One weight per component, e.g. '0,1'")
@click.pass_context
@handle_errors
def split(
    ctx: click.Context,
    link: Optional[str],
    braid: Optional[str],
    pd: Optional[str],
    coefficients: Optional[str],
    prime: Optional[int],
    as_json: bool,
    weights: str,
) -> None:
    """Homology of d + sum_k w_k xi_k."""
    svc = service(ctx)
    diagram = resolve(ctx, link, braid, pd)
    ring = svc.ring(coefficients, prime)
    report = svc.split(diagram, ring, y_weights(weights, ring))
    if as_json:
        click.echo(report.model_dump_json(indent=svc.config.output.json_indent))
        return
    print_split(report)
