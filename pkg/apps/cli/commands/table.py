"""
khoma table: e-string decompositions for a whole knot table
"""

import json
from typing import Optional, Tuple

import click

from packages.core.khoma.errors import UnsupportedError

from . import handle_errors, ring_options, service


@click.command("table")
@click.argument("names", nargs=-1)
@ring_options
@click.option("--reduced", is_flag=True, help="Reduced decompositions")
@click.option("--jobs", type=int, default=1, show_default=True, help="Knots computed in parallel")
@click.option("--json", "as_json", is_flag=True, help="Print one JSON document")
@click.pass_context
@handle_errors
def table(
    ctx: click.Context,
    names: Tuple[str, ...],
    coefficients: Optional[str],
    prime: Optional[int],
    reduced: bool,
    jobs: int,
    as_json: bool,
) -> None:
    """Decompose every knot of the table (or just NAMES), in table order."""
    svc = service(ctx)
    ring = svc.ring(coefficients, prime)
    if not ring.is_field:
        raise UnsupportedError("the table command prints e-strings and needs field coefficients")
    reports = svc.run_table(list(names) or None, ring=ring, reduced=reduced, jobs=jobs)
    if as_json:
        payload = {"knots": [r.model_dump(mode="json", by_alias=True) for r in reports]}
        click.echo(json.dumps(payload, indent=svc.config.output.json_indent))
        return
    for r in reports:
        click.echo(f"{r.homology.link}: {r.decomposition.render()}")
