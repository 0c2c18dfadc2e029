"""
Shared plumbing for khoma commands: link arguments, coefficient options, error exits
"""

import functools
import json
import sys
from typing import Any, Callable, Optional

import click

from packages.core.khoma.diagram import LinkDiagram
from packages.core.khoma.errors import KhomaError
from packages.core.khoma.pipeline import KhovanovService


def link_arguments(f: Callable) -> Callable:
    """LINK name argument plus --braid / --pd alternatives"""
    f = click.option(
        "--pd", "pd", default=None, help="PD code as JSON, e.g. '[[1,4,2,5],[3,6,4,1],[5,2,6,3]]'"
    )(f)
    f = click.option("--braid", "braid", default=None, help="Braid text, e.g. '2: -1 -1 -1'")(f)
    f = click.argument("link", required=False)(f)
    return f


def ring_options(f: Callable) -> Callable:
    f = click.option("--prime", type=int, default=None, help="Prime for -t Fp")(f)
    f = click.option(
        "-t", "--coefficients", "coefficients", default=None, help="Q, Z, Fp or F<p>"
    )(f)
    return f


def output_options(f: Callable) -> Callable:
    f = click.option(
        "--json", "as_json", is_flag=True, help="Print one JSON document instead of tables"
    )(f)
    return f


def handle_errors(f: Callable) -> Callable:
    """Report KhomaError on stderr and exit with its code"""

    @functools.wraps(f)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return f(*args, **kwargs)
        except KhomaError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(exc.exit_code)

    return wrapper


def service(ctx: click.Context) -> KhovanovService:
    return ctx.obj["service"]


def resolve(
    ctx: click.Context, link: Optional[str], braid: Optional[str], pd: Optional[str]
) -> LinkDiagram:
    return service(ctx).resolve(name=link, braid=braid, pd=pd)


def emit_json(payload: Any, indent: Optional[int]) -> None:
    click.echo(json.dumps(payload, indent=indent))
