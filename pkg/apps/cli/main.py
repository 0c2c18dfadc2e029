"""
khoma command line
"""

from typing import Optional

import click

from packages.core.khoma.pipeline import KhovanovService
from packages.core.khoma.utils.config import get_config
from packages.core.khoma.utils.logger import configure_logging

from .commands import handle_errors
from .commands.kh import kh
from .commands.table import table
from .commands.ykh import ykh


@click.group()
@click.option("-v", "--verbose", count=True, help="-v for progress, -vv for debug logging (stderr)")
@click.option(
    "--table-path",
    type=click.Path(exists=True, dir_okay=False),
    default=None,
    help="JSON-lines knot table (defaults to $KHOMA_TABLE)",
)
@click.option(
    "--log-file",
    type=click.Path(dir_okay=False),
    default=None,
    help="Also write log records to this file (defaults to $KHOMA_LOG_FILE)",
)
@click.pass_context
@handle_errors
def main(
    ctx: click.Context, verbose: int, table_path: Optional[str], log_file: Optional[str]
) -> None:
    """Khovanov homology with the e-operator."""
    if verbose or log_file:
        level = {0: None, 1: "INFO"}.get(verbose, "DEBUG")
        configure_logging(level=level, log_file=log_file)
    svc = KhovanovService(get_config())
    if table_path:
        svc.use_table(table_path)
    ctx.ensure_object(dict)
    ctx.obj["service"] = svc


main.add_command(kh)
main.add_command(ykh)
main.add_command(table)


if __name__ == "__main__":
    main()
