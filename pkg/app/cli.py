import logging

import click

from app import create_app
from app.commands.bench import bench_cmd
from app.commands.corpus import compare_cmd, gen_cmd
from app.commands.solve import check_cmd, show_cmd, solve_cmd

logger = logging.getLogger(__name__)


@click.group()
@click.option('--env', 'config_name', default=None, help='Configuration name (development, production, testing)')
@click.option('--log-level', default=None, help='Override the configured log level')
@click.pass_context
def cli(ctx, config_name, log_level):
    """Shortest two disjoint paths with conservative weights"""
    ctx.obj = create_app(config_name, log_level)
    logger.debug(f"Using configuration '{ctx.obj.config_name}'")


cli.add_command(solve_cmd)
cli.add_command(check_cmd)
cli.add_command(show_cmd)
cli.add_command(gen_cmd)
cli.add_command(compare_cmd)
cli.add_command(bench_cmd)
