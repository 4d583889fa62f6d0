import json
import logging

import click

from app.commands import EXIT_INSTANCE, EXIT_NON_CONSERVATIVE

logger = logging.getLogger(__name__)


@click.command('solve')
@click.argument('path', type=click.Path(dir_okay=False))
@click.option('--emit-dot', 'dot_path', type=click.Path(dir_okay=False), help='Write a DOT rendering with the solution marked')
@click.option('--assert-invariants', is_flag=True, help='Enable debug assertions for this run')
@click.option('--json', 'as_json', is_flag=True, help='Print a JSON report instead of text')
@click.pass_context
def solve_cmd(ctx, path, dot_path, assert_invariants, as_json):
    """Solve the instance stored in PATH"""
    from app.services.solver_service import get_solver_service
    from utils import invariants
    from utils.errors import InstanceError, NegativeCycleInForest, NonConservativeInput

    solver_service = get_solver_service()
    if assert_invariants:
        invariants.set_enabled(True)
    try:
        inst = solver_service.load_instance(path)
        solution, stats = solver_service.solve(inst)
    except InstanceError as e:
        logger.error(f"Cannot read instance: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INSTANCE)
    except (NonConservativeInput, NegativeCycleInForest) as e:
        logger.error(f"Instance is not conservative: {e}")
        click.echo(f"not conservative: {e}", err=True)
        click.echo(f"negative cycle: {' '.join(map(str, e.cycle))}")
        ctx.exit(EXIT_NON_CONSERVATIVE)

    if as_json:
        click.echo(json.dumps(solver_service.solution_report(solution, stats), indent=2))
    else:
        click.echo(solver_service.solution_text(solution))
    if dot_path:
        solver_service.write_dot(dot_path, inst, solution)


@click.command('check')
@click.argument('path', type=click.Path(dir_okay=False))
@click.pass_context
def check_cmd(ctx, path):
    """Certify that the instance in PATH has no negative cycle"""
    from app.services.solver_service import get_solver_service
    from utils.errors import InstanceError, NegativeCycleInForest

    solver_service = get_solver_service()
    try:
        inst = solver_service.load_instance(path)
        cert = solver_service.check(inst)
        summary = solver_service.describe(inst) if cert.ok else None
    except InstanceError as e:
        logger.error(f"Cannot read instance: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INSTANCE)
    except NegativeCycleInForest as e:
        logger.error(f"Negative edges close a cycle: {e}")
        click.echo(f"negative cycle: {' '.join(map(str, e.cycle))}")
        ctx.exit(EXIT_NON_CONSERVATIVE)

    if not cert.ok:
        click.echo(solver_service.certificate_text(cert))
        ctx.exit(EXIT_NON_CONSERVATIVE)
    click.echo(f"conservative (c={summary['c']}, checked by {cert.method})")


@click.command('show')
@click.argument('path', type=click.Path(dir_okay=False))
@click.pass_context
def show_cmd(ctx, path):
    """Print size and negative-tree structure of the instance in PATH"""
    from app.services.solver_service import get_solver_service
    from utils.errors import InstanceError, NegativeCycleInForest

    solver_service = get_solver_service()
    try:
        summary = solver_service.describe(solver_service.load_instance(path))
    except InstanceError as e:
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INSTANCE)
    except NegativeCycleInForest as e:
        click.echo(f"negative cycle: {' '.join(map(str, e.cycle))}")
        ctx.exit(EXIT_NON_CONSERVATIVE)

    click.echo(f"n={summary['n']} m={summary['m']} s={summary['s']} t={summary['t']} c={summary['c']}")
    for k, tree in enumerate(summary['trees']):
        click.echo(f"tree {k} ({len(tree)} vertices): {' '.join(map(str, tree))}")
