import json
import logging
import os

import click

from app.commands import EXIT_INFEASIBLE_PARAMS, EXIT_INSTANCE, EXIT_MISMATCH

logger = logging.getLogger(__name__)


@click.command('gen')
@click.option('--n', 'n', type=int, required=True, help='Number of vertices')
@click.option('--c', 'c', type=int, required=True, help='Number of negative trees')
@click.option('--density', type=float, default=None, help='Probability of each positive edge')
@click.option('--seed', type=int, default=None, help='Generator seed')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), required=True, help='Output JSON file')
@click.pass_context
def gen_cmd(ctx, n, c, density, seed, out_path):
    """Write a random conservative instance"""
    from app.services.oracle_service import get_oracle_service
    from app.services.solver_service import get_solver_service
    from utils.errors import ParamsInfeasible

    settings = ctx.obj
    density = settings.setting('DEFAULT_DENSITY') if density is None else density
    seed = settings.setting('DEFAULT_SEED') if seed is None else seed
    try:
        inst = get_oracle_service().generate(n, c, density, seed)
    except ParamsInfeasible as e:
        logger.error(f"Generator parameters rejected: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INFEASIBLE_PARAMS)

    solver_service = get_solver_service()
    solver_service.save_instance(inst, out_path)
    summary = solver_service.describe(inst)
    click.echo(f"wrote {out_path}: c={summary['c']} edges={summary['m']}")


@click.command('compare')
@click.option('--corpus', 'corpus_dir', type=click.Path(file_okay=False), help='Folder of instance JSON files')
@click.option('--count', type=int, default=None, help='Number of generated instances')
@click.option('--n-min', type=int, default=5, show_default=True)
@click.option('--n-max', type=int, default=10, show_default=True)
@click.option('--c-max', type=int, default=3, show_default=True)
@click.option('--density', type=float, default=None)
@click.option('--seed', type=int, default=None)
@click.option('--threads', type=int, default=None, help='Worker processes')
@click.option('--json', 'as_json', is_flag=True, help='Print per-instance rows as JSON')
@click.option('--out', 'out_path', type=click.Path(dir_okay=False), help='Write the summary table as CSV')
@click.pass_context
def compare_cmd(ctx, corpus_dir, count, n_min, n_max, c_max, density, seed, threads, as_json, out_path):
    """Compare solver and brute-force oracle on a corpus"""
    from app.services.oracle_service import get_oracle_service
    from app.services.report_service import get_report_service
    from utils.errors import InstanceError

    settings = ctx.obj
    oracle_service = get_oracle_service()
    report_service = get_report_service()
    try:
        if corpus_dir:
            items = oracle_service.corpus_from_dir(corpus_dir)
        else:
            count = settings.setting('CORPUS_SIZE') if count is None else count
            items = oracle_service.generated_corpus(
                count, (n_min, n_max), range(c_max + 1),
                settings.setting('DEFAULT_DENSITY') if density is None else density,
                settings.setting('DEFAULT_SEED') if seed is None else seed,
            )
    except InstanceError as e:
        logger.error(f"Cannot load corpus: {e}")
        click.echo(f"error: {e}", err=True)
        ctx.exit(EXIT_INSTANCE)

    rows = oracle_service.compare(items, threads or settings.setting('THREADS'))
    df = report_service.compare_table(rows)
    if as_json:
        click.echo(json.dumps(json.loads(df.to_json(orient='records')), indent=2))
    click.echo(report_service.compare_summary(df))
    if out_path:
        folder = os.path.dirname(out_path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        df.to_csv(out_path, index=False)
        logger.info(f"Saved comparison table to {out_path}")
    if (df['status'].isin(['MISMATCH', 'error'])).any():
        ctx.exit(EXIT_MISMATCH)
