import json
import logging

import click

logger = logging.getLogger(__name__)


def _grid(text):
    return [int(x) for x in text.split(',') if x.strip()]


@click.command('bench')
@click.option('--sizes', default=None, help='Comma-separated vertex counts')
@click.option('--cs', default='1', show_default=True, help='Comma-separated tree counts')
@click.option('--density', type=float, default=0.3, show_default=True)
@click.option('--seed', type=int, default=None)
@click.option('--threads', type=int, default=None, help='Worker processes')
@click.option('--json', 'as_json', is_flag=True, help='Print the timing table as JSON')
@click.option('--plot', 'plot_path', type=click.Path(dir_okay=False), help='Save a log-log timing plot (PNG)')
@click.pass_context
def bench_cmd(ctx, sizes, cs, density, seed, threads, as_json, plot_path):
    """Time the solver over a grid of sizes and tree counts"""
    from app.services.report_service import get_report_service

    settings = ctx.obj
    report_service = get_report_service()
    sizes = _grid(settings.setting('BENCH_SIZES') if sizes is None else sizes)
    seed = settings.setting('DEFAULT_SEED') if seed is None else seed

    df = report_service.bench(sizes, _grid(cs), seed, density, threads or settings.setting('THREADS'))
    slopes = report_service.slopes(df)
    if as_json:
        payload = {'runs': json.loads(df.to_json(orient='records')),
                   'slopes': {str(c): v for c, v in slopes.items()}}
        click.echo(json.dumps(payload, indent=2))
    else:
        click.echo(df.to_string(index=False) if len(df) else "no runs")
        for c, slope in slopes.items():
            click.echo(f"c={c}: log-log slope {slope:.2f}")
    if plot_path and len(df):
        report_service.plot_bench(df, plot_path)
