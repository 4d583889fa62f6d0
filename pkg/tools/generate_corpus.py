#!/usr/bin/env python3
"""
Script to write a folder of seeded random instances for `compare --corpus`
"""

import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

import click

from app import create_app
from app.services.oracle_service import get_oracle_service
from app.services.solver_service import get_solver_service
from utils.graph_core import instance_from_json


def generate_corpus(folder, count, n_min, n_max, c_max, density, seed):
    """Write count instances cycling through n in [n_min, n_max] and c in [0, c_max]"""
    items = get_oracle_service().generated_corpus(count, (n_min, n_max), range(c_max + 1), density, seed)
    solver_service = get_solver_service()
    for name, document in items:
        solver_service.save_instance(instance_from_json(document), os.path.join(folder, f"{name}.json"))
    return len(items)


@click.command()
@click.argument('folder', type=click.Path(file_okay=False))
@click.option('--count', type=int, default=None)
@click.option('--n-min', type=int, default=5, show_default=True)
@click.option('--n-max', type=int, default=10, show_default=True)
@click.option('--c-max', type=int, default=3, show_default=True)
@click.option('--density', type=float, default=None)
@click.option('--seed', type=int, default=None)
def main(folder, count, n_min, n_max, c_max, density, seed):
    settings = create_app()
    written = generate_corpus(
        folder,
        settings.setting('CORPUS_SIZE') if count is None else count,
        n_min, n_max, c_max,
        settings.setting('DEFAULT_DENSITY') if density is None else density,
        settings.setting('DEFAULT_SEED') if seed is None else seed,
    )
    print(f"✅ Wrote {written} instances to {folder}")


if __name__ == "__main__":
    main()
