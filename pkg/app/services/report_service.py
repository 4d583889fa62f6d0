#!/usr/bin/env python3
"""
Report Service
Tabular summaries of comparison and benchmark runs (pandas), log-log
scaling slopes (numpy) and timing plots (matplotlib).
"""

import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Tuple

import matplotlib
matplotlib.use('Agg')  # Non-interactive backend for file output
import matplotlib.pyplot as plt
import numpy as np
import pandas as pd

from app.config import Config
from utils.graph_core import instance_from_json, instance_to_json
from utils.oracle import generate_instance
from utils.solver import solve_with_stats

logger = logging.getLogger(__name__)

COMPARE_COLUMNS = ['instance', 'n', 'm', 'c', 'solver_weight', 'oracle_weight', 'status', 'solver_seconds', 'detail']
BENCH_COLUMNS = ['n', 'c', 'seed', 'm', 'seconds', 'weight', 'partitions', 'guesses']


def _time_one(job: Tuple[int, int, int, Dict[str, Any]]) -> Dict[str, Any]:
    n, c, seed, document = job
    inst = instance_from_json(document)
    started = time.perf_counter()
    solution, stats = solve_with_stats(inst)
    return {
        'n': n, 'c': c, 'seed': seed, 'm': inst.m,
        'seconds': time.perf_counter() - started,
        'weight': None if solution is None else solution.weight,
        'partitions': stats.partitions_visited,
        'guesses': stats.guesses_tried,
    }


class ReportService:
    """Turns raw run rows into tables, slopes and plots"""

    def compare_table(self, rows: List[Dict[str, Any]]) -> pd.DataFrame:
        df = pd.DataFrame(rows, columns=COMPARE_COLUMNS)
        return df.sort_values('instance', kind='stable').reset_index(drop=True)

    def compare_summary(self, df: pd.DataFrame) -> str:
        checked = int((df['status'] != 'skipped').sum())
        agree = int((df['status'] == 'agree').sum())
        lines = [f"{agree}/{checked} agree"]
        skipped = int((df['status'] == 'skipped').sum())
        if skipped:
            lines.append(f"{skipped} skipped (too large for the oracle)")
        errors = df[df['status'] == 'error']
        for _, row in errors.iterrows():
            lines.append(f"error on {row['instance']}: {row['detail']}")
        for _, row in df[df['status'] == 'MISMATCH'].iterrows():
            lines.append(f"MISMATCH on {row['instance']}: solver {row['solver_weight']}, oracle {row['oracle_weight']}")
        return "\n".join(lines)

    def bench(self, sizes: Iterable[int], cs: Iterable[int], seed: int, density: float,
              threads: Optional[int] = None) -> pd.DataFrame:
        threads = threads or Config.THREADS
        jobs = []
        for c in cs:
            for n in sizes:
                if 2 * c > n:
                    logger.warning(f"Skipping n={n}, c={c}: too few vertices")
                    continue
                inst = generate_instance(n, c, density=density, seed=seed)
                jobs.append((n, c, seed, instance_to_json(inst)))
        logger.info(f"Benchmarking {len(jobs)} configuration(s)")
        if threads > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(_time_one, jobs))
        else:
            rows = [_time_one(job) for job in jobs]
        return pd.DataFrame(rows, columns=BENCH_COLUMNS)

    def slopes(self, df: pd.DataFrame) -> Dict[int, float]:
        """Least-squares slope of log(seconds) against log(n), per c"""
        slopes: Dict[int, float] = {}
        for c, group in df.groupby('c'):
            group = group[group['seconds'] > 0]
            if group['n'].nunique() < 2:
                continue
            slope, _ = np.polyfit(np.log(group['n'].astype(float)), np.log(group['seconds']), 1)
            slopes[int(c)] = float(slope)
        return slopes

    def plot_bench(self, df: pd.DataFrame, path: str) -> None:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        plt.figure(figsize=(8, 5))
        for c, group in df.groupby('c'):
            plt.loglog(group['n'], group['seconds'], marker='o', label=f"c={c}")
        plt.xlabel('n')
        plt.ylabel('seconds')
        plt.title('Solve time by instance size')
        plt.legend()
        plt.tight_layout()
        plt.savefig(path, dpi=100)
        plt.close()
        logger.info(f"Saved benchmark plot to {path}")


_report_service_instance = None


def get_report_service() -> ReportService:
    """Get the report service instance (singleton pattern)"""
    global _report_service_instance
    if _report_service_instance is None:
        _report_service_instance = ReportService()
    return _report_service_instance
