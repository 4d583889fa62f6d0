#!/usr/bin/env python3
"""
Oracle Service
Corpus generation and solver-versus-oracle comparison, fanned out over a
process pool when more than one worker is requested.
"""

import glob
import logging
import os
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Tuple

from app.config import Config
from utils.errors import SolverError, TooLarge
from utils.graph_core import WeightedInstance, instance_from_json, instance_to_json, negative_forest
from utils.oracle import brute_force_stdp, generate_instance, guard_size
from utils.solver import solve

logger = logging.getLogger(__name__)

Item = Tuple[str, Dict[str, Any]]


def _compare_one(item: Item) -> Dict[str, Any]:
    """Solve one instance both ways; runs inside worker processes"""
    name, document = item
    row: Dict[str, Any] = {'instance': name, 'n': document['n'], 'm': len(document['edges'])}
    try:
        inst = instance_from_json(document)
        row['c'] = negative_forest(inst).c
        guard_size(inst)
        started = time.perf_counter()
        solution = solve(inst)
        row['solver_seconds'] = time.perf_counter() - started
        expected = brute_force_stdp(inst)
    except TooLarge as e:
        row.update(status='skipped', detail=str(e))
        return row
    except SolverError as e:
        row.update(status='error', detail=str(e))
        return row
    row['solver_weight'] = None if solution is None else solution.weight
    row['oracle_weight'] = None if expected is None else expected[0]
    row['status'] = 'agree' if row['solver_weight'] == row['oracle_weight'] else 'MISMATCH'
    row['detail'] = ''
    return row


class OracleService:
    """Builds corpora and checks the solver against the brute-force oracle"""

    def generate(self, n: int, c: int, density: float, seed: int) -> WeightedInstance:
        return generate_instance(n, c, density=density, seed=seed)

    def generated_corpus(self, count: int, n_range: Tuple[int, int], c_values: Iterable[int],
                         density: float, seed: int) -> List[Item]:
        """count instances cycling through n_range and c_values; infeasible (n, c) pairs are skipped"""
        c_values = list(c_values)
        sizes = list(range(n_range[0], n_range[1] + 1))
        combos = [(n, c) for n in sizes for c in c_values if 2 * c <= n]
        items: List[Item] = []
        if not combos:
            return items
        for k in range(count):
            n, c = combos[k % len(combos)]
            inst = self.generate(n, c, density, seed + k)
            items.append((f"gen-{seed + k}-n{n}-c{c}", instance_to_json(inst)))
        return items

    def corpus_from_dir(self, folder: str) -> List[Item]:
        from app.services.solver_service import get_solver_service
        solver_service = get_solver_service()
        items = []
        for path in sorted(glob.glob(os.path.join(folder, '*.json'))):
            inst = solver_service.load_instance(path)
            items.append((os.path.basename(path), instance_to_json(inst)))
        return items

    def compare(self, items: List[Item], threads: Optional[int] = None) -> List[Dict[str, Any]]:
        threads = threads or Config.THREADS
        logger.info(f"Comparing {len(items)} instances with {threads} worker(s)")
        if threads > 1 and len(items) > 1:
            with ProcessPoolExecutor(max_workers=threads) as pool:
                rows = list(pool.map(_compare_one, items))
        else:
            rows = []
            for k, item in enumerate(items, 1):
                rows.append(_compare_one(item))
                if k % 25 == 0:
                    logger.info(f"Compared {k}/{len(items)}")
        mismatches = [r['instance'] for r in rows if r['status'] == 'MISMATCH']
        if mismatches:
            logger.error(f"Solver and oracle disagree on {mismatches}")
        return rows


_oracle_service_instance = None


def get_oracle_service() -> OracleService:
    """Get the oracle service instance (singleton pattern)"""
    global _oracle_service_instance
    if _oracle_service_instance is None:
        _oracle_service_instance = OracleService()
    return _oracle_service_instance
