#!/usr/bin/env python3
"""
Solver Service
Instance file I/O, solving, conservativeness checks and DOT rendering for
the command layer.
"""

import json
import logging
import os
from typing import Any, Dict, Optional, Tuple

from utils.errors import InstanceError
from utils.graph_core import (
    ConservativenessCertificate, SCALE, WeightedInstance, instance_from_json, instance_to_json,
    is_conservative, negative_forest, norm_edge, path_edges,
)
from utils.solver import Solution, SolveStats, solve_with_stats

logger = logging.getLogger(__name__)

PATH_COLORS = ('blue', 'red')


def format_weight(scaled: int) -> str:
    """Unscaled weight as text ('4' or '7/2')"""
    if scaled % SCALE == 0:
        return str(scaled // SCALE)
    return f"{scaled}/{SCALE}"


class SolverService:
    """Wraps the core solver with file handling and reporting"""

    def load_instance(self, path: str) -> WeightedInstance:
        try:
            with open(path, 'r', encoding='utf-8') as handle:
                data = json.load(handle)
        except json.JSONDecodeError as e:
            raise InstanceError(f"{path}: not valid JSON ({e})") from e
        except OSError as e:
            raise InstanceError(f"{path}: cannot read file ({e})") from e
        if not isinstance(data, dict):
            raise InstanceError(f"{path}: expected a JSON object")
        inst = instance_from_json(data)
        logger.info(f"Loaded {inst} from {path}")
        return inst

    def save_instance(self, inst: WeightedInstance, path: str) -> None:
        folder = os.path.dirname(path)
        if folder:
            os.makedirs(folder, exist_ok=True)
        with open(path, 'w', encoding='utf-8') as handle:
            json.dump(instance_to_json(inst), handle, indent=2)
            handle.write('\n')
        logger.info(f"Wrote {inst} to {path}")

    def check(self, inst: WeightedInstance) -> ConservativenessCertificate:
        return is_conservative(inst)

    def solve(self, inst: WeightedInstance) -> Tuple[Optional[Solution], SolveStats]:
        return solve_with_stats(inst)

    def describe(self, inst: WeightedInstance) -> Dict[str, Any]:
        forest = negative_forest(inst)
        return {
            'n': inst.n,
            'm': inst.m,
            's': inst.s,
            't': inst.t,
            'c': forest.c,
            'trees': [sorted(T.vertices) for T in forest.trees],
        }

    def solution_report(self, solution: Optional[Solution], stats: Optional[SolveStats] = None) -> Dict[str, Any]:
        report: Dict[str, Any] = {'feasible': solution is not None}
        if solution is not None:
            report.update({
                'weight': format_weight(solution.weight),
                'weight_scaled': solution.weight,
                'paths': [list(solution.P1), list(solution.P2)],
            })
        if stats is not None:
            report['stats'] = stats.as_dict()
        return report

    def solution_text(self, solution: Optional[Solution]) -> str:
        if solution is None:
            return "INFEASIBLE"
        return "\n".join([
            f"weight {format_weight(solution.weight)}",
            f"path 1: {' '.join(map(str, solution.P1))}",
            f"path 2: {' '.join(map(str, solution.P2))}",
        ])

    def certificate_text(self, cert: ConservativenessCertificate) -> str:
        cycle = ' '.join(map(str, cert.cycle))
        return f"negative cycle: {cycle} (weight {format_weight(cert.weight)})"

    def to_dot(self, inst: WeightedInstance, solution: Optional[Solution] = None) -> str:
        """Graphviz text: negative edges dashed, the two solution paths in two colors"""
        colored: Dict[Tuple[int, int], str] = {}
        if solution is not None:
            for color, path in zip(PATH_COLORS, (solution.P1, solution.P2)):
                for e in path_edges(path):
                    colored[e] = color
        lines = ['graph instance {', '  node [shape=circle];']
        for v in inst.vertices:
            attrs = ' [shape=doublecircle]' if v in (inst.s, inst.t) else ''
            lines.append(f"  {v}{attrs};")
        for (u, v), w in inst.weights.items():
            attrs = [f'label="{format_weight(w)}"']
            if w < 0:
                attrs.append('style=dashed')
            if norm_edge(u, v) in colored:
                attrs += [f'color={colored[norm_edge(u, v)]}', 'penwidth=2']
            lines.append(f"  {u} -- {v} [{', '.join(attrs)}];")
        lines.append('}')
        return "\n".join(lines) + "\n"

    def write_dot(self, path: str, inst: WeightedInstance, solution: Optional[Solution] = None) -> None:
        with open(path, 'w', encoding='utf-8') as handle:
            handle.write(self.to_dot(inst, solution))
        logger.info(f"Wrote DOT rendering to {path}")


_solver_service_instance = None


def get_solver_service() -> SolverService:
    """Get the solver service instance (singleton pattern)"""
    global _solver_service_instance
    if _solver_service_instance is None:
        _solver_service_instance = SolverService()
    return _solver_service_instance


