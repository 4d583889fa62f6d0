#!/usr/bin/env python3
"""
Test script for the command line: solve, check, show, gen, compare and bench.
"""

import json
import os
import sys

sys.path.append(os.path.dirname(os.path.dirname(__file__)))

from click.testing import CliRunner

from app.cli import cli
from app.commands import EXIT_INFEASIBLE_PARAMS, EXIT_INSTANCE, EXIT_NON_CONSERVATIVE
from tools.generate_corpus import generate_corpus

I1 = {'n': 4, 'edges': [[0, 1, 1], [0, 2, 1], [1, 3, 1], [2, 3, 1], [1, 2, -1]], 's': 0, 't': 3}
TRIANGLE = {'n': 3, 'edges': [[0, 1, -1], [1, 2, -1], [0, 2, -1]], 's': 0, 't': 2}
BRIDGE = {'n': 3, 'edges': [[0, 1, 1], [1, 2, 1]], 's': 0, 't': 2}


def _write(name, document):
    with open(name, 'w', encoding='utf-8') as handle:
        json.dump(document, handle)
    return name


def _run(runner, *args):
    # log records would land in the captured output next to the JSON reports
    return runner.invoke(cli, ['--env', 'testing', '--log-level', 'critical', *args])


def test_solve_command():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = _run(runner, 'solve', _write('i1.json', I1))
        assert result.exit_code == 0, result.output
        lines = result.output.splitlines()
        assert "weight 4" in lines
        assert "path 1: 0 1 3" in lines
        assert "path 2: 0 2 3" in lines

        result = _run(runner, 'solve', _write('bridge.json', BRIDGE))
        assert result.exit_code == 0
        assert "INFEASIBLE" in result.output

        result = _run(runner, 'solve', '--json', '--emit-dot', 'i1.dot', 'i1.json')
        assert result.exit_code == 0
        report = json.loads(result.output)
        assert report['feasible'] and report['weight'] == '4' and report['weight_scaled'] == 8
        assert 'stats' in report
        with open('i1.dot', encoding='utf-8') as handle:
            dot = handle.read()
        assert dot.startswith('graph instance {')
        assert 'style=dashed' in dot and 'color=blue' in dot
        assert not os.path.exists('out')
    print("[OK] solve")


def test_solve_errors():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = _run(runner, 'solve', _write('triangle.json', TRIANGLE))
        assert result.exit_code == EXIT_NON_CONSERVATIVE
        assert "negative cycle:" in result.output

        with open('broken.json', 'w', encoding='utf-8') as handle:
            handle.write('{"n": 4, "edges": [')
        assert _run(runner, 'solve', 'broken.json').exit_code == EXIT_INSTANCE
        assert _run(runner, 'solve', _write('partial.json', {'n': 3})).exit_code == EXIT_INSTANCE
        assert _run(runner, 'solve', 'missing.json').exit_code == EXIT_INSTANCE
    print("[OK] solve exit codes")


def test_check_and_show():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = _run(runner, 'check', _write('i1.json', I1))
        assert result.exit_code == 0
        assert result.output.startswith("conservative (c=1")

        result = _run(runner, 'check', _write('triangle.json', TRIANGLE))
        assert result.exit_code == EXIT_NON_CONSERVATIVE
        assert result.output.startswith("negative cycle:")
        assert "(weight -3)" in result.output

        result = _run(runner, 'show', 'i1.json')
        assert result.exit_code == 0
        lines = result.output.splitlines()
        assert lines[0] == "n=4 m=5 s=0 t=3 c=1"
        assert lines[1] == "tree 0 (2 vertices): 1 2"
    print("[OK] check and show")


def test_gen_command():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = _run(runner, 'gen', '--n', '8', '--c', '1', '--seed', '7', '--out', 'corpus/a.json')
        assert result.exit_code == 0, result.output
        assert result.output.startswith("wrote corpus/a.json: c=1")
        assert os.path.exists('corpus/a.json')

        result = _run(runner, 'gen', '--n', '6', '--c', '0', '--out', 'corpus/b.json')
        assert result.exit_code == 0
        assert "c=0" in result.output

        result = _run(runner, 'gen', '--n', '4', '--c', '3', '--out', 'corpus/c.json')
        assert result.exit_code == EXIT_INFEASIBLE_PARAMS
        assert not os.path.exists('corpus/c.json')

        result = _run(runner, 'compare', '--corpus', 'corpus')
        assert result.exit_code == 0, result.output
        assert "2/2 agree" in result.output
    print("[OK] gen")


def test_compare_command():
    runner = CliRunner()
    with runner.isolated_filesystem():
        os.makedirs('empty')
        result = _run(runner, 'compare', '--corpus', 'empty')
        assert result.exit_code == 0
        assert "0/0 agree" in result.output

        result = _run(runner, 'compare', '--count', '6', '--n-min', '4', '--n-max', '6', '--c-max', '2',
                      '--out', 'out/compare.csv')
        assert result.exit_code == 0, result.output
        assert "6/6 agree" in result.output
        assert os.path.exists('out/compare.csv')
    print("[OK] compare")


def test_corpus_script():
    runner = CliRunner()
    with runner.isolated_filesystem():
        assert generate_corpus('corpus', 5, 4, 6, 2, 0.5, 3) == 5
        assert len(os.listdir('corpus')) == 5
        result = _run(runner, 'compare', '--corpus', 'corpus', '--json')
        assert result.exit_code == 0, result.output
        assert "5/5 agree" in result.output
    print("[OK] corpus script")


def test_bench_command():
    runner = CliRunner()
    with runner.isolated_filesystem():
        result = _run(runner, 'bench', '--sizes', '')
        assert result.exit_code == 0
        assert "no runs" in result.output

        result = _run(runner, 'bench', '--sizes', '6,8', '--cs', '1', '--json')
        assert result.exit_code == 0, result.output
        payload = json.loads(result.output)
        assert [row['n'] for row in payload['runs']] == [6, 8]
        assert '1' in payload['slopes']

        result = _run(runner, 'bench', '--sizes', '6,8', '--cs', '1', '--plot', 'out/bench.png')
        assert result.exit_code == 0, result.output
        assert "c=1: log-log slope" in result.output
        assert os.path.getsize('out/bench.png') > 0
    print("[OK] bench")


if __name__ == "__main__":
    print("Testing Command Line...")
    test_solve_command()
    test_solve_errors()
    test_check_and_show()
    test_gen_command()
    test_compare_command()
    test_corpus_script()
    test_bench_command()
    print("\n[SUCCESS] Command line tests completed!")
