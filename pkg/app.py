#!/usr/bin/env python3
"""
Shortest Two Disjoint Paths solver - command-line entry point

The application is organised as:

- app/__init__.py: Application factory (configuration + logging)
- app/cli.py: Click group wiring the commands together
- app/commands/: Commands (solve, check, show, gen, compare, bench)
- app/services/: Service layer wrappers
- utils/: Solver core
"""

import logging

from app.cli import cli

logger = logging.getLogger(__name__)


def main():
    """Main application entry point"""
    try:
        cli(standalone_mode=True)
    except Exception as e:
        logger.error(f"Unhandled error: {e}")
        raise


if __name__ == '__main__':
    main()
