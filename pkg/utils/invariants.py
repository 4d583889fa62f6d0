"""
Process-wide switch for debug assertions.

The flag starts from STDP_ASSERT_INVARIANTS and can be flipped by the CLI
(--assert-invariants) or by the testing configuration.
"""

import os
import logging
from contextlib import contextmanager
from dotenv import load_dotenv

from utils.errors import InvariantViolation

load_dotenv()

logger = logging.getLogger(__name__)

_enabled = os.getenv('STDP_ASSERT_INVARIANTS', 'false').lower() == 'true'


def enabled() -> bool:
    return _enabled


def set_enabled(flag: bool) -> None:
    global _enabled
    _enabled = bool(flag)
    logger.debug(f"Invariant assertions {'enabled' if _enabled else 'disabled'}")


@contextmanager
def assertions(flag: bool = True):
    """Temporarily switch assertions on (or off)"""
    previous = _enabled
    set_enabled(flag)
    try:
        yield
    finally:
        set_enabled(previous)


def check(condition: bool, message: str) -> None:
    """Raise InvariantViolation when assertions are on and condition is false"""
    if _enabled and not condition:
        logger.error(f"Invariant violated: {message}")
        raise InvariantViolation(message)
