import logging
import os
from dataclasses import dataclass


@dataclass
class SolverApp:
    """Configured application context shared by the CLI commands"""
    config_name: str
    config: type

    def setting(self, name, default=None):
        return getattr(self.config, name, default)


def create_app(config_name=None, log_level=None):
    """Application factory: resolve configuration and set up logging"""
    from app.config import config
    if config_name is None:
        config_name = os.getenv('STDP_ENV', 'default')

    cfg = config[config_name]
    solver_app = SolverApp(config_name=config_name, config=cfg)
    cfg.init_app(solver_app)

    # Configure logging
    level = getattr(logging, (log_level or cfg.LOG_LEVEL).upper())
    logging.basicConfig(level=level, format=cfg.LOG_FORMAT)
    # basicConfig is a no-op once handlers exist; the level still applies
    logging.getLogger().setLevel(level)

    return solver_app
