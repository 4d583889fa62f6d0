"""
Configuration module for the disjoint paths solver
"""
import os
from dotenv import load_dotenv

load_dotenv()

class Config:
    """Base configuration class"""

    # Debug assertions (see utils/invariants.py)
    ASSERT_INVARIANTS = os.getenv('STDP_ASSERT_INVARIANTS', 'false').lower() == 'true'

    # Brute-force guards
    ORACLE_MAX_N = int(os.getenv('STDP_ORACLE_MAX_N', 12))
    PARTSOL_ORACLE_MAX_N = int(os.getenv('STDP_PARTSOL_ORACLE_MAX_N', 10))

    # Conservativeness check: exhaustive cycle enumeration below these sizes, join reduction above
    CYCLE_ENUM_MAX_N = int(os.getenv('STDP_CYCLE_ENUM_MAX_N', 14))
    CYCLE_ENUM_MAX_EDGES = int(os.getenv('STDP_CYCLE_ENUM_MAX_EDGES', 28))

    # Exact search backend for conservative shortest paths
    SEARCH_BACKEND_MAX_N = int(os.getenv('STDP_SEARCH_BACKEND_MAX_N', 20))

    # Auxiliary graph views kept per instance by the partial solution tables
    AUX_VIEW_CACHE = int(os.getenv('STDP_AUX_VIEW_CACHE', 4096))

    # Corpus and benchmark settings
    THREADS = int(os.getenv('STDP_THREADS', 1))
    DEFAULT_SEED = int(os.getenv('STDP_SEED', 7))
    CORPUS_SIZE = int(os.getenv('STDP_CORPUS_SIZE', 300))
    DEFAULT_DENSITY = float(os.getenv('STDP_DENSITY', 0.5))
    BENCH_SIZES = os.getenv('STDP_BENCH_SIZES', '20,30,40')

    # Logging configuration
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'INFO')
    LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'

    @classmethod
    def init_app(cls, solver_app):
        """Apply configuration to a solver application context"""
        from utils import invariants
        invariants.set_enabled(cls.ASSERT_INVARIANTS)

class DevelopmentConfig(Config):
    """Development configuration"""
    ASSERT_INVARIANTS = True
    LOG_LEVEL = os.getenv('LOG_LEVEL', 'DEBUG')

class ProductionConfig(Config):
    """Production configuration"""
    ASSERT_INVARIANTS = False

    # Override with production settings
    LOG_LEVEL = 'WARNING'

class TestingConfig(Config):
    """Testing configuration"""
    ASSERT_INVARIANTS = True

    # Keep corpora small enough for a laptop run
    CORPUS_SIZE = int(os.getenv('STDP_CORPUS_SIZE', 40))

# Configuration dictionary
config = {
    'development': DevelopmentConfig,
    'production': ProductionConfig,
    'testing': TestingConfig,
    'default': Config
}
