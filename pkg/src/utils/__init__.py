"""
Module utilitaire pour l'application
"""

from src.utils.config_manager import ConfigManager
from src.utils.experiment_config import ConfigError, ExperimentConfig

__all__ = [
    'ConfigManager',
    'ConfigError',
    'ExperimentConfig'
]
