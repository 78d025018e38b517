"""
Package CORE pour la logique métier
"""

from src.core.experiment_manager import ExperimentManager

__all__ = [
    'ExperimentManager'
]
