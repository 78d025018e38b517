"""
Module d'apprenabilité à la limite: langages, textes, métriques, apprenants et expériences
Verdicts bornés (horizon, bornes de recherche) et distances exactes
"""

from .base import (DomainError, LearnabilityError, MetricDomainError, PreconditionError,
                   ValidationError)
from .languages import Alphabet, FiniteLanguage, RegularLanguage
from .texts import DataSet, Text
from .metrics import Metric, DistanceInterval
from .learners import Learner
from .simulate import Trace, run
from .locking import LockingVerifier, search_locking, verify_locking
from .chains import LanguageChain, convergence_experiment
from .angluin import Family, TelltaleChecker, check_family, find_telltale
from .adversary import AdversaryRun, run_adversary

__all__ = [
    'LearnabilityError',
    'DomainError',
    'MetricDomainError',
    'PreconditionError',
    'ValidationError',
    'Alphabet',
    'FiniteLanguage',
    'RegularLanguage',
    'DataSet',
    'Text',
    'Metric',
    'DistanceInterval',
    'Learner',
    'Trace',
    'run',
    'LockingVerifier',
    'verify_locking',
    'search_locking',
    'LanguageChain',
    'convergence_experiment',
    'Family',
    'TelltaleChecker',
    'find_telltale',
    'check_family',
    'AdversaryRun',
    'run_adversary',
]
