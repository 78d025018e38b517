"""
Classe de base et définitions communes du laboratoire d'apprenabilité
"""

import logging
import math
from fractions import Fraction
from typing import Optional

LOGGER_NAME = 'learnlab'

# Cardinalité infinie (comparable aux entiers, compatible avec min/max)
INFINITE = math.inf


class LearnabilityError(Exception):
    """Erreur racine du laboratoire"""


class DomainError(LearnabilityError, ValueError):
    """Valeur hors du domaine d'une opération (alphabet, langage vide, ...)"""


class MetricDomainError(DomainError):
    """Paire de langages hors du domaine déclaré d'une métrique"""


class PreconditionError(LearnabilityError, ValueError):
    """Précondition d'une opération non respectée"""


class ValidationError(LearnabilityError, ValueError):
    """Représentation ou construction invalide"""


def get_logger(logger: Optional[logging.Logger] = None) -> logging.Logger:
    """Retourne le logger fourni ou le logger du projet"""
    return logger or logging.getLogger(LOGGER_NAME)


def format_cardinality(card) -> str:
    """Formate une cardinalité finie ou infinie"""
    return 'inf' if card == INFINITE else str(int(card))


def as_fraction(value) -> Fraction:
    """Convertit un nombre ou une chaîne 'p/q' en rationnel exact (0.1 devient 1/10)"""
    if isinstance(value, bool):
        raise DomainError(f"Valeur numérique invalide: {value!r}")
    if isinstance(value, float):
        if not math.isfinite(value):
            raise DomainError(f"Valeur numérique invalide: {value!r}")
        return Fraction(repr(value))
    try:
        return Fraction(value)
    except (TypeError, ValueError, ZeroDivisionError):
        raise DomainError(f"Valeur numérique invalide: {value!r}") from None


class BaseComponent:
    """Classe de base pour les composants parallélisables (verrouillage, tell-tale)"""

    def __init__(self, max_workers: int = 5, logger=None):
        self.max_workers = max(1, int(max_workers))
        self.logger = get_logger(logger)
        self._check_dependencies()

    def _check_dependencies(self):
        """Vérifie les dépendances optionnelles"""
        try:
            import psutil  # noqa: F401
            self.psutil_available = True
        except ImportError:
            self.psutil_available = False
            self.logger.debug("psutil absent: mesures mémoire désactivées")

    def _memory_mb(self) -> float:
        """Mémoire résidente du processus en MB (0.0 si psutil absent)"""
        if not self.psutil_available:
            return 0.0
        import psutil
        return psutil.Process().memory_info().rss / (1024 * 1024)

    def _memory_note(self) -> str:
        """Suffixe de log ', mémoire X MB' (vide sans psutil)"""
        return f", mémoire {self._memory_mb():.1f} MB" if self.psutil_available else ''
