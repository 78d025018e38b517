"""
Chaînes croissantes de langages et expérience de convergence d(L_n, L_inf) → 0

Les chaînes ne sont exposées que jusqu'à un indice fini: les invariants
(croissance, stricte croissance, couverture de la limite) et les verdicts de
convergence sont des faits vérifiés pour n ≤ n_max, sur l'échelle d'ε configurée.
"""

import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .base import INFINITE, DomainError, MetricDomainError, PreconditionError, \
    ValidationError, as_fraction, get_logger
from .languages import FiniteLanguage, Language, is_proper_subset, is_subset, union
from .learners import Learner
from .metrics import Distance, Metric, upper
from .simulate import check_limit_convergence, run
from .texts import Text, canonical_text

CHAIN_KINDS = ('enumeration', 'decomposition', 'custom')

DEFAULT_LADDER = tuple(Fraction(1, 2 ** k) for k in range(1, 7))

CONVERGING = 'CONVERGING'
OBSTRUCTED = 'OBSTRUCTED'


class LanguageChain:
    """Suite croissante (L_n), n ≥ 1, accompagnée de sa limite déclarée L_inf"""

    def __init__(self, generator: Callable[[int], Language], limit: Language, kind: str,
                 strictness_bound: int = 1, cover_bound: Optional[Callable[[int], int]] = None,
                 strict_until: Optional[int] = None, cover_length: Optional[int] = None,
                 parameters: Optional[Dict] = None):
        if kind not in CHAIN_KINDS:
            raise ValidationError(f"Type de chaîne inconnu: {kind!r}")
        self._generator = generator
        self.limit = limit
        self.kind = kind
        self.strictness_bound = strictness_bound
        self.cover_bound = cover_bound or (lambda i: i)
        # segment sur lequel la stricte croissance est exigée (None: partout)
        self.strict_until = strict_until
        # longueur maximale des mots de la limite dont la couverture est vérifiée
        self.cover_length = cover_length
        self.parameters = dict(parameters or {})
        self._members: Dict[int, Language] = {}
        self._lock = threading.Lock()

    def language(self, n: int) -> Language:
        """L_n (indice à partir de 1)"""
        if n < 1:
            raise DomainError(f"Indice de chaîne invalide: {n}")
        with self._lock:
            member = self._members.get(n)
        if member is None:
            member = self._generator(n)
            with self._lock:
                member = self._members.setdefault(n, member)
        return member

    __call__ = language

    def validate(self, n_max: int) -> None:
        """Vérifie croissance, stricte croissance et couverture pour n ≤ n_max"""
        for n in range(1, n_max):
            if not is_subset(self.language(n), self.language(n + 1)):
                raise ValidationError(f"Chaîne non croissante: L_{n} ⊄ L_{n + 1}")

        strict_end = n_max if self.strict_until is None else min(n_max, self.strict_until)
        for n in range(1, strict_end):
            horizon = n + self.strictness_bound
            if horizon > strict_end:
                # fenêtre tronquée par n_max: pas de verdict pour une chaîne ouverte
                if self.strict_until is None:
                    break
                horizon = strict_end
            if not any(is_proper_subset(self.language(n), self.language(m))
                       for m in range(n + 1, horizon + 1)):
                raise ValidationError(f"Chaîne non strictement croissante après L_{n} "
                                      f"(borne {self.strictness_bound})")

        for i, word in enumerate(self.limit.first_words(n_max), start=1):
            if self.cover_length is not None and len(word) > self.cover_length:
                break
            bound = self.cover_bound(i)
            if bound > n_max:
                continue
            if not self.language(bound).contains(word):
                raise ValidationError(f"Couverture: le mot {word!r} (rang {i}) de la limite "
                                      f"n'apparaît pas dans L_{bound}")

    def describe(self) -> Dict:
        description = {'kind': self.kind, 'L_inf': self.limit.describe()}
        description.update(self.parameters)
        return description

    def __repr__(self):
        return f"LanguageChain(kind={self.kind!r}, limit={self.limit.label()!r})"


def chain_from_enumeration(L_inf: Language) -> LanguageChain:
    """L_n = les n premiers mots shortlex de L_inf"""
    if L_inf.cardinality() != INFINITE:
        raise DomainError(f"La chaîne d'énumération exige un langage infini, pas {L_inf.label()}")

    def generator(n: int) -> Language:
        return FiniteLanguage(frozenset(L_inf.first_words(n)), L_inf.alphabet)

    return LanguageChain(generator, L_inf, 'enumeration', strictness_bound=1)


def chain_from_decomposition(parts: Sequence[Language], L_inf: Language,
                             coverage_length: int = 6) -> LanguageChain:
    """
    L_n = G_1 ∪ ... ∪ G_min(n, count): au-delà de la liste, la dernière union est répétée.
    La couverture de L_inf est vérifiée pour les mots de longueur ≤ coverage_length.
    """
    parts = tuple(parts)
    if not parts:
        raise ValidationError("Une décomposition contient au moins une partie")
    if coverage_length < 1:
        raise DomainError("coverage_length doit être strictement positif")
    for index, part in enumerate(parts, start=1):
        if part.alphabet != L_inf.alphabet:
            raise DomainError(f"Partie {index}: alphabet différent de celui de L_inf")
        if not is_subset(part, L_inf):
            raise PreconditionError(f"Partie {index} ({part.label()}) non incluse dans {L_inf.label()}")

    unions: List[Language] = [parts[0]]
    for part in parts[1:]:
        unions.append(union(unions[-1], part))

    whole = unions[-1]
    for word in L_inf.iter_shortlex():
        if len(word) > coverage_length:
            break
        if not whole.contains(word):
            raise ValidationError(f"Les parties ne couvrent pas {L_inf.label()}: "
                                  f"mot manquant {word!r} (longueur ≤ {coverage_length})")

    count = len(parts)
    return LanguageChain(lambda n: unions[min(n, count) - 1], L_inf, 'decomposition',
                         strictness_bound=count, cover_bound=lambda i: count,
                         strict_until=count, cover_length=coverage_length,
                         parameters={'parts': [p.describe() for p in parts],
                                     'coverage_length': coverage_length})


def chain_from_text(text: Text, L_inf: Language, strictness_bound: Optional[int] = None) -> LanguageChain:
    """L_n = range(t_n): la chaîne des hypothèses de l'apprenant par l'image sur le texte"""
    if text.alphabet != L_inf.alphabet:
        raise DomainError("Texte et limite sur des alphabets différents")
    if strictness_bound is None:
        prefix = text.parameters.get('prefix', [])
        strictness_bound = {'canonical': 1, 'seeded-random': 3}.get(text.kind, len(prefix) + 1)
    seen = []
    lock = threading.Lock()

    def generator(n: int) -> Language:
        with lock:
            while len(seen) < n:
                seen.append(text.word(len(seen) + 1))
            return FiniteLanguage(frozenset(seen[:n]), L_inf.alphabet)

    return LanguageChain(generator, L_inf, 'custom', strictness_bound=strictness_bound,
                         cover_bound=text.fairness_bound, parameters={'text': text.describe()})


# ----------------------------------------------------------------------
# Expérience de convergence
# ----------------------------------------------------------------------

@dataclass
class ChainRow:
    n: int
    distance: Optional[Distance]
    flag: str = ''


@dataclass
class ChainExperiment:
    chain: LanguageChain
    metric: Metric
    n_max: int
    ladder: Tuple[Fraction, ...]
    rows: List[ChainRow]
    verdict: str
    entered_at: Dict[Fraction, Optional[int]] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def unbeaten(self) -> List[Fraction]:
        return [eps for eps in self.ladder if self.entered_at.get(eps) is None]

    def verdict_line(self) -> str:
        ladder = ','.join(str(eps) for eps in self.ladder)
        line = f"VERDICT {self.verdict} n_max={self.n_max} ladder={ladder} (within n_max)"
        if self.unbeaten:
            line += ' unbeaten=' + ','.join(str(eps) for eps in self.unbeaten)
        return line


def _entered_at(rows: Sequence[ChainRow], epsilon: Fraction) -> Optional[int]:
    entered = None
    for row in reversed(rows):
        if row.distance is None or not upper(row.distance) < epsilon:
            break
        entered = row.n
    return entered


def convergence_experiment(chain: LanguageChain, metric: Metric, n_max: int,
                           ladder: Sequence = DEFAULT_LADDER, validate: bool = True,
                           logger=None) -> ChainExperiment:
    """Distances d(L_n, L_inf) pour n = 1..n_max et verdict CONVERGING / OBSTRUCTED"""
    logger = get_logger(logger)
    if n_max < 1:
        raise DomainError(f"n_max doit être strictement positif: {n_max}")
    ladder = tuple(as_fraction(eps) for eps in ladder)
    if not ladder or any(eps <= 0 for eps in ladder):
        raise DomainError("L'échelle d'ε doit être non vide et strictement positive")

    start = time.perf_counter()
    logger.info(f"🚀 Expérience de convergence {chain!r} / {metric.name}, n_max={n_max}")
    if validate:
        chain.validate(n_max)

    rows: List[ChainRow] = []
    for n in range(1, n_max + 1):
        try:
            rows.append(ChainRow(n, metric.distance(chain.language(n), chain.limit)))
        except MetricDomainError as e:
            logger.debug(f"⚠️ n={n} hors domaine: {e}")
            rows.append(ChainRow(n, None, 'metric-domain'))

    entered = {eps: _entered_at(rows, eps) for eps in ladder}
    verdict = CONVERGING if all(v is not None for v in entered.values()) else OBSTRUCTED
    experiment = ChainExperiment(chain, metric, n_max, ladder, rows, verdict, entered,
                                 time.perf_counter() - start)
    logger.info(f"📊 {experiment.verdict_line()} en {experiment.elapsed:.2f}s")
    return experiment


# ----------------------------------------------------------------------
# Condition nécessaire et cohérence avec la simulation
# ----------------------------------------------------------------------

@dataclass
class NecessaryConditionReport:
    holds: bool
    experiments: List[ChainExperiment]

    @property
    def obstructed(self) -> List[ChainExperiment]:
        return [e for e in self.experiments if e.verdict == OBSTRUCTED]

    def summary(self) -> str:
        if self.holds:
            return f"holds on the tested chains ({len(self.experiments)})"
        return f"obstructed on {len(self.obstructed)}/{len(self.experiments)} tested chains"


def necessary_condition_check(chains: Sequence[LanguageChain], metric: Metric, n_max: int,
                              ladder: Sequence = DEFAULT_LADDER, logger=None) -> NecessaryConditionReport:
    """d(L_n, L_inf) → 0 sur chaque chaîne échantillonnée (condition nécessaire d'apprenabilité)"""
    experiments = [convergence_experiment(chain, metric, n_max, ladder, logger=logger)
                   for chain in chains]
    return NecessaryConditionReport(all(e.verdict == CONVERGING for e in experiments), experiments)


@dataclass
class ConsistencyReport:
    certified: bool
    experiment: Optional[ChainExperiment]
    consistent: bool
    details: List[str] = field(default_factory=list)


def learning_consistency_check(chain: LanguageChain, metric: Metric, learners: Sequence[Learner],
                               horizon: int, epsilon, sample_indices: Sequence[int],
                               n_max: int, logger=None) -> ConsistencyReport:
    """
    Si la simulation certifie (à ε, horizon fixé) l'apprentissage de L_inf et des L_n
    échantillonnés par l'un des apprenants, l'expérience de chaîne doit converger.
    """
    logger = get_logger(logger)
    targets = [chain.limit] + [chain.language(n) for n in sample_indices]
    details = []
    certified = False
    for learner in learners:
        ok = True
        for target in targets:
            try:
                trace = run(learner, canonical_text(target), target, metric, horizon, logger)
            except (DomainError, PreconditionError) as e:
                details.append(f"{learner.name}: {e}")
                ok = False
                break
            if check_limit_convergence(trace, epsilon) is None:
                ok = False
                break
        if ok:
            certified = True
            details.append(f"{learner.name}: learning certified at epsilon={epsilon} within horizon {horizon}")
            break

    if not certified:
        return ConsistencyReport(False, None, True, details)
    experiment = convergence_experiment(chain, metric, n_max, logger=logger)
    consistent = experiment.verdict == CONVERGING
    if not consistent:
        logger.error(f"❌ Incohérence: apprentissage certifié mais {experiment.verdict_line()}")
    return ConsistencyReport(True, experiment, consistent, details)
