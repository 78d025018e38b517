"""
Vérification et recherche bornées d'ensembles de données ε-verrouillants

Un ensemble l est ε-verrouillant pour L si (i) range(l) ⊆ L, (ii) d(A(l), L) < ε
et (iii) d(A(l∘s), L) < ε pour toute continuation s tirée de L. La condition
(iii) n'est vérifiée que sur un univers fini de continuations (mots du pool,
longueur bornée): PASS signifie « aucun contre-exemple dans l'univers exploré ».
"""

import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .base import BaseComponent, DomainError, MetricDomainError, as_fraction
from .languages import Language, is_subset
from .learners import Learner
from .metrics import Distance, Metric, lower, upper
from .texts import DataSet, canonical_text

DEFAULT_MAX_CONT_LEN = 3
DEFAULT_WORD_POOL_SIZE = 6
DEFAULT_MAX_PREFIX_LEN = 12

PASS = 'PASS'
FAIL = 'FAIL'

REASON_NOT_SUBSET = 'not a subset'
REASON_PREFIX = 'prefix not epsilon-close'
REASON_CONTINUATION = 'continuation leaves epsilon-ball'
REASON_METRIC_DOMAIN = 'metric domain error'

NOT_FOUND = 'not found under search policy'


@dataclass
class LockingReport:
    candidate: DataSet
    epsilon: Fraction
    verified_up_to: int
    pool: Tuple[str, ...]
    universe_size: int
    verdict: str
    reason: str = ''
    counterexample: Optional[DataSet] = None
    achieved_distance: Optional[Distance] = None
    initial_distance: Optional[Distance] = None
    continuations_checked: int = 0
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        return self.verdict == PASS

    def continuation_sample(self) -> str:
        return (f"pool={{{','.join(self.pool)}}} max_cont_len={self.verified_up_to} "
                f"universe={self.universe_size}")


@dataclass
class LockingSearchResult:
    found: Optional[DataSet]
    report: Optional[LockingReport]
    candidates_tried: int
    reports: List[LockingReport] = field(default_factory=list)

    @property
    def message(self) -> str:
        if self.found is None:
            return NOT_FOUND
        return f"found at prefix length {self.found.length}: {self.found.label()}"


def continuation_universe_size(pool_size: int, max_cont_len: int) -> int:
    return sum(pool_size ** j for j in range(1, max_cont_len + 1))


class LockingVerifier(BaseComponent):
    """Vérifie les conditions de verrouillage en parallélisant l'univers des continuations"""

    def __init__(self, learner: Learner, metric: Metric, max_workers: int = 5, logger=None):
        super().__init__(max_workers, logger)
        self.learner = learner
        self.metric = metric

    def _distance(self, data: DataSet, L: Language) -> Distance:
        return self.metric.distance(self.learner.hypothesize(data), L)

    def _scan_chunk(self, l: DataSet, L: Language, pool: Sequence[str], epsilon: Fraction,
                    length: int, first: int) -> Tuple[int, Optional[Tuple]]:
        """Premier contre-exemple (ordre canonique) parmi les continuations de longueur
        length commençant par le mot pool[first]"""
        checked = 0
        for rest in itertools.product(range(len(pool)), repeat=length - 1):
            indices = (first,) + rest
            continuation = DataSet(tuple(pool[i] for i in indices), l.alphabet)
            checked += 1
            try:
                distance = self._distance(l + continuation, L)
            except MetricDomainError:
                return checked, (indices, continuation, None)
            if not upper(distance) < epsilon:
                return checked, (indices, continuation, distance)
        return checked, None

    def _find_counterexample(self, l: DataSet, L: Language, pool: Sequence[str],
                             epsilon: Fraction, max_cont_len: int) -> Tuple[int, Optional[Tuple]]:
        chunks = [(length, first) for length in range(1, max_cont_len + 1)
                  for first in range(len(pool))]
        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            results = list(executor.map(
                lambda chunk: self._scan_chunk(l, L, pool, epsilon, *chunk), chunks))

        checked = 0
        for count, found in results:
            checked += count
            if found is not None:
                # les chunks sont dans l'ordre canonique: le premier trouvé est le plus petit
                return checked, found
        return checked, None

    def verify(self, l: DataSet, L: Language, epsilon, max_cont_len: int = DEFAULT_MAX_CONT_LEN,
               word_pool_size: int = DEFAULT_WORD_POOL_SIZE) -> LockingReport:
        epsilon = as_fraction(epsilon)
        if epsilon <= 0:
            raise DomainError("epsilon doit être strictement positif")
        if max_cont_len < 1 or word_pool_size < 1:
            raise DomainError("max_cont_len et word_pool_size doivent être strictement positifs")
        start = time.perf_counter()
        pool = L.first_words(word_pool_size)
        report = LockingReport(candidate=l, epsilon=epsilon, verified_up_to=max_cont_len,
                               pool=pool, universe_size=continuation_universe_size(len(pool), max_cont_len),
                               verdict=PASS)

        if not is_subset(l.range(), L):
            report.verdict, report.reason = FAIL, REASON_NOT_SUBSET
            report.elapsed = time.perf_counter() - start
            self.logger.debug(f"❌ {l.label()}: range non inclus dans {L.label()}")
            return report

        try:
            report.initial_distance = self._distance(l, L)
            prefix_ok = upper(report.initial_distance) < epsilon
        except MetricDomainError:
            prefix_ok = False

        checked, found = self._find_counterexample(l, L, pool, epsilon, max_cont_len)
        report.continuations_checked = checked

        if found is not None:
            _, continuation, distance = found
            report.verdict = FAIL
            report.counterexample = continuation
            report.achieved_distance = distance
            if not prefix_ok:
                report.reason = REASON_PREFIX
            else:
                report.reason = REASON_CONTINUATION if distance is not None else REASON_METRIC_DOMAIN
        elif not prefix_ok:
            report.verdict = FAIL
            report.reason = REASON_PREFIX if report.initial_distance is not None else REASON_METRIC_DOMAIN
            report.achieved_distance = report.initial_distance

        report.elapsed = time.perf_counter() - start
        self.logger.debug(f"🔍 Candidat {l.label()}: {report.verdict} "
                          f"({checked}/{report.universe_size} continuations)")
        return report

    def search(self, L: Language, epsilon, max_prefix_len: int = DEFAULT_MAX_PREFIX_LEN,
               max_cont_len: int = DEFAULT_MAX_CONT_LEN,
               word_pool_size: int = DEFAULT_WORD_POOL_SIZE) -> LockingSearchResult:
        if max_prefix_len < 1:
            raise DomainError("max_prefix_len doit être strictement positif")
        start = time.perf_counter()
        self.logger.info(f"🚀 Recherche d'un ensemble verrouillant pour {L.label()} "
                         f"({self.learner.name}, {self.metric.name}, ε={epsilon})")
        text = canonical_text(L)
        reports: List[LockingReport] = []
        for n in range(1, max_prefix_len + 1):
            report = self.verify(text.prefix(n), L, epsilon, max_cont_len, word_pool_size)
            reports.append(report)
            if report.passed:
                self.logger.info(f"✅ Ensemble verrouillant trouvé: {report.candidate.label()} "
                                 f"en {time.perf_counter() - start:.2f}s{self._memory_note()}")
                return LockingSearchResult(report.candidate, report, n, reports)
        self.logger.info(f"⚠️ Aucun ensemble verrouillant ({NOT_FOUND}) après {max_prefix_len} candidats "
                         f"en {time.perf_counter() - start:.2f}s{self._memory_note()}")
        return LockingSearchResult(None, None, max_prefix_len, reports)


def verify_locking(l: DataSet, L: Language, learner: Learner, metric: Metric, epsilon,
                   max_cont_len: int = DEFAULT_MAX_CONT_LEN,
                   word_pool_size: int = DEFAULT_WORD_POOL_SIZE,
                   max_workers: int = 5, logger=None) -> LockingReport:
    return LockingVerifier(learner, metric, max_workers, logger).verify(
        l, L, epsilon, max_cont_len, word_pool_size)


def search_locking(L: Language, learner: Learner, metric: Metric, epsilon,
                   max_prefix_len: int = DEFAULT_MAX_PREFIX_LEN,
                   max_cont_len: int = DEFAULT_MAX_CONT_LEN,
                   word_pool_size: int = DEFAULT_WORD_POOL_SIZE,
                   max_workers: int = 5, logger=None) -> LockingSearchResult:
    return LockingVerifier(learner, metric, max_workers, logger).search(
        L, epsilon, max_prefix_len, max_cont_len, word_pool_size)


def exact_lock_certified(report: LockingReport, metric: Metric) -> bool:
    """Pour une métrique exacte d'écart g, PASS à ε ≤ g certifie d = 0 sur l'univers exploré"""
    return report.passed and metric.is_exact and report.epsilon <= metric.gap \
        and report.initial_distance is not None and lower(report.initial_distance) == 0


def describe_bounds(max_prefix_len: int, max_cont_len: int, word_pool_size: int) -> Dict:
    return {'max_prefix_len': max_prefix_len, 'max_cont_len': max_cont_len,
            'word_pool_size': word_pool_size}
