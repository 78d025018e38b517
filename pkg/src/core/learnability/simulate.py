"""
Sessions apprenant / texte et verdicts bornés à l'horizon

Les verdicts (stabilisation exacte, convergence à ε près) ne portent que sur
les indices 1..horizon: ce sont des faits observés dans l'horizon, jamais des
preuves d'apprentissage.
"""

import time
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from .base import DomainError, MetricDomainError, as_fraction, get_logger
from .languages import Language, equals
from .learners import Learner
from .metrics import Distance, Metric, upper
from .texts import Text

FLAG_METRIC_DOMAIN = 'metric-domain'


@dataclass
class TraceStep:
    k: int
    word: str
    hypothesis: Language
    distance: Optional[Distance]
    hyp_changed: bool
    flag: str = ''


@dataclass
class Trace:
    """Suite des hypothèses A(t_k) et de leurs distances à la cible, k = 1..horizon"""

    steps: List[TraceStep]
    target: Language
    metric: Metric
    horizon: int
    learner: str = ''
    text: Dict = field(default_factory=dict)

    @property
    def distances(self) -> List[Optional[Distance]]:
        return [step.distance for step in self.steps]

    @property
    def hypotheses(self) -> List[Language]:
        return [step.hypothesis for step in self.steps]

    @property
    def flagged(self) -> List[int]:
        return [step.k for step in self.steps if step.flag]

    def __len__(self) -> int:
        return len(self.steps)


def run(learner: Learner, text: Text, target: Language, metric: Metric,
        horizon: int, logger=None) -> Trace:
    """Évalue A(t_k) pour k = 1..horizon et la distance à la cible"""
    logger = get_logger(logger)
    if horizon < 1:
        raise DomainError(f"L'horizon doit être strictement positif: {horizon}")
    if text.alphabet != target.alphabet:
        raise DomainError("Texte et cible sur des alphabets différents")

    start = time.perf_counter()
    logger.debug(f"🚀 Simulation {learner.name} sur {text!r}, horizon {horizon}")
    stepper = learner.stepper(text.alphabet)
    steps: List[TraceStep] = []
    previous: Optional[TraceStep] = None

    for k in range(1, horizon + 1):
        word = text.word(k)
        hypothesis = stepper.push(word)
        if previous is not None and hypothesis is previous.hypothesis:
            steps.append(TraceStep(k, word, hypothesis, previous.distance, False, previous.flag))
            previous = steps[-1]
            continue

        changed = previous is None or not equals(hypothesis, previous.hypothesis)
        try:
            distance, flag = metric.distance(hypothesis, target), ''
        except MetricDomainError as e:
            logger.debug(f"⚠️ Étape {k} hors domaine: {e}")
            distance, flag = None, FLAG_METRIC_DOMAIN
        steps.append(TraceStep(k, word, hypothesis, distance, changed, flag))
        previous = steps[-1]

    trace = Trace(steps, target, metric, horizon, learner.name, text.describe())
    logger.debug(f"✅ Simulation terminée en {time.perf_counter() - start:.3f}s "
                 f"({len(trace.flagged)} étapes hors domaine)")
    return trace


def check_exact_stabilization(trace: Trace) -> Optional[int]:
    """Plus petit n0 tel que A(t_k) = cible pour tout n0 ≤ k ≤ horizon, None sinon"""
    stabilized_at = None
    verdicts: Dict[int, bool] = {}
    for step in reversed(trace.steps):
        key = id(step.hypothesis)
        if key not in verdicts:
            verdicts[key] = equals(step.hypothesis, trace.target)
        if not verdicts[key]:
            break
        stabilized_at = step.k
    return stabilized_at


def check_limit_convergence(trace: Trace, epsilon) -> Optional[int]:
    """Plus petit n0 tel que d_k < ε pour tout n0 ≤ k ≤ horizon (borne supérieure des intervalles)"""
    epsilon = as_fraction(epsilon)
    if epsilon <= 0:
        raise DomainError("epsilon doit être strictement positif")
    entered_at = None
    for step in reversed(trace.steps):
        if step.distance is None or not upper(step.distance) < epsilon:
            break
        entered_at = step.k
    return entered_at
