"""
Adversaire de Gold: construction adaptative d'un texte empêchant la stabilisation exacte

À chaque étape, l'adversaire inspecte l'hypothèse h de l'apprenant sur le jeu
produit: si h = range(produced), l'apprenant s'est verrouillé sur le langage
fini courant et l'adversaire fournit le prochain mot frais de L_inf
(FEED_FRESH); sinon il répète le plus petit mot de l'image (REPEAT_RANGE),
construisant un texte du langage fini range(produced) sur lequel l'apprenant
échoue. Les rapports sont des témoins bornés à l'horizon, jamais des preuves.
"""

import time
from dataclasses import dataclass, field
from typing import List, Optional

from .base import INFINITE, DomainError, ValidationError, get_logger
from .languages import FiniteLanguage, Language, equals
from .learners import Learner
from .metrics import Metric, exact_metric
from .simulate import Trace, TraceStep
from .texts import DataSet, Text, replay_text

FEED_FRESH = 'FEED_FRESH'
REPEAT_RANGE = 'REPEAT_RANGE'

PATTERN_FEED = 'feed-fresh'
PATTERN_REPEAT = 'repeat-range'
PATTERN_MIXED = 'mixed'


@dataclass
class AdversaryStep:
    k: int
    word: str
    policy: str
    hypothesis: Language
    changed: bool


@dataclass
class AdversaryRun:
    learner: Learner
    L_inf: Language
    horizon: int
    produced: Optional[DataSet] = None
    steps: List[AdversaryStep] = field(default_factory=list)
    elapsed: float = 0.0

    @property
    def phase_log(self) -> List[str]:
        return [step.policy for step in self.steps]

    @property
    def mind_changes(self) -> int:
        """Nombre d'étapes où l'hypothèse change (la première hypothèse compte)"""
        return sum(1 for step in self.steps if step.changed)


def run_adversary(learner: Learner, L_inf: Language, horizon: int, logger=None) -> AdversaryRun:
    logger = get_logger(logger)
    if horizon < 1:
        raise DomainError(f"L'horizon doit être strictement positif: {horizon}")
    if L_inf.cardinality() != INFINITE:
        raise DomainError(f"L'adversaire exige un langage infini, pas {L_inf.label()}")

    start = time.perf_counter()
    logger.info(f"🚀 Adversaire contre {learner.name} sur {L_inf.label()}, horizon {horizon}")
    alphabet = L_inf.alphabet
    stepper = learner.stepper(alphabet)
    result = AdversaryRun(learner, L_inf, horizon)
    produced: List[str] = []
    seen = set()
    least: Optional[str] = None
    fresh_index = 1
    hypothesis: Optional[Language] = None
    current_range: Optional[Language] = None

    for k in range(1, horizon + 1):
        if hypothesis is None or equals(hypothesis, current_range):
            policy = FEED_FRESH
            word = L_inf.nth_word(fresh_index)
            fresh_index += 1
        else:
            policy = REPEAT_RANGE
            word = least
        if not L_inf.contains(word):
            raise ValidationError(f"Mot {word!r} hors de {L_inf.label()}")
        produced.append(word)
        if word not in seen:
            seen.add(word)
            if least is None or alphabet.shortlex_key(word) < alphabet.shortlex_key(least):
                least = word
            current_range = FiniteLanguage(frozenset(seen), alphabet)

        new_hypothesis = stepper.push(word)
        changed = hypothesis is None or (new_hypothesis is not hypothesis
                                         and not equals(new_hypothesis, hypothesis))
        hypothesis = new_hypothesis
        result.steps.append(AdversaryStep(k, word, policy, hypothesis, changed))

    result.produced = DataSet(tuple(produced), alphabet)
    result.elapsed = time.perf_counter() - start
    logger.info(f"📊 Adversaire: {result.mind_changes} changements d'hypothèse, "
                f"motif {classify_pattern(result)} en {result.elapsed:.2f}s")
    return result


def _suffix(run: AdversaryRun) -> List[AdversaryStep]:
    """Seconde moitié de la course (longueur ≥ horizon / 2)"""
    return run.steps[len(run.steps) // 2:]


def classify_pattern(run: AdversaryRun) -> str:
    policies = {step.policy for step in _suffix(run)}
    if policies == {FEED_FRESH}:
        return PATTERN_FEED
    if policies == {REPEAT_RANGE}:
        return PATTERN_REPEAT
    return PATTERN_MIXED


def final_target(run: AdversaryRun) -> Language:
    """Verdict correct pour le motif en vigueur: L_inf si FEED_FRESH domine, sinon l'image finie"""
    if classify_pattern(run) == PATTERN_FEED:
        return run.L_inf
    return run.produced.range()


def witness_holds(run: AdversaryRun) -> bool:
    """Au moins horizon/10 changements, ou un suffixe ≥ horizon/2 où l'hypothèse diffère du verdict correct"""
    changes = max(run.mind_changes - 1, 0)
    if 10 * changes >= run.horizon:
        return True
    pattern = classify_pattern(run)
    if pattern == PATTERN_MIXED:
        return False
    target = final_target(run)
    return all(not equals(step.hypothesis, target) for step in _suffix(run))


def completion_text(run: AdversaryRun) -> Text:
    """Texte dont le jeu produit est un préfixe (complétion surjective par l'énumération canonique)"""
    return replay_text(run.produced, final_target(run))


def adversary_trace(run: AdversaryRun, metric: Optional[Metric] = None) -> Trace:
    """Vue Trace de la course, distances mesurées au verdict correct du motif"""
    metric = metric or exact_metric()
    target = final_target(run)
    steps = [TraceStep(s.k, s.word, s.hypothesis, metric.distance(s.hypothesis, target), s.changed)
             for s in run.steps]
    return Trace(steps, target, metric, run.horizon, run.learner.name,
                 {'kind': 'adversarial-replay', 'prefix': list(run.produced.items)})


def mind_changes(trace: Trace) -> int:
    """Nombre d'étapes hyp_changed, moins l'hypothèse initiale"""
    return max(sum(1 for step in trace.steps if step.hyp_changed) - 1, 0)
