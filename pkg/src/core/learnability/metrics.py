"""
Métriques sur les langages: métrique exacte 0/1, métrique de comptage et
métrique de différence symétrique pondérée par le rang shortlex

Les distances sont des rationnels exacts (fractions.Fraction) ou, lorsque la
différence symétrique est infinie, des intervalles certifiés [lo, hi].
"""

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from .base import INFINITE, DomainError, MetricDomainError, as_fraction, get_logger
from .languages import Language, equals, finite_words, intersection_cardinality

DEFAULT_TRUNCATION_RANK = 256


@dataclass(frozen=True)
class DistanceInterval:
    """Distance connue à un encadrement près (troncature certifiée)"""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"Intervalle vide [{self.lo}, {self.hi}]")


Distance = Union[Fraction, int, float, DistanceInterval]


def lower(d: Distance):
    return d.lo if isinstance(d, DistanceInterval) else d


def upper(d: Distance):
    return d.hi if isinstance(d, DistanceInterval) else d


def is_exact_value(x) -> bool:
    return isinstance(x, (int, Fraction)) and not isinstance(x, bool)


class Metric:
    """Fonction distance totale sur un domaine déclaré de paires de langages"""

    def __init__(self, name: str, distance: Callable[[Language, Language], Distance],
                 admits: Optional[Callable[[Language, Language], bool]] = None,
                 gap: Optional[Real] = None, parameters: Optional[Dict] = None):
        self.name = name
        self._distance = distance
        self._admits = admits
        self.gap = gap
        self.parameters = dict(parameters or {})

    @property
    def is_exact(self) -> bool:
        return self.gap is not None and self.gap > 0

    def admits(self, L: Language, G: Language) -> bool:
        return self._admits is None or self._admits(L, G)

    def distance(self, L: Language, G: Language) -> Distance:
        if not self.admits(L, G):
            raise MetricDomainError(f"Paire hors du domaine de la métrique {self.name}: "
                                    f"({L.label()}, {G.label()})")
        return self._distance(L, G)

    __call__ = distance

    def describe(self) -> Dict:
        description = {'kind': self.name}
        description.update(self.parameters)
        return description

    def __repr__(self):
        return f"Metric({self.name!r}, gap={self.gap})"


def exact_metric() -> Metric:
    """Métrique 0/1: d(L,G) = 1 si L ≠ G, 0 sinon"""
    return zero_one_scaled_metric(Fraction(1), name='exact')


def zero_one_scaled_metric(gap, name: str = 'scaled-exact') -> Metric:
    """Métrique exacte d'écart arbitraire: d(L,G) = gap si L ≠ G"""
    gap = as_fraction(gap)
    if gap <= 0:
        raise DomainError("L'écart d'une métrique exacte doit être strictement positif")

    def distance(L: Language, G: Language) -> Fraction:
        return Fraction(0) if equals(L, G) else gap

    parameters = {} if name == 'exact' else {'gap': str(gap)}
    return Metric(name, distance, gap=gap, parameters=parameters)


def counting_metric(L_inf: Language) -> Metric:
    """Métrique de comptage: la distance à L_inf est l'inverse du cardinal de l'intersection"""
    if L_inf.cardinality() != INFINITE:
        raise DomainError(f"La métrique de comptage exige un langage infini, pas {L_inf.label()}")

    def is_limit(X: Language) -> bool:
        return X is L_inf or (not X.is_finite and equals(X, L_inf))

    def admits(L: Language, G: Language) -> bool:
        return all(X.is_finite or is_limit(X) for X in (L, G))

    def hub(L: Language) -> Fraction:
        if is_limit(L):
            return Fraction(0)
        common = intersection_cardinality(L, L_inf)
        return Fraction(1) if common == 0 else Fraction(1, int(common))

    def distance(L: Language, G: Language) -> Fraction:
        if is_limit(L) and is_limit(G):
            return Fraction(0)
        if is_limit(G):
            return hub(L)
        if is_limit(L):
            return hub(G)
        if equals(L, G):
            return Fraction(0)
        return hub(L) + hub(G)

    return Metric('counting', distance, admits=admits, parameters={'L_inf': L_inf.describe()})


def symdiff_metric(weight_base=2, truncation_rank: int = DEFAULT_TRUNCATION_RANK) -> Metric:
    """d(L,G) = Σ base^(-rang shortlex) sur la différence symétrique"""
    base = as_fraction(weight_base)
    if base <= 1:
        raise DomainError("La base de pondération doit être > 1")
    if truncation_rank < 1:
        raise DomainError("Le rang de troncature doit être strictement positif")
    tail = base ** (-truncation_rank) / (base - 1)

    def weight(L: Language, word: str) -> Fraction:
        return base ** (-L.alphabet.rank(word))

    def distance(L: Language, G: Language) -> Distance:
        if L.alphabet != G.alphabet:
            raise DomainError("Alphabets différents")
        words_l, words_g = finite_words(L), finite_words(G)
        if words_l is not None and words_g is not None:
            return sum((weight(L, w) for w in words_l ^ words_g), Fraction(0))
        if words_l is None and words_g is None:
            xor = L.to_dfa().symmetric_difference(G.to_dfa())
            if xor.count_words() != INFINITE:
                return sum((weight(L, w) for w in xor.iter_shortlex()), Fraction(0))
            in_xor = xor.accepts
        else:
            # un seul côté fini: la différence symétrique est infinie
            def in_xor(word: str) -> bool:
                return L.contains(word) != G.contains(word)
        # troncature au rang R et majoration de la queue Σ_{r>R} base^-r
        head = Fraction(0)
        for rank, word in enumerate(itertools.islice(L.alphabet.iter_universe(), truncation_rank), start=1):
            if in_xor(word):
                head += base ** (-rank)
        return DistanceInterval(head, head + tail)

    return Metric('symdiff', distance,
                  parameters={'base': str(base), 'truncation_rank': truncation_rank})


# ----------------------------------------------------------------------
# Vérification des axiomes
# ----------------------------------------------------------------------

@dataclass
class AxiomViolation:
    axiom: str
    languages: Tuple[str, ...]
    detail: str


@dataclass
class MetricAxiomReport:
    metric: str
    passed: bool
    pairs_checked: int = 0
    triples_checked: int = 0
    counterexamples: List[AxiomViolation] = field(default_factory=list)
    domain_errors: List[Tuple[str, str]] = field(default_factory=list)

    def summary(self) -> str:
        status = 'PASS' if self.passed else 'FAIL'
        return (f"{status} metric={self.metric} pairs={self.pairs_checked} "
                f"triples={self.triples_checked} counterexamples={len(self.counterexamples)} "
                f"domain_errors={len(self.domain_errors)}")


def _leq(a, b, tolerance) -> bool:
    if is_exact_value(a) and is_exact_value(b):
        return a <= b
    return float(a) <= float(b) + tolerance


def _close(a, b, tolerance) -> bool:
    if is_exact_value(a) and is_exact_value(b):
        return a == b
    return abs(float(a) - float(b)) <= tolerance


def verify_metric_axioms(m: Metric, sample: Sequence[Language], tolerance=1e-9,
                         logger=None) -> MetricAxiomReport:
    """Vérifie positivité, séparation, symétrie et inégalité triangulaire sur un échantillon"""
    logger = get_logger(logger)
    report = MetricAxiomReport(metric=m.name, passed=True)
    n = len(sample)
    labels = [L.label() for L in sample]
    matrix: Dict[Tuple[int, int], Optional[Distance]] = {}

    for i, j in itertools.product(range(n), repeat=2):
        try:
            matrix[i, j] = m.distance(sample[i], sample[j])
        except MetricDomainError:
            matrix[i, j] = None
            if i <= j:
                report.domain_errors.append((labels[i], labels[j]))

    def violation(axiom: str, idx: Sequence[int], detail: str):
        report.counterexamples.append(AxiomViolation(axiom, tuple(labels[k] for k in idx), detail))

    for i, j in itertools.product(range(n), repeat=2):
        d = matrix[i, j]
        if d is None:
            continue
        report.pairs_checked += 1
        if not _leq(0, lower(d), tolerance):
            violation('non-negativity', (i, j), f"d = {lower(d)}")
        if equals(sample[i], sample[j]):
            if not _leq(upper(d), 0, tolerance):
                violation('identity', (i, j), f"langages égaux mais d = {upper(d)}")
        elif _leq(upper(d), 0, 0):
            violation('identity', (i, j), "langages distincts mais d = 0")
        back = matrix[j, i]
        if i < j and back is not None:
            if not (_close(lower(d), lower(back), tolerance) and _close(upper(d), upper(back), tolerance)):
                violation('symmetry', (i, j), f"d(L,G) = {d} / d(G,L) = {back}")

    for i, j, k in itertools.product(range(n), repeat=3):
        d_ik, d_ij, d_jk = matrix[i, k], matrix[i, j], matrix[j, k]
        if d_ik is None or d_ij is None or d_jk is None:
            continue
        report.triples_checked += 1
        if not _leq(lower(d_ik), upper(d_ij) + upper(d_jk), tolerance):
            violation('triangle', (i, j, k), f"{lower(d_ik)} > {upper(d_ij)} + {upper(d_jk)}")

    report.passed = not report.counterexamples
    logger.info(f"📊 Axiomes de {m.name}: {report.summary()}")
    return report


def estimate_gap(m: Metric, sample: Sequence[Language]):
    """inf{d(L,G) : L ≠ G} sur l'échantillon (None si aucune paire distincte admise)"""
    best = None
    for L, G in itertools.combinations(sample, 2):
        if not m.admits(L, G) or equals(L, G):
            continue
        value = lower(m.distance(L, G))
        if best is None or value < best:
            best = value
    return best
