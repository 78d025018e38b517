"""
Recherche de sous-ensembles tell-tale et verdicts d'apprenabilité exacte de familles

Un tell-tale D_L de L dans la famille C est un sous-ensemble fini de L tel
qu'aucun membre L' de C contenant D_L ne soit strictement inclus dans L. Une
famille est exactement apprenable si chacun de ses membres en possède un.

Les familles sont finies: une liste explicite de langages, ou un schéma
(tous les langages finis d'au plus max_words mots de longueur ≤ max_len) qui
tient lieu de la classe de tous les langages finis, plus des extras explicites.
"""

import functools
import itertools
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .base import INFINITE, BaseComponent, DomainError, PreconditionError, ValidationError
from .languages import Alphabet, FiniteLanguage, Language, equals, finite_words, \
    is_proper_subset, is_subset
from .learners import enumeration_learner
from .metrics import exact_metric
from .simulate import check_exact_stabilization, run
from .texts import canonical_text

WITNESS = 'WITNESS'
REFUTED = 'REFUTED'
INCONCLUSIVE = 'INCONCLUSIVE'

LEARNABLE = 'LEARNABLE'
NOT_LEARNABLE = 'NOT_LEARNABLE'
UNKNOWN = 'UNKNOWN'

DEFAULT_MAX_SUBSET_SIZE = 4
DEFAULT_MAX_WORD_LEN = 6
MAX_EXPANSION = 5000
MAX_BLOCKING_EXAMPLES = 5


@dataclass(frozen=True)
class FamilySchema:
    """Tous les langages finis non vides d'au plus max_words mots de longueur ≤ max_len"""

    alphabet: Alphabet
    max_words: int
    max_len: int

    def __post_init__(self):
        if self.max_words < 1 or self.max_len < 1:
            raise ValidationError("max_words et max_len doivent être strictement positifs")

    def contains_language(self, L: Language) -> bool:
        words = finite_words(L)
        return words is not None and 0 < len(words) <= self.max_words \
            and all(len(w) <= self.max_len for w in words)

    def size(self) -> int:
        n_words = sum(self.alphabet.size ** j for j in range(1, self.max_len + 1))
        return sum(comb(n_words, k) for k in range(1, self.max_words + 1))

    def iter_members(self) -> Iterator[FiniteLanguage]:
        """Membres dans l'ordre shortlex des ensembles (taille, puis mots)"""
        universe = list(self.alphabet.iter_universe(self.max_len))
        for k in range(1, self.max_words + 1):
            for words in itertools.combinations(universe, k):
                yield FiniteLanguage(frozenset(words), self.alphabet)

    def describe(self) -> Dict:
        return {'max_words': self.max_words, 'max_len': self.max_len}


class Family:
    """Famille finie de langages sur un même alphabet"""

    def __init__(self, members: Sequence[Language] = (), schema: Optional[FamilySchema] = None):
        self.extras = tuple(members)
        self.schema = schema
        if not self.extras and schema is None:
            raise ValidationError("Une famille contient au moins un langage")
        alphabets = {L.alphabet for L in self.extras}
        if schema is not None:
            alphabets.add(schema.alphabet)
        if len(alphabets) != 1:
            raise DomainError("Les membres d'une famille doivent partager un alphabet")
        self.alphabet = alphabets.pop()
        self._expanded: Optional[Tuple[Language, ...]] = None

    @classmethod
    def from_members(cls, members: Sequence[Language]) -> 'Family':
        return cls(members)

    @classmethod
    def with_schema(cls, alphabet: Alphabet, max_words: int, max_len: int,
                    extras: Sequence[Language] = ()) -> 'Family':
        return cls(extras, FamilySchema(alphabet, max_words, max_len))

    def expand(self) -> Tuple[Language, ...]:
        """Membres du schéma (ordre shortlex des ensembles) puis extras"""
        if self._expanded is None:
            members: List[Language] = []
            if self.schema is not None:
                if self.schema.size() > MAX_EXPANSION:
                    raise DomainError(f"Schéma trop grand pour être développé "
                                      f"({self.schema.size()} > {MAX_EXPANSION} langages)")
                members.extend(self.schema.iter_members())
            members.extend(self.extras)
            self._expanded = tuple(members)
        return self._expanded

    def contains_member(self, L: Language) -> bool:
        if self.schema is not None and self.schema.contains_language(L):
            return True
        return any(L.alphabet == G.alphabet and equals(L, G) for G in self.extras)

    def describe(self) -> Dict:
        description: Dict = {}
        if self.schema is not None:
            description['schema'] = self.schema.describe()
            description['extras'] = [L.describe() for L in self.extras]
        else:
            description['members'] = [L.describe() for L in self.extras]
        return description

    def __len__(self) -> int:
        return len(self.expand())


@dataclass
class TelltaleVerdict:
    index: int
    member: Language
    status: str
    witness: Optional[FiniteLanguage] = None
    blocking: List[Tuple[str, str]] = field(default_factory=list)
    candidates_checked: int = 0
    reverified: Optional[bool] = None

    def line(self) -> str:
        head = f"MEMBER {self.index} {self.status} {self.member.label()}"
        if self.status == WITNESS:
            flag = ' UNCONFIRMED' if self.reverified is False else ''
            return f"{head} D={self.witness.label()}{flag}"
        blocked = '; '.join(f"{d} blocked by {b}" for d, b in self.blocking)
        return f"{head} candidates={self.candidates_checked} {blocked}".rstrip()


@dataclass
class TelltaleReport:
    family: Family
    verdicts: List[TelltaleVerdict]
    verdict: str
    max_subset_size: int
    max_word_len: int
    elapsed: float = 0.0

    def lines(self) -> List[str]:
        return [v.line() for v in self.verdicts] + [f"FAMILY {self.verdict}"]


def _search_bounds(family: Family, max_subset_size: int, max_word_len: int) -> Tuple[int, int]:
    # le schéma tient lieu de la classe des langages finis: ses plafonds bornent la recherche
    if family.schema is not None:
        return min(max_subset_size, family.schema.max_words), min(max_word_len, family.schema.max_len)
    return max_subset_size, max_word_len


def find_telltale(L: Language, family: Family, max_subset_size: int = DEFAULT_MAX_SUBSET_SIZE,
                  max_word_len: int = DEFAULT_MAX_WORD_LEN, index: int = 0) -> TelltaleVerdict:
    """Premier D ⊆ L (plus petit, puis shortlex) dont aucun sur-ensemble de la famille n'est ⊊ L"""
    if max_subset_size < 1 or max_word_len < 1:
        raise DomainError("Les bornes de recherche doivent être strictement positives")
    if L.alphabet != family.alphabet or not family.contains_member(L):
        raise PreconditionError(f"{L.label()} n'appartient pas à la famille")

    size_bound, len_bound = _search_bounds(family, max_subset_size, max_word_len)
    words = []
    for word in L.iter_shortlex():
        if len(word) > len_bound:
            break
        words.append(word)

    # seuls les extras strictement inclus dans L peuvent bloquer un candidat
    proper_extras = [G for G in family.extras if is_proper_subset(G, L)]
    verdict = TelltaleVerdict(index, L, INCONCLUSIVE)
    schema_blocks_all = family.schema is not None

    for k in range(1, min(size_bound, len(words)) + 1):
        for combo in itertools.combinations(words, k):
            D = FiniteLanguage(frozenset(combo), L.alphabet)
            verdict.candidates_checked += 1
            blocker = next((G for G in proper_extras if is_subset(D, G)), None)
            # D membre du schéma et D ≠ L: D lui-même est un membre ⊊ L qui le contient
            by_schema = family.schema is not None and family.schema.contains_language(D) \
                and not equals(D, L)
            if blocker is None and not by_schema:
                verdict.status, verdict.witness = WITNESS, D
                return verdict
            if not by_schema:
                schema_blocks_all = False
            if len(verdict.blocking) < MAX_BLOCKING_EXAMPLES:
                verdict.blocking.append((D.label(), D.label() if by_schema else blocker.label()))

    # schéma clos par sous-ensembles, L infini: chaque candidat est lui-même un membre ⊊ L
    if schema_blocks_all and L.cardinality() == INFINITE and verdict.candidates_checked > 0:
        verdict.status = REFUTED
    return verdict


def reverify_witness(L: Language, D: FiniteLanguage, family: Family) -> bool:
    """Vérifie D ⊆ L et qu'aucun membre développé contenant D n'est ⊊ L"""
    if not is_subset(D, L):
        return False
    return not any(is_subset(D, G) and is_proper_subset(G, L) for G in family.expand())


class TelltaleChecker(BaseComponent):
    """Recherche des tell-tales membre par membre, en parallèle"""

    def check(self, family: Family, max_subset_size: int = DEFAULT_MAX_SUBSET_SIZE,
              max_word_len: int = DEFAULT_MAX_WORD_LEN) -> TelltaleReport:
        start = time.perf_counter()
        members = family.expand()
        self.logger.info(f"🔍 Recherche de tell-tales pour {len(members)} membres "
                         f"(|D| ≤ {max_subset_size}, |w| ≤ {max_word_len})")

        def task(item):
            index, member = item
            verdict = find_telltale(member, family, max_subset_size, max_word_len, index)
            if verdict.status == WITNESS:
                verdict.reverified = reverify_witness(member, verdict.witness, family)
            return verdict

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            verdicts = list(executor.map(task, enumerate(members, start=1)))

        statuses = {v.status for v in verdicts}
        if REFUTED in statuses:
            overall = NOT_LEARNABLE
        elif INCONCLUSIVE in statuses:
            overall = UNKNOWN
        else:
            overall = LEARNABLE
        for v in verdicts:
            if v.reverified is False:
                self.logger.error(f"❌ Tell-tale non confirmé pour le membre {v.index}: {v.witness.label()}")
                # un témoin non confirmé ne peut pas soutenir LEARNABLE
                if overall == LEARNABLE:
                    overall = UNKNOWN

        report = TelltaleReport(family, verdicts, overall, max_subset_size, max_word_len,
                                time.perf_counter() - start)
        self.logger.info(f"📊 Famille {overall} en {report.elapsed:.2f}s{self._memory_note()}")
        return report


def check_family(family: Family, max_subset_size: int = DEFAULT_MAX_SUBSET_SIZE,
                 max_word_len: int = DEFAULT_MAX_WORD_LEN, max_workers: int = 5,
                 logger=None) -> TelltaleReport:
    return TelltaleChecker(max_workers, logger).check(family, max_subset_size, max_word_len)


# ----------------------------------------------------------------------
# Cohérence avec l'identification par énumération
# ----------------------------------------------------------------------

def _first_distinguishing_word(L: Language, G: Language) -> Optional[str]:
    words_l, words_g = finite_words(L), finite_words(G)
    if words_l is not None and words_g is not None:
        xor = words_l ^ words_g
        return min(xor, key=L.alphabet.shortlex_key) if xor else None
    return next(L.to_dfa().symmetric_difference(G.to_dfa()).iter_shortlex(), None)


def _enumeration_order(L: Language, G: Language) -> int:
    card_l, card_g = L.cardinality(), G.cardinality()
    if card_l != card_g:
        return -1 if card_l < card_g else 1
    word = _first_distinguishing_word(L, G)
    if word is None:
        return 0
    return -1 if L.contains(word) else 1


def order_for_enumeration(members: Sequence[Language]) -> List[Language]:
    """Cardinal croissant (infini en dernier), égalités départagées par le premier mot distinctif"""
    return sorted(members, key=functools.cmp_to_key(_enumeration_order))


@dataclass
class CrossCheckReport:
    horizon: int
    stabilized_at: List[Tuple[str, Optional[int]]]

    @property
    def passed(self) -> bool:
        return all(n is not None for _, n in self.stabilized_at)

    def lines(self) -> List[str]:
        return [f"ENUMERATION {label} stabilized_at={'NONE' if n is None else n} "
                f"(within horizon {self.horizon})" for label, n in self.stabilized_at]


def cross_check(family: Family, report: TelltaleReport, logger=None) -> Optional[CrossCheckReport]:
    """Stabilisation exacte de l'apprenant par énumération sur le texte canonique de chaque membre"""
    if report.verdict != LEARNABLE:
        return None
    members = family.expand()
    finite_sizes = [int(L.cardinality()) for L in members if L.cardinality() != INFINITE]
    witness_sizes = [v.witness.cardinality() for v in report.verdicts if v.witness is not None]
    horizon = 4 * (max(finite_sizes, default=0) + max(witness_sizes, default=0))
    learner = enumeration_learner(order_for_enumeration(members))
    metric = exact_metric()
    results = []
    for member in members:
        trace = run(learner, canonical_text(member), member, metric, horizon, logger)
        results.append((member.label(), check_exact_stabilization(trace)))
    return CrossCheckReport(horizon, results)
