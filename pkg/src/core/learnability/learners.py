"""
Algorithmes d'apprentissage: fonctions déterministes des jeux de données vers les langages

Un apprenant est une fonction pure de tout le jeu de données courant. Le
chemin incrémental (stepper) est une optimisation observationnellement
équivalente à la réinvocation sur des préfixes croissants.
"""

from collections import Counter
from typing import Callable, Dict, List, Optional, Sequence

from .base import DomainError, ValidationError
from .languages import Alphabet, FiniteLanguage, Language, is_subset
from .texts import DataSet


class Stepper:
    """Chemin incrémental par défaut: réinvoque l'apprenant sur le préfixe courant"""

    def __init__(self, learner: 'Learner', alphabet: Alphabet):
        self.learner = learner
        self.alphabet = alphabet
        self.items: List[str] = []

    def push(self, word: str) -> Language:
        self.items.append(word)
        return self.learner.hypothesize(DataSet(tuple(self.items), self.alphabet))


class Learner:
    """Apprenant: nom, fonction hypothesize et paramètres de construction"""

    def __init__(self, name: str, hypothesize: Callable[[DataSet], Language],
                 parameters: Optional[Dict] = None,
                 stepper_factory: Optional[Callable[[Alphabet], Stepper]] = None):
        self.name = name
        self._hypothesize = hypothesize
        self.parameters = dict(parameters or {})
        self._stepper_factory = stepper_factory

    def hypothesize(self, s: DataSet) -> Language:
        return self._hypothesize(s)

    __call__ = hypothesize

    def stepper(self, alphabet: Alphabet) -> Stepper:
        if self._stepper_factory is not None:
            return self._stepper_factory(alphabet)
        return Stepper(self, alphabet)

    def describe(self) -> Dict:
        description = {'kind': self.name}
        description.update(self.parameters)
        return description

    def __repr__(self):
        return f"Learner({self.name!r})"


# ----------------------------------------------------------------------
# Apprenant par l'image (range)
# ----------------------------------------------------------------------

class _RangeStepper(Stepper):

    def __init__(self, learner: 'Learner', alphabet: Alphabet):
        super().__init__(learner, alphabet)
        self._seen = set()
        self._current: Optional[FiniteLanguage] = None

    def push(self, word: str) -> Language:
        self.alphabet.check_word(word)
        if word not in self._seen or self._current is None:
            self._seen.add(word)
            self._current = FiniteLanguage(frozenset(self._seen), self.alphabet)
        return self._current


def range_learner() -> Learner:
    """A(s) = range(s)"""
    learner = Learner('range', lambda s: s.range())
    learner._stepper_factory = lambda alphabet: _RangeStepper(learner, alphabet)
    return learner


# ----------------------------------------------------------------------
# Identification par énumération
# ----------------------------------------------------------------------

class _EnumerationStepper(Stepper):

    def __init__(self, learner: 'Learner', alphabet: Alphabet, family: Sequence[Language]):
        super().__init__(learner, alphabet)
        self.family = family
        self._seen = set()
        self._position = 0
        self._current: Optional[Language] = None

    def push(self, word: str) -> Language:
        self.alphabet.check_word(word)
        if word in self._seen and self._current is not None:
            return self._current
        self._seen.add(word)
        # l'image ne fait que croître: un membre incohérent le reste
        while self._position < len(self.family) and not self.family[self._position].contains(word) \
                or self._position < len(self.family) and not all(
                    self.family[self._position].contains(w) for w in self._seen):
            self._position += 1
        if self._position < len(self.family):
            self._current = self.family[self._position]
        else:
            self._current = FiniteLanguage(frozenset(self._seen), self.alphabet)
        return self._current


def enumeration_learner(family: Sequence[Language]) -> Learner:
    """A(s) = premier langage de la famille contenant range(s), sinon range(s)"""
    family = tuple(family)
    if not family:
        raise ValidationError("La famille de l'apprenant par énumération est vide")
    alphabet = family[0].alphabet
    if any(L.alphabet != alphabet for L in family):
        raise DomainError("Les langages de la famille doivent partager un alphabet")

    def hypothesize(s: DataSet) -> Language:
        data = s.range()
        for L in family:
            if is_subset(data, L):
                return L
        return data

    learner = Learner('enumeration', hypothesize,
                      {'family': [L.describe() for L in family]})
    learner._stepper_factory = lambda a: _EnumerationStepper(learner, a, family)
    return learner


# ----------------------------------------------------------------------
# Apprenant mémorisant (vaincu par l'adversaire de Gold)
# ----------------------------------------------------------------------

def memorizing_learner(L_inf: Language, threshold: int) -> Learner:
    """
    A(s) = L_inf si range(s) ⊆ L_inf et si les threshold derniers éléments de s
    contiennent au moins threshold mots distincts n'apparaissant qu'une fois dans s;
    sinon A(s) = range(s).
    """
    if threshold < 1:
        raise DomainError("Le seuil doit être strictement positif")
    if L_inf.is_finite:
        raise DomainError(f"L'apprenant mémorisant exige un langage infini, pas {L_inf.label()}")

    def hypothesize(s: DataSet) -> Language:
        data = s.range()
        if not is_subset(data, L_inf):
            return data
        counts = Counter(s.items)
        window = s.items[-threshold:]
        fresh = {w for w in window if counts[w] == 1}
        return L_inf if len(fresh) >= threshold else data

    return Learner('memorizing', hypothesize,
                   {'L_inf': L_inf.describe(), 'threshold': threshold})
