"""
Jeux de données finis et textes (présentations infinies d'un langage)
"""

from dataclasses import dataclass
from typing import Callable, Dict, Iterable, Iterator, Optional, Tuple

from .base import INFINITE, DomainError, PreconditionError, ValidationError
from .languages import Alphabet, FiniteLanguage, Language, is_subset
from .random_source import describe_rng, uniform_index

TEXT_KINDS = ('canonical', 'seeded-random', 'locking-prefix', 'adversarial-replay')


@dataclass(frozen=True)
class DataSet:
    """Suite finie non vide de mots (doublons autorisés)"""

    items: Tuple[str, ...]
    alphabet: Alphabet

    def __post_init__(self):
        items = tuple(self.items)
        if not items:
            raise ValidationError("Un jeu de données contient au moins un mot")
        for word in items:
            self.alphabet.check_word(word)
        object.__setattr__(self, 'items', items)

    @classmethod
    def of(cls, alphabet: Alphabet, words: Iterable[str]) -> 'DataSet':
        return cls(tuple(words), alphabet)

    @property
    def length(self) -> int:
        return len(self.items)

    def __len__(self) -> int:
        return len(self.items)

    def __iter__(self) -> Iterator[str]:
        return iter(self.items)

    def __getitem__(self, index):
        return self.items[index]

    def range(self) -> FiniteLanguage:
        return FiniteLanguage(frozenset(self.items), self.alphabet)

    def concat(self, other: 'DataSet') -> 'DataSet':
        if other.alphabet != self.alphabet:
            raise DomainError("Concaténation de jeux de données sur des alphabets différents")
        return DataSet(self.items + other.items, self.alphabet)

    __add__ = concat

    def prefix(self, n: int) -> 'DataSet':
        return DataSet(self.items[:n], self.alphabet)

    def label(self) -> str:
        return '(' + ','.join(self.items) + ')'

    def __repr__(self):
        return f"DataSet{self.label()}"


def data_range(s: DataSet) -> FiniteLanguage:
    return s.range()


def concat(r: DataSet, s: DataSet) -> DataSet:
    return r.concat(s)


class Text:
    """Texte: suite surjective t(1), t(2), ... de mots du langage source"""

    def __init__(self, source: Language, kind: str,
                 generator: Callable[[int], str],
                 fairness: Callable[[int], int],
                 parameters: Optional[Dict] = None):
        if kind not in TEXT_KINDS:
            raise ValidationError(f"Type de texte inconnu: {kind!r}")
        self.source = source
        self.kind = kind
        self._generator = generator
        self._fairness = fairness
        self.parameters = dict(parameters or {})

    @property
    def alphabet(self) -> Alphabet:
        return self.source.alphabet

    def word(self, k: int) -> str:
        """t(k), indice à partir de 1"""
        if k < 1:
            raise DomainError(f"Indice de texte invalide: {k}")
        return self._generator(k)

    __call__ = word

    def fairness_bound(self, i: int) -> int:
        """Indice au plus tard auquel le i-ème mot shortlex de la source apparaît"""
        return self._fairness(i)

    def prefix(self, k: int) -> DataSet:
        """t_k = (t(1), ..., t(k))"""
        return DataSet(tuple(self.word(j) for j in range(1, k + 1)), self.alphabet)

    def __iter__(self) -> Iterator[str]:
        k = 1
        while True:
            yield self.word(k)
            k += 1

    def describe(self) -> Dict:
        description = {'kind': self.kind}
        description.update(self.parameters)
        return description

    def __repr__(self):
        return f"Text(kind={self.kind!r}, source={self.source.label()!r})"


def _canonical_generator(L: Language) -> Callable[[int], str]:
    card = L.cardinality()
    if card == 0:
        raise DomainError("Aucun texte n'existe pour le langage vide")
    if card == INFINITE:
        return L.nth_word
    n = int(card)
    # répétition cyclique: la suite reste totale et surjective
    return lambda k: L.nth_word((k - 1) % n + 1)


def canonical_text(L: Language) -> Text:
    generator = _canonical_generator(L)
    return Text(L, 'canonical', generator, lambda i: i)


def random_fair_text(L: Language, seed: int) -> Text:
    """Indices pairs 2i: i-ème mot canonique; indices impairs: mot tiré parmi les rangs ≤ i"""
    canonical = _canonical_generator(L)
    seed = int(seed)

    def generator(k: int) -> str:
        if k % 2 == 0:
            return canonical(k // 2)
        bound = (k + 1) // 2
        return canonical(1 + uniform_index(seed, k, bound))

    return Text(L, 'seeded-random', generator, lambda i: 2 * i,
                {'seed': seed, 'rng': describe_rng()['name']})


def _prefixed_text(l: DataSet, L: Language, kind: str) -> Text:
    if l.alphabet != L.alphabet:
        raise DomainError("Préfixe et langage sur des alphabets différents")
    if not is_subset(l.range(), L):
        raise PreconditionError(f"range{l.label()} n'est pas inclus dans {L.label()}")
    canonical = _canonical_generator(L)
    prefix = l.items
    m = len(prefix)

    def generator(k: int) -> str:
        if k <= m:
            return prefix[k - 1]
        return canonical(k - m)

    return Text(L, kind, generator, lambda i: m + 2 * i, {'prefix': list(prefix)})


def locking_prefix_text(l: DataSet, L: Language) -> Text:
    """t_k = l pour k ≤ length(l), puis énumération canonique de L"""
    return _prefixed_text(l, L, 'locking-prefix')


def replay_text(produced: DataSet, L: Language) -> Text:
    """Rejoue un jeu produit puis complète surjectivement par l'énumération canonique de L"""
    return _prefixed_text(produced, L, 'adversarial-replay')
