"""
Mots, alphabets et langages décidables (ensembles finis et langages réguliers)

Un mot est une chaîne non vide de symboles de l'alphabet. L'ordre canonique est
l'ordre shortlex: longueur d'abord, puis ordre des symboles fixé par l'alphabet.
"""

import itertools
import threading
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Tuple

from .automaton import DFA, dfa_from_words
from .base import INFINITE, DomainError, ValidationError
from .pattern import compile_pattern


@dataclass(frozen=True)
class Alphabet:
    """Alphabet fini ordonné de symboles d'un caractère"""

    symbols: str

    def __post_init__(self):
        if not isinstance(self.symbols, str) or not self.symbols:
            raise ValidationError("L'alphabet doit contenir au moins un symbole")
        if len(set(self.symbols)) != len(self.symbols):
            raise ValidationError(f"Symboles dupliqués dans l'alphabet {self.symbols!r}")
        object.__setattr__(self, '_order', {s: i for i, s in enumerate(self.symbols)})

    @property
    def size(self) -> int:
        return len(self.symbols)

    def check_word(self, word: str) -> str:
        """Valide un mot (non vide, symboles de l'alphabet) et le retourne"""
        if not isinstance(word, str) or not word:
            raise DomainError("Le mot vide est exclu de l'univers")
        for symbol in word:
            if symbol not in self._order:
                raise DomainError(f"Symbole {symbol!r} du mot {word!r} hors de l'alphabet {self.symbols!r}")
        return word

    def shortlex_key(self, word: str) -> Tuple[int, Tuple[int, ...]]:
        return len(word), tuple(self._order[s] for s in word)

    def sort_shortlex(self, words: Iterable[str]) -> List[str]:
        return sorted(words, key=self.shortlex_key)

    def rank(self, word: str) -> int:
        """Rang shortlex (à partir de 1) du mot dans l'univers de tous les mots non vides"""
        k = self.size
        n = len(word)
        shorter = n - 1 if k == 1 else (k ** n - k) // (k - 1)
        offset = 0
        for symbol in word:
            offset = offset * k + self._order[symbol]
        return shorter + offset + 1

    def word_at_rank(self, rank: int) -> str:
        if rank < 1:
            raise DomainError(f"Rang invalide: {rank}")
        k = self.size
        n = 1
        remaining = rank - 1
        while remaining >= k ** n:
            remaining -= k ** n
            n += 1
        digits = []
        for _ in range(n):
            remaining, digit = divmod(remaining, k)
            digits.append(self.symbols[digit])
        return ''.join(reversed(digits))

    def iter_universe(self, max_len: Optional[int] = None) -> Iterator[str]:
        """Tous les mots non vides dans l'ordre shortlex"""
        for n in itertools.count(1):
            if max_len is not None and n > max_len:
                return
            for letters in itertools.product(self.symbols, repeat=n):
                yield ''.join(letters)


class Language:
    """Langage décidable sur un alphabet fixé (classe abstraite)"""

    alphabet: Alphabet
    kind = 'language'

    def contains(self, word: str) -> bool:
        raise NotImplementedError

    def to_dfa(self) -> DFA:
        raise NotImplementedError

    def iter_shortlex(self) -> Iterator[str]:
        raise NotImplementedError

    def cardinality(self):
        raise NotImplementedError

    def describe(self) -> Dict:
        raise NotImplementedError

    @property
    def is_finite(self) -> bool:
        return self.cardinality() != INFINITE

    def first_words(self, count: int) -> Tuple[str, ...]:
        """Les count premiers mots shortlex (moins si le langage est plus petit)"""
        return tuple(itertools.islice(self.iter_shortlex(), count))

    def nth_word(self, index: int) -> str:
        """Mot numéro index (à partir de 1) dans l'ordre shortlex"""
        words = self.first_words(index)
        if len(words) < index:
            raise DomainError(f"Le langage a moins de {index} mots")
        return words[-1]

    def label(self) -> str:
        raise NotImplementedError


@dataclass(frozen=True)
class FiniteLanguage(Language):
    """Langage fini donné par un ensemble explicite de mots"""

    words: FrozenSet[str]
    alphabet: Alphabet
    kind = 'finite'

    def __post_init__(self):
        words = frozenset(self.words)
        for word in words:
            self.alphabet.check_word(word)
        object.__setattr__(self, 'words', words)

    @classmethod
    def of(cls, alphabet: Alphabet, words: Iterable[str]) -> 'FiniteLanguage':
        return cls(frozenset(words), alphabet)

    def contains(self, word: str) -> bool:
        return word in self.words

    def to_dfa(self) -> DFA:
        return dfa_from_words(tuple(self.alphabet.symbols), self.words)

    def _shortlex_tuple(self) -> Tuple[str, ...]:
        # tri paresseux, mémorisé hors des champs du dataclass
        cached = self.__dict__.get('_sorted')
        if cached is None:
            cached = tuple(self.alphabet.sort_shortlex(self.words))
            object.__setattr__(self, '_sorted', cached)
        return cached

    def sorted_words(self) -> List[str]:
        return list(self._shortlex_tuple())

    def nth_word(self, index: int) -> str:
        words = self._shortlex_tuple()
        if not 1 <= index <= len(words):
            raise DomainError(f"Le langage a moins de {index} mots")
        return words[index - 1]

    def first_words(self, count: int) -> Tuple[str, ...]:
        return self._shortlex_tuple()[:count]

    def iter_shortlex(self) -> Iterator[str]:
        return iter(self._shortlex_tuple())

    def cardinality(self):
        return len(self.words)

    def describe(self) -> Dict:
        return {'kind': 'finite', 'words': self.sorted_words()}

    def label(self) -> str:
        return '{' + ','.join(self.sorted_words()) + '}'

    def __repr__(self):
        return f"FiniteLanguage({self.label()})"


@dataclass(frozen=True, eq=False)
class RegularLanguage(Language):
    """Langage régulier donné par un automate déterministe complet"""

    dfa: DFA
    alphabet: Alphabet
    pattern: Optional[str] = None
    kind = 'regular'
    _cache: Dict = field(default_factory=dict, init=False, repr=False, compare=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, init=False, repr=False, compare=False)

    def __post_init__(self):
        if tuple(self.dfa.symbols) != tuple(self.alphabet.symbols):
            raise ValidationError("L'automate et l'alphabet ne coïncident pas")
        if self.dfa.accepts_empty_word():
            raise ValidationError("Le langage ne doit pas contenir le mot vide")

    @classmethod
    def from_pattern(cls, alphabet: Alphabet, pattern: str) -> 'RegularLanguage':
        return cls(compile_pattern(pattern, alphabet.symbols), alphabet, pattern)

    def contains(self, word: str) -> bool:
        members = self._cache.get('members')
        if members is not None and word in members:
            return True
        return self.dfa.accepts(word)

    def to_dfa(self) -> DFA:
        return self.dfa

    def cardinality(self):
        with self._lock:
            if 'card' not in self._cache:
                self._cache['card'] = self.dfa.count_words()
            return self._cache['card']

    def _extend(self, count: int) -> List[str]:
        """Complète le cache shortlex jusqu'à count mots (ou épuisement)"""
        with self._lock:
            cached: List[str] = self._cache.setdefault('words', [])
            members = self._cache.setdefault('members', set())
            if len(cached) < count and not self._cache.get('exhausted'):
                iterator = self._cache.get('iterator')
                if iterator is None:
                    iterator = self.dfa.iter_shortlex()
                    self._cache['iterator'] = iterator
                for word in iterator:
                    cached.append(word)
                    members.add(word)
                    if len(cached) >= count:
                        break
                else:
                    self._cache['exhausted'] = True
            return cached

    def first_words(self, count: int) -> Tuple[str, ...]:
        return tuple(self._extend(count)[:count])

    def nth_word(self, index: int) -> str:
        cached = self._extend(index)
        if len(cached) < index:
            raise DomainError(f"Le langage a moins de {index} mots")
        return cached[index - 1]

    def iter_shortlex(self) -> Iterator[str]:
        for index in itertools.count(1):
            cached = self._extend(index)
            if len(cached) < index:
                return
            yield cached[index - 1]

    def describe(self) -> Dict:
        if self.pattern is not None:
            return {'kind': 'pattern', 'pattern': self.pattern}
        return {'kind': 'dfa', 'states': self.dfa.n_states}

    def label(self) -> str:
        return self.pattern if self.pattern is not None else repr(self.dfa)

    def __repr__(self):
        return f"RegularLanguage({self.label()!r})"


def _same_alphabet(L: Language, G: Language):
    if L.alphabet != G.alphabet:
        raise DomainError(f"Alphabets différents: {L.alphabet.symbols!r} / {G.alphabet.symbols!r}")


def finite(alphabet: Alphabet, *words: str) -> FiniteLanguage:
    return FiniteLanguage.of(alphabet, words)


def regular(alphabet: Alphabet, pattern: str) -> RegularLanguage:
    return RegularLanguage.from_pattern(alphabet, pattern)


def language_from_description(alphabet: Alphabet, description) -> Language:
    """Construit un langage depuis sa description de configuration"""
    if isinstance(description, str):
        return regular(alphabet, description)
    if not isinstance(description, dict):
        raise ValidationError(f"Description de langage invalide: {description!r}")
    kind = description.get('kind')
    if kind == 'finite':
        words = description.get('words')
        if not isinstance(words, list) or not all(isinstance(w, str) for w in words):
            raise ValidationError("'words' doit être une liste de chaînes")
        return FiniteLanguage.of(alphabet, words)
    if kind == 'pattern':
        pattern = description.get('pattern')
        if not isinstance(pattern, str):
            raise ValidationError("'pattern' doit être une chaîne")
        return regular(alphabet, pattern)
    raise ValidationError(f"Type de langage inconnu: {kind!r}")


# ----------------------------------------------------------------------
# Opérations
# ----------------------------------------------------------------------

def membership(L: Language, w: str) -> bool:
    L.alphabet.check_word(w)
    return L.contains(w)


def enumerate_words(L: Language, count: int, max_len: int) -> List[str]:
    """Les premiers min(count, |{w ∈ L : |w| ≤ max_len}|) mots de L dans l'ordre shortlex"""
    if count < 1 or max_len < 1:
        raise DomainError("count et max_len doivent être strictement positifs")
    result = []
    for word in L.iter_shortlex():
        if len(word) > max_len or len(result) >= count:
            break
        result.append(word)
    return result


def cardinality(L: Language):
    return L.cardinality()


def finite_words(L: Language) -> Optional[FrozenSet[str]]:
    """Ensemble des mots si L est fini, None sinon"""
    if isinstance(L, FiniteLanguage):
        return L.words
    card = L.cardinality()
    if card == INFINITE:
        return None
    return frozenset(L.first_words(int(card)))


def equals(L: Language, G: Language) -> bool:
    _same_alphabet(L, G)
    if L is G:
        return True
    if isinstance(L, FiniteLanguage) and isinstance(G, FiniteLanguage):
        return L.words == G.words
    if isinstance(L, FiniteLanguage) or isinstance(G, FiniteLanguage):
        finite_side, other = (L, G) if isinstance(L, FiniteLanguage) else (G, L)
        words = finite_words(other)
        return words is not None and words == finite_side.words
    return L.to_dfa().symmetric_difference(G.to_dfa()).is_empty()


def is_subset(L: Language, G: Language) -> bool:
    _same_alphabet(L, G)
    if isinstance(L, FiniteLanguage):
        return all(G.contains(w) for w in L.words)
    if isinstance(G, FiniteLanguage):
        words = finite_words(L)
        return words is not None and words <= G.words
    return L.to_dfa().difference(G.to_dfa()).is_empty()


def is_proper_subset(L: Language, G: Language) -> bool:
    return is_subset(L, G) and not equals(L, G)


def intersection_cardinality(L: Language, G: Language):
    _same_alphabet(L, G)
    if isinstance(L, FiniteLanguage):
        return sum(1 for w in L.words if G.contains(w))
    if isinstance(G, FiniteLanguage):
        return sum(1 for w in G.words if L.contains(w))
    return L.to_dfa().intersection(G.to_dfa()).count_words()


def union(L: Language, G: Language) -> Language:
    _same_alphabet(L, G)
    if isinstance(L, FiniteLanguage) and isinstance(G, FiniteLanguage):
        return FiniteLanguage(L.words | G.words, L.alphabet)
    return RegularLanguage(L.to_dfa().union(G.to_dfa()), L.alphabet)
