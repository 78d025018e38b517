"""
Compilation des motifs restreints vers des automates déterministes complets

Syntaxe: littéraux de l'alphabet, concaténation, alternative '|',
groupement '(...)', étoile '*' et plus '+'. Les espaces sont ignorés.
Compilation: construction de Thompson puis déterminisation par sous-ensembles.
"""

from typing import Dict, FrozenSet, List, Optional, Sequence, Set, Tuple

from .automaton import DFA, crawl
from .base import ValidationError

_OPERATORS = set('|*+()')


class _NFA:
    """NFA avec transitions epsilon (symbole None)"""

    def __init__(self):
        self.edges: List[List[Tuple[Optional[str], int]]] = []

    def new_state(self) -> int:
        self.edges.append([])
        return len(self.edges) - 1

    def add(self, source: int, symbol: Optional[str], target: int):
        self.edges[source].append((symbol, target))

    def closure(self, states) -> FrozenSet[int]:
        stack = list(states)
        seen: Set[int] = set(stack)
        while stack:
            q = stack.pop()
            for symbol, r in self.edges[q]:
                if symbol is None and r not in seen:
                    seen.add(r)
                    stack.append(r)
        return frozenset(seen)


class _Parser:
    """Analyseur descendant récursif produisant des fragments de Thompson"""

    def __init__(self, pattern: str, symbols: Sequence[str]):
        self.text = ''.join(pattern.split())
        self.symbols = set(symbols)
        self.pos = 0
        self.nfa = _NFA()

    def parse(self) -> Tuple[int, int]:
        if not self.text:
            raise ValidationError("Motif vide")
        fragment = self._alternation()
        if self.pos != len(self.text):
            raise ValidationError(f"Caractère inattendu {self.text[self.pos]!r} en position {self.pos}")
        return fragment

    def _peek(self) -> Optional[str]:
        return self.text[self.pos] if self.pos < len(self.text) else None

    def _alternation(self) -> Tuple[int, int]:
        branches = [self._concatenation()]
        while self._peek() == '|':
            self.pos += 1
            branches.append(self._concatenation())
        if len(branches) == 1:
            return branches[0]
        start, accept = self.nfa.new_state(), self.nfa.new_state()
        for b_start, b_accept in branches:
            self.nfa.add(start, None, b_start)
            self.nfa.add(b_accept, None, accept)
        return start, accept

    def _concatenation(self) -> Tuple[int, int]:
        items = []
        while self._peek() is not None and self._peek() not in '|)':
            items.append(self._repetition())
        if not items:
            raise ValidationError(f"Alternative vide en position {self.pos}")
        start, accept = items[0]
        for i_start, i_accept in items[1:]:
            self.nfa.add(accept, None, i_start)
            accept = i_accept
        return start, accept

    def _repetition(self) -> Tuple[int, int]:
        start, accept = self._atom()
        while self._peek() in ('*', '+'):
            operator = self.text[self.pos]
            self.pos += 1
            new_start, new_accept = self.nfa.new_state(), self.nfa.new_state()
            self.nfa.add(new_start, None, start)
            self.nfa.add(accept, None, start)
            self.nfa.add(accept, None, new_accept)
            if operator == '*':
                self.nfa.add(new_start, None, new_accept)
            start, accept = new_start, new_accept
        return start, accept

    def _atom(self) -> Tuple[int, int]:
        char = self._peek()
        if char is None:
            raise ValidationError("Fin de motif inattendue")
        if char == '(':
            self.pos += 1
            fragment = self._alternation()
            if self._peek() != ')':
                raise ValidationError(f"Parenthèse fermante attendue en position {self.pos}")
            self.pos += 1
            return fragment
        if char in _OPERATORS:
            raise ValidationError(f"Opérateur {char!r} inattendu en position {self.pos}")
        if char not in self.symbols:
            raise ValidationError(f"Symbole {char!r} hors de l'alphabet")
        self.pos += 1
        start, accept = self.nfa.new_state(), self.nfa.new_state()
        self.nfa.add(start, char, accept)
        return start, accept


def compile_pattern(pattern: str, symbols: Sequence[str]) -> DFA:
    """Compile un motif restreint en automate déterministe complet"""
    parser = _Parser(pattern, symbols)
    start, accept = parser.parse()
    nfa = parser.nfa
    symbols = tuple(symbols)

    moves: Dict[Tuple[int, str], List[int]] = {}
    for q, edges in enumerate(nfa.edges):
        for symbol, r in edges:
            if symbol is not None:
                moves.setdefault((q, symbol), []).append(r)

    def follow(state: FrozenSet[int], i: int) -> FrozenSet[int]:
        targets = [r for q in state for r in moves.get((q, symbols[i]), ())]
        return nfa.closure(targets)

    return crawl(symbols, nfa.closure([start]), lambda state: accept in state, follow)
