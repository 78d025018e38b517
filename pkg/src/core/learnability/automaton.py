"""
Automates finis déterministes complets

Les automates sont construits par exploration (« crawl ») à partir d'un état
initial et d'une fonction de transition, ce qui donne directement les produits
(intersection, union, différence, différence symétrique). L'analyse des états
vivants et des cycles passe par networkx.
"""

from typing import Callable, Dict, FrozenSet, Hashable, Iterator, List, Optional, Sequence, Tuple

import networkx as nx

from .base import INFINITE, ValidationError


class DFA:
    """Automate fini déterministe complet sur un alphabet ordonné"""

    __slots__ = ('symbols', 'start', 'accepting', 'transitions', '_index', '_graph', '_live')

    def __init__(self, symbols: Sequence[str], start: int, accepting, transitions):
        self.symbols: Tuple[str, ...] = tuple(symbols)
        self.start = int(start)
        self.accepting: FrozenSet[int] = frozenset(accepting)
        self.transitions: Tuple[Tuple[int, ...], ...] = tuple(tuple(row) for row in transitions)
        self._index = {symbol: i for i, symbol in enumerate(self.symbols)}
        self._graph = None
        self._live = None

        n_states = len(self.transitions)
        if not 0 <= self.start < n_states:
            raise ValidationError(f"État initial {self.start} hors de [0, {n_states})")
        if any(not 0 <= q < n_states for q in self.accepting):
            raise ValidationError("États acceptants hors de l'automate")
        for q, row in enumerate(self.transitions):
            # automate complet: une transition par symbole
            if len(row) != len(self.symbols):
                raise ValidationError(f"Transitions incomplètes pour l'état {q}")
            if any(not 0 <= r < n_states for r in row):
                raise ValidationError(f"Transition vers un état inexistant depuis {q}")

    @property
    def n_states(self) -> int:
        return len(self.transitions)

    def step(self, state: int, symbol: str) -> int:
        return self.transitions[state][self._index[symbol]]

    def accepts(self, word: str) -> bool:
        state = self.start
        for symbol in word:
            state = self.transitions[state][self._index[symbol]]
        return state in self.accepting

    def accepts_empty_word(self) -> bool:
        return self.start in self.accepting

    # ------------------------------------------------------------------
    # Analyse de graphe
    # ------------------------------------------------------------------

    def graph(self) -> nx.DiGraph:
        """Graphe des transitions; l'attribut 'weight' compte les symboles par arc"""
        if self._graph is None:
            graph = nx.DiGraph()
            graph.add_nodes_from(range(self.n_states))
            for q, row in enumerate(self.transitions):
                for r in row:
                    if graph.has_edge(q, r):
                        graph[q][r]['weight'] += 1
                    else:
                        graph.add_edge(q, r, weight=1)
            self._graph = graph
        return self._graph

    def live_states(self) -> FrozenSet[int]:
        """États accessibles depuis l'état initial et co-accessibles vers un état acceptant"""
        if self._live is None:
            graph = self.graph()
            reachable = nx.descendants(graph, self.start) | {self.start}
            coreachable = set(self.accepting)
            for q in self.accepting:
                coreachable |= nx.ancestors(graph, q)
            self._live = frozenset(reachable & coreachable)
        return self._live

    def is_empty(self) -> bool:
        """Vrai si aucun mot non vide n'est accepté"""
        live = self.live_states()
        if not live:
            return True
        if live == {self.start} and not self.graph().has_edge(self.start, self.start):
            # seul le mot vide pourrait être accepté
            return True
        return False

    def is_infinite(self) -> bool:
        live = self.live_states()
        if not live:
            return False
        return not nx.is_directed_acyclic_graph(self.graph().subgraph(live))

    def count_words(self):
        """Nombre de mots non vides acceptés, ou INFINITE"""
        if self.is_infinite():
            return INFINITE
        live = self.live_states()
        if not live:
            return 0
        subgraph = self.graph().subgraph(live)
        paths: Dict[int, int] = {q: 0 for q in live}
        paths[self.start] = 1
        for q in nx.topological_sort(subgraph):
            for r in subgraph.successors(q):
                paths[r] += paths[q] * subgraph[q][r]['weight']
        total = sum(paths[q] for q in self.accepting if q in live)
        if self.accepts_empty_word():
            total -= 1
        return total

    def iter_shortlex(self, max_len: Optional[int] = None) -> Iterator[str]:
        """Énumère les mots acceptés dans l'ordre shortlex (longueur puis ordre de l'alphabet)"""
        live = self.live_states()
        if self.start not in live:
            return
        frontier: List[Tuple[str, int]] = [('', self.start)]
        length = 0
        while frontier and (max_len is None or length < max_len):
            length += 1
            next_frontier: List[Tuple[str, int]] = []
            for prefix, state in frontier:
                row = self.transitions[state]
                for i, symbol in enumerate(self.symbols):
                    target = row[i]
                    if target in live:
                        next_frontier.append((prefix + symbol, target))
            for word, state in next_frontier:
                if state in self.accepting:
                    yield word
            frontier = next_frontier

    # ------------------------------------------------------------------
    # Constructions
    # ------------------------------------------------------------------

    def complement(self) -> 'DFA':
        return DFA(self.symbols, self.start,
                   set(range(self.n_states)) - self.accepting, self.transitions)

    def product(self, other: 'DFA', combine: Callable[[bool, bool], bool]) -> 'DFA':
        """Produit synchrone; combine décide l'acceptation à partir des deux composantes"""
        if other.symbols != self.symbols:
            raise ValidationError(f"Alphabets incompatibles: {self.symbols} / {other.symbols}")

        def follow(state, i):
            return (self.transitions[state[0]][i], other.transitions[state[1]][i])

        def final(state):
            return combine(state[0] in self.accepting, state[1] in other.accepting)

        return crawl(self.symbols, (self.start, other.start), final, follow)

    def intersection(self, other: 'DFA') -> 'DFA':
        return self.product(other, lambda x, y: x and y)

    def union(self, other: 'DFA') -> 'DFA':
        return self.product(other, lambda x, y: x or y)

    def difference(self, other: 'DFA') -> 'DFA':
        return self.product(other, lambda x, y: x and not y)

    def symmetric_difference(self, other: 'DFA') -> 'DFA':
        return self.product(other, lambda x, y: x != y)

    def __repr__(self):
        return f"DFA(states={self.n_states}, accepting={sorted(self.accepting)}, symbols={''.join(self.symbols)!r})"


def crawl(symbols: Sequence[str], initial: Hashable,
          final: Callable[[Hashable], bool],
          follow: Callable[[Hashable, int], Hashable]) -> DFA:
    """Explore en largeur les états atteignables et numérote-les dans l'ordre de découverte"""
    states: List[Hashable] = [initial]
    numbering: Dict[Hashable, int] = {initial: 0}
    accepting = set()
    transitions: List[List[int]] = []

    i = 0
    while i < len(states):
        state = states[i]
        if final(state):
            accepting.add(i)
        row = []
        for s in range(len(symbols)):
            nxt = follow(state, s)
            j = numbering.get(nxt)
            if j is None:
                j = len(states)
                numbering[nxt] = j
                states.append(nxt)
            row.append(j)
        transitions.append(row)
        i += 1

    return DFA(symbols, 0, accepting, transitions)


def dfa_from_words(symbols: Sequence[str], words) -> DFA:
    """Automate-arbre (trie) reconnaissant exactement un ensemble fini de mots"""
    words = frozenset(words)
    prefixes = {w[:k] for w in words for k in range(len(w) + 1)}
    dead = None

    def follow(state, i):
        if state is dead:
            return dead
        candidate = state + symbols[i]
        return candidate if candidate in prefixes else dead

    return crawl(symbols, '', lambda state: state is not dead and state in words, follow)
