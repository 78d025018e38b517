"""
Catalogue des composants intégrés et construction depuis les descriptions JSON
"""

import json
from typing import Dict, List, Optional

from .angluin import Family, order_for_enumeration
from .base import ValidationError, as_fraction
from .chains import LanguageChain, chain_from_decomposition, chain_from_enumeration, chain_from_text
from .languages import Alphabet, FiniteLanguage, Language, language_from_description
from .learners import Learner, enumeration_learner, memorizing_learner, range_learner
from .metrics import DEFAULT_TRUNCATION_RANK, Metric, counting_metric, exact_metric, \
    symdiff_metric, zero_one_scaled_metric
from .random_source import uniform_index
from .texts import DataSet, Text, canonical_text, locking_prefix_text, random_fair_text, replay_text

LANGUAGE_SCHEMA = '"<pattern>" | {"kind": "pattern", "pattern": str} | {"kind": "finite", "words": [str]}'

BUILTINS: Dict[str, Dict[str, Dict[str, str]]] = {
    'learners': {
        'range': {},
        'enumeration': {'family': '[<language>] | {"schema": {...}, "extras": [<language>]}'},
        'memorizing': {'L_inf': '<language> (infinite)', 'threshold': 'int >= 1'},
    },
    'metrics': {
        'exact': {},
        'scaled-exact': {'gap': 'rational > 0'},
        'counting': {'L_inf': '<language> (infinite)'},
        'symdiff': {'base': 'rational > 1 (default 2)',
                    'truncation_rank': f'int >= 1 (default {DEFAULT_TRUNCATION_RANK})'},
    },
    'texts': {
        'canonical': {},
        'seeded-random': {'seed': 'int (overridable with --seed)'},
        'locking-prefix': {'prefix': '[str]'},
        'adversarial-replay': {'prefix': '[str]'},
    },
    'chains': {
        'enumeration': {'L_inf': '<language> (infinite)'},
        'decomposition': {'parts': '[<language>]', 'L_inf': '<language>',
                          'coverage_length': 'int >= 1 (default 6)'},
        'custom': {'text': '<text>', 'L_inf': '<language>'},
    },
    'languages': {'description': {'format': LANGUAGE_SCHEMA}},
    'experiments': {
        'simulate': {'learner': '<learner>', 'text': '<text>', 'target': '<language>',
                     'metric': '<metric>', 'horizon': 'int >= 1',
                     'epsilons': '[rational > 0] (optional)'},
        'locking-search': {'target': '<language>', 'learner': '<learner>', 'metric': '<metric>',
                           'epsilon': 'rational > 0', 'max_prefix_len': 'int (default 12)',
                           'max_cont_len': 'int (default 3)', 'word_pool_size': 'int (default 6)'},
        'locking-verify': {'candidate': '[str]', 'target': '<language>', 'learner': '<learner>',
                           'metric': '<metric>', 'epsilon': 'rational > 0',
                           'max_cont_len': 'int (default 3)', 'word_pool_size': 'int (default 6)'},
        'telltale-check': {'family': '{"members": [...]} | {"schema": {...}, "extras": [...]}',
                           'max_subset_size': 'int (default 4)', 'max_word_len': 'int (default 6)'},
        'chain-convergence': {'chain': '<chain>', 'metric': '<metric>', 'n_max': 'int >= 1',
                              'ladder': '[rational > 0] (default 1/2 .. 1/64)'},
        'adversary': {'learner': '<learner>', 'L_inf': '<language>', 'horizon': 'int >= 1'},
        'metric-axioms': {'metric': '<metric>', 'sample': '[<language>]',
                          'sample_size': 'int (random finite languages)', 'seed': 'int',
                          'extras': '[<language>]', 'tolerance': 'number (default 1e-9)'},
    },
}


def _require(description: Dict, key: str, context: str):
    if not isinstance(description, dict):
        raise ValidationError(f"{context}: un objet JSON est attendu")
    if key not in description:
        raise ValidationError(f"{context}: champ '{key}' manquant")
    return description[key]


def _kind(description, context: str, known) -> str:
    kind = _require(description, 'kind', context)
    if kind not in known:
        raise ValidationError(f"{context}: type inconnu {kind!r} (attendus: {', '.join(sorted(known))})")
    return kind


def build_language(alphabet: Alphabet, description) -> Language:
    return language_from_description(alphabet, description)


def build_languages(alphabet: Alphabet, descriptions, context: str) -> List[Language]:
    if not isinstance(descriptions, list):
        raise ValidationError(f"{context}: une liste de langages est attendue")
    return [build_language(alphabet, d) for d in descriptions]


def build_family(alphabet: Alphabet, description) -> Family:
    if isinstance(description, list):
        return Family.from_members(build_languages(alphabet, description, 'family'))
    if not isinstance(description, dict):
        raise ValidationError("family: liste de langages ou objet attendu")
    if 'schema' in description:
        schema = description['schema']
        max_words = _require(schema, 'max_words', 'family.schema')
        max_len = _require(schema, 'max_len', 'family.schema')
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in (max_words, max_len)):
            raise ValidationError("family.schema: max_words et max_len doivent être des entiers")
        extras = build_languages(alphabet, description.get('extras', []), 'family.extras')
        return Family.with_schema(alphabet, max_words, max_len, extras)
    members = _require(description, 'members', 'family')
    return Family.from_members(build_languages(alphabet, members, 'family.members'))


def build_metric(alphabet: Alphabet, description, truncation_rank: int = DEFAULT_TRUNCATION_RANK) -> Metric:
    """truncation_rank: rang par défaut de la métrique symdiff (réglage du laboratoire)"""
    kind = _kind(description, 'metric', BUILTINS['metrics'])
    if kind == 'exact':
        return exact_metric()
    if kind == 'scaled-exact':
        return zero_one_scaled_metric(as_fraction(_require(description, 'gap', 'metric')))
    if kind == 'counting':
        return counting_metric(build_language(alphabet, _require(description, 'L_inf', 'metric')))
    rank = description.get('truncation_rank', truncation_rank)
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise ValidationError("metric: 'truncation_rank' doit être un entier")
    return symdiff_metric(as_fraction(description.get('base', 2)), rank)


def build_learner(alphabet: Alphabet, description) -> Learner:
    kind = _kind(description, 'learner', BUILTINS['learners'])
    if kind == 'range':
        return range_learner()
    if kind == 'enumeration':
        family = build_family(alphabet, _require(description, 'family', 'learner'))
        members = family.expand()
        if family.schema is not None:
            members = order_for_enumeration(members)
        return enumeration_learner(members)
    threshold = _require(description, 'threshold', 'learner')
    if not isinstance(threshold, int) or isinstance(threshold, bool):
        raise ValidationError("learner: 'threshold' doit être un entier")
    return memorizing_learner(build_language(alphabet, _require(description, 'L_inf', 'learner')), threshold)


def build_text(L: Language, description, seed: Optional[int] = None) -> Text:
    kind = _kind(description, 'text', BUILTINS['texts'])
    if kind == 'canonical':
        return canonical_text(L)
    if kind == 'seeded-random':
        if seed is None:
            seed = _require(description, 'seed', 'text')
        if not isinstance(seed, int) or isinstance(seed, bool):
            raise ValidationError("text: 'seed' doit être un entier")
        return random_fair_text(L, seed)
    prefix = _require(description, 'prefix', 'text')
    if not isinstance(prefix, list) or not prefix:
        raise ValidationError("text: 'prefix' doit être une liste non vide de mots")
    data = DataSet.of(L.alphabet, prefix)
    if kind == 'locking-prefix':
        return locking_prefix_text(data, L)
    return replay_text(data, L)


def build_chain(alphabet: Alphabet, description, seed: Optional[int] = None) -> LanguageChain:
    kind = _kind(description, 'chain', BUILTINS['chains'])
    L_inf = build_language(alphabet, _require(description, 'L_inf', 'chain'))
    if kind == 'enumeration':
        return chain_from_enumeration(L_inf)
    if kind == 'decomposition':
        parts = build_languages(alphabet, _require(description, 'parts', 'chain'), 'chain.parts')
        return chain_from_decomposition(parts, L_inf, int(description.get('coverage_length', 6)))
    return chain_from_text(build_text(L_inf, _require(description, 'text', 'chain'), seed), L_inf)


def list_builtins() -> Dict:
    """Composants disponibles et schémas de paramètres"""
    return json.loads(json.dumps(BUILTINS))


def render_builtins() -> str:
    """Rendu stable du catalogue (clés triées)"""
    return json.dumps(list_builtins(), indent=2, sort_keys=True, ensure_ascii=False)


def random_finite_languages(alphabet: Alphabet, count: int, seed: int,
                            max_words: int = 4, max_len: int = 3) -> List[FiniteLanguage]:
    """Échantillon déterministe de langages finis non vides (SplitMix64, indices disjoints par langage)"""
    universe = list(alphabet.iter_universe(max_len))
    languages = []
    for j in range(count):
        base = j * (max_words + 1)
        size = 1 + uniform_index(seed, base, min(max_words, len(universe)))
        words = {universe[uniform_index(seed, base + 1 + t, len(universe))] for t in range(size)}
        languages.append(FiniteLanguage(frozenset(words), alphabet))
    return languages
