"""
Configuration d'une expérience: lecture, validation champ par champ et sérialisation

Un fichier JSON décrit une expérience (discriminant "experiment"). Toute erreur
de configuration lève ConfigError, dont le message nomme le champ fautif.
"""

import copy
import json
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from src.core.learnability.base import DomainError, ValidationError, as_fraction
from src.core.learnability.catalog import build_chain, build_family, build_language, \
    build_languages, build_learner, build_metric, build_text, random_finite_languages
from src.core.learnability.languages import Alphabet
from src.core.learnability.metrics import DEFAULT_TRUNCATION_RANK
from src.core.learnability.texts import DataSet

EXPERIMENTS = ('simulate', 'locking-search', 'locking-verify', 'telltale-check',
               'chain-convergence', 'adversary', 'metric-axioms')

RESERVED_KEYS = ('alphabet', 'experiment', 'output_dir', 'seed', 'include_timing', 'description')

# champs obligatoires / optionnels par expérience
FIELDS: Dict[str, Dict[str, tuple]] = {
    'simulate': {'required': ('learner', 'text', 'target', 'metric', 'horizon'),
                 'optional': ('epsilons',)},
    'locking-search': {'required': ('target', 'learner', 'metric', 'epsilon'),
                       'optional': ('max_prefix_len', 'max_cont_len', 'word_pool_size')},
    'locking-verify': {'required': ('candidate', 'target', 'learner', 'metric', 'epsilon'),
                       'optional': ('max_cont_len', 'word_pool_size')},
    'telltale-check': {'required': ('family',),
                       'optional': ('max_subset_size', 'max_word_len', 'cross_check')},
    'chain-convergence': {'required': ('chain', 'metric', 'n_max'),
                          'optional': ('ladder',)},
    'adversary': {'required': ('learner', 'L_inf', 'horizon'), 'optional': ()},
    'metric-axioms': {'required': ('metric',),
                      'optional': ('sample', 'sample_size', 'extras', 'tolerance')},
}

POSITIVE_INTEGERS = ('horizon', 'n_max', 'max_prefix_len', 'max_cont_len', 'word_pool_size',
                     'max_subset_size', 'max_word_len', 'sample_size')
POSITIVE_RATIONALS = ('epsilon', 'tolerance')
RATIONAL_LISTS = ('epsilons', 'ladder')


class ConfigError(ValueError):
    """Configuration invalide; field nomme le champ fautif"""

    def __init__(self, field_name: str, message: str):
        self.field = field_name
        super().__init__(f"{field_name}: {message}")


def _is_int(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


def _positive_rational(name: str, value):
    try:
        number = as_fraction(value)
    except DomainError:
        raise ConfigError(name, f"nombre invalide {value!r}") from None
    if number <= 0:
        raise ConfigError(name, f"doit être strictement positif (reçu {value!r})")
    return number


@dataclass
class ExperimentConfig:
    """Expérience décrite par un fichier JSON"""

    alphabet: str
    experiment: str
    params: Dict[str, Any] = field(default_factory=dict)
    output_dir: Optional[str] = None
    seed: Optional[int] = None
    include_timing: bool = False
    description: Optional[str] = None

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        if not isinstance(data, dict):
            raise ConfigError('<root>', "un objet JSON est attendu")
        for key in ('alphabet', 'experiment'):
            if key not in data:
                raise ConfigError(key, "champ obligatoire manquant")
        params = {k: copy.deepcopy(v) for k, v in data.items() if k not in RESERVED_KEYS}
        config = cls(alphabet=data['alphabet'], experiment=data['experiment'], params=params,
                     output_dir=data.get('output_dir'), seed=data.get('seed'),
                     include_timing=data.get('include_timing', False),
                     description=data.get('description'))
        config.validate()
        return config

    @classmethod
    def load(cls, path: Union[str, Path]) -> 'ExperimentConfig':
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except json.JSONDecodeError as e:
            raise ConfigError('<json>', f"JSON invalide: {e}") from None
        except OSError as e:
            raise ConfigError('<path>', f"lecture impossible: {e}") from None
        return cls.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {'alphabet': self.alphabet, 'experiment': self.experiment}
        data.update(copy.deepcopy(self.params))
        if self.output_dir is not None:
            data['output_dir'] = self.output_dir
        if self.seed is not None:
            data['seed'] = self.seed
        if self.include_timing:
            data['include_timing'] = True
        if self.description is not None:
            data['description'] = self.description
        return data

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False) + '\n'

    def dump(self, path: Union[str, Path]):
        Path(path).write_text(self.dumps(), encoding='utf-8')

    def with_seed(self, seed: Optional[int]) -> 'ExperimentConfig':
        """Copie avec la graine remplacée (--seed)"""
        if seed is None:
            return self
        if not _is_int(seed):
            raise ConfigError('seed', f"entier attendu (reçu {seed!r})")
        return replace(self, seed=seed, params=copy.deepcopy(self.params))

    def get(self, key: str, default=None):
        return self.params.get(key, default)

    @property
    def alphabet_obj(self) -> Alphabet:
        try:
            return Alphabet(self.alphabet)
        except ValidationError as e:
            raise ConfigError('alphabet', str(e)) from None

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------

    def validate(self):
        if not isinstance(self.alphabet, str) or not self.alphabet:
            raise ConfigError('alphabet', "chaîne de symboles non vide attendue")
        alphabet = self.alphabet_obj
        if self.experiment not in EXPERIMENTS:
            raise ConfigError('experiment', f"inconnue {self.experiment!r} (attendues: {', '.join(EXPERIMENTS)})")
        if self.seed is not None and not _is_int(self.seed):
            raise ConfigError('seed', f"entier attendu (reçu {self.seed!r})")
        if not isinstance(self.include_timing, bool):
            raise ConfigError('include_timing', "booléen attendu")
        if self.output_dir is not None and not isinstance(self.output_dir, str):
            raise ConfigError('output_dir', "chemin attendu")

        spec = FIELDS[self.experiment]
        for name in spec['required']:
            if name not in self.params:
                raise ConfigError(name, f"champ obligatoire pour l'expérience {self.experiment}")
        allowed = set(spec['required']) | set(spec['optional'])
        for name in self.params:
            if name not in allowed:
                raise ConfigError(name, f"champ inconnu pour l'expérience {self.experiment}")

        for name in POSITIVE_INTEGERS:
            if name in self.params:
                value = self.params[name]
                if not _is_int(value) or value < 1:
                    raise ConfigError(name, f"entier strictement positif attendu (reçu {value!r})")
        for name in POSITIVE_RATIONALS:
            if name in self.params:
                _positive_rational(name, self.params[name])
        for name in RATIONAL_LISTS:
            if name in self.params:
                values = self.params[name]
                if not isinstance(values, list) or not values:
                    raise ConfigError(name, "liste non vide de nombres attendue")
                for value in values:
                    _positive_rational(name, value)

        if self.experiment == 'metric-axioms':
            if 'sample' not in self.params and 'sample_size' not in self.params:
                raise ConfigError('sample', "'sample' ou 'sample_size' requis")
            if 'sample_size' in self.params and self.seed is None:
                raise ConfigError('seed', "obligatoire avec 'sample_size'")
        if 'cross_check' in self.params and not isinstance(self.params['cross_check'], bool):
            raise ConfigError('cross_check', "booléen attendu")

        self.components(alphabet)

    def components(self, alphabet: Optional[Alphabet] = None,
                   truncation_rank: int = DEFAULT_TRUNCATION_RANK) -> Dict[str, Any]:
        """Construit les objets du domaine; les erreurs de description nomment leur champ"""
        alphabet = alphabet or self.alphabet_obj
        built: Dict[str, Any] = {}

        def build(name: str, builder):
            try:
                built[name] = builder()
            except (ValidationError, DomainError) as e:
                raise ConfigError(name, str(e)) from None

        params = self.params
        for name in ('target', 'L_inf'):
            if name in params:
                build(name, lambda: build_language(alphabet, params[name]))
        if 'metric' in params:
            build('metric', lambda: build_metric(alphabet, params['metric'], truncation_rank))
        if 'learner' in params:
            build('learner', lambda: build_learner(alphabet, params['learner']))
        if 'family' in params:
            build('family', lambda: build_family(alphabet, params['family']))
        if 'chain' in params:
            build('chain', lambda: build_chain(alphabet, params['chain'], self.seed))
        if 'candidate' in params:
            build('candidate', lambda: DataSet.of(alphabet, self._word_list('candidate')))
        if 'sample' in params:
            build('sample', lambda: build_languages(alphabet, params['sample'], 'sample'))
        if 'sample_size' in params:
            build('sample', lambda: built.get('sample', []) + random_finite_languages(
                alphabet, params['sample_size'], self.seed))
        if 'extras' in params:
            build('extras', lambda: build_languages(alphabet, params['extras'], 'extras'))
        if 'text' in params:
            # le texte dépend de la cible (préfixe ⊆ cible vérifié à l'exécution)
            build('text', lambda: build_text(built['target'], params['text'], self.seed))
        return built

    def _word_list(self, name: str):
        words = self.params[name]
        if not isinstance(words, list) or not words or not all(isinstance(w, str) for w in words):
            raise ConfigError(name, "liste non vide de mots attendue")
        return words
