"""
Générateur pseudo-aléatoire portable SplitMix64

Chaque valeur est une fonction pure de (graine, indice): les textes aléatoires
restent reproductibles d'une implémentation à l'autre et d'un lancement à
l'autre. Les constantes sont recopiées dans l'en-tête des traces CSV.
"""

from typing import Dict

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MULTIPLIER_1 = 0xBF58476D1CE4E5B9
MIX_MULTIPLIER_2 = 0x94D049BB133111EB

RNG_NAME = 'splitmix64'


def splitmix64(state: int) -> int:
    """Une étape SplitMix64: avance l'état de GOLDEN_GAMMA puis mélange"""
    z = (state + GOLDEN_GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * MIX_MULTIPLIER_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MULTIPLIER_2) & MASK64
    return z ^ (z >> 31)


def value_at(seed: int, index: int) -> int:
    """Valeur 64 bits associée à l'indice index du flux de graine seed"""
    return splitmix64((seed + index * GOLDEN_GAMMA) & MASK64)


def uniform_index(seed: int, index: int, bound: int) -> int:
    """
    Entier uniforme dans [0, bound) tiré à l'indice index

    Les valeurs au-delà du plus grand multiple de bound sont rejetées et
    remélangées par splitmix64 jusqu'à tomber dans la zone acceptée.
    """
    if bound < 1:
        raise ValueError("bound doit être strictement positif")
    limit = (MASK64 + 1) - (MASK64 + 1) % bound
    value = value_at(seed, index)
    while value >= limit:
        value = splitmix64(value)
    return value % bound


def describe_rng() -> Dict[str, str]:
    return {
        'name': RNG_NAME,
        'gamma': hex(GOLDEN_GAMMA),
        'mix1': hex(MIX_MULTIPLIER_1),
        'mix2': hex(MIX_MULTIPLIER_2),
        'derivation': 'value(seed, k) = splitmix64(seed + k * gamma mod 2^64)',
        'uniform': 'v mod bound, v <- splitmix64(v) while v >= 2^64 - (2^64 mod bound)',
    }
