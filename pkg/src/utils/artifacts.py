"""
Écriture des artefacts d'une expérience: rapport texte, traces CSV et configuration recopiée

Les artefacts ne contiennent ni date ni chemin absolu: deux exécutions d'une
même configuration produisent des fichiers identiques octet pour octet.
"""

import csv
import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from src.core.learnability.metrics import DistanceInterval

DEFAULT_FLOAT_DIGITS = 12


def format_number(value, digits: int = DEFAULT_FLOAT_DIGITS) -> str:
    """Rationnels exacts en 'p/q' (entiers en 'n'), flottants à digits chiffres significatifs"""
    if value is None:
        return ''
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, Fraction):
        return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"
    if isinstance(value, int):
        return str(value)
    return format(float(value), f'.{digits}g')


def distance_columns(distance, digits: int = DEFAULT_FLOAT_DIGITS) -> Tuple[str, str]:
    """(distance_lo, distance_hi): valeur exacte répétée, ou bornes flottantes d'un intervalle"""
    if distance is None:
        return '', ''
    if isinstance(distance, DistanceInterval):
        return format(float(distance.lo), f'.{digits}g'), format(float(distance.hi), f'.{digits}g')
    text = format_number(distance, digits)
    return text, text


def format_distance(distance, digits: int = DEFAULT_FLOAT_DIGITS) -> str:
    if distance is None:
        return 'undefined'
    if isinstance(distance, DistanceInterval):
        lo, hi = distance_columns(distance, digits)
        return f"[{lo}, {hi}]"
    return format_number(distance, digits)


def _metadata_value(value: Any) -> str:
    if isinstance(value, str):
        return value
    return json.dumps(value, sort_keys=True, ensure_ascii=False, default=str)


def write_csv(path: Union[str, Path], header: Sequence[str], rows: Iterable[Sequence[Any]],
              metadata: Optional[Dict[str, Any]] = None) -> Path:
    """CSV précédé d'un bloc de métadonnées commentées par '#'"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for key in sorted(metadata or {}):
            f.write(f"# {key}: {_metadata_value(metadata[key])}\n")
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def write_report(path: Union[str, Path], lines: List[str]) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text('\n'.join(lines) + '\n', encoding='utf-8')
    return path


def write_config(path: Union[str, Path], config) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(config.dumps(), encoding='utf-8')
    return path


def read_csv_rows(path: Union[str, Path]) -> List[Dict[str, str]]:
    """Relit un artefact CSV en ignorant le bloc de métadonnées"""
    with open(path, 'r', encoding='utf-8', newline='') as f:
        lines = [line for line in f if not line.startswith('#')]
    return list(csv.DictReader(lines))
