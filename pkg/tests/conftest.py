"""
Configuration pytest pour learnlab
"""

import json
import shutil
import sys
import tempfile
from pathlib import Path

import pytest

# Ajouter la racine du projet et le répertoire src au path
sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.learnability.languages import Alphabet, finite, regular  # noqa: E402
from src.utils.config_manager import ConfigManager  # noqa: E402

CONFIGS_DIR = Path(__file__).parent.parent / "configs"


@pytest.fixture
def temp_dir():
    """Fixture pour un répertoire temporaire"""
    temp_dir = tempfile.mkdtemp()
    yield Path(temp_dir)
    shutil.rmtree(temp_dir)


@pytest.fixture
def unary():
    """Alphabet à un symbole"""
    return Alphabet('a')


@pytest.fixture
def binary():
    """Alphabet à deux symboles"""
    return Alphabet('ab')


@pytest.fixture
def a_plus(unary):
    """Le langage a+ (infini)"""
    return regular(unary, 'a+')


@pytest.fixture
def ab_plus(binary):
    """Le langage (a|b)+, univers de l'alphabet binaire"""
    return regular(binary, '(a|b)+')


@pytest.fixture
def small_finite(binary):
    """Langage fini {a, ab}"""
    return finite(binary, 'a', 'ab')


@pytest.fixture
def settings(temp_dir):
    """Réglages sans journal fichier ni écriture du fichier de configuration"""
    manager = ConfigManager(temp_dir / 'app_config.json', persist=False)
    manager.config.update({'log_to_file': False, 'max_workers': 2})
    return manager


@pytest.fixture
def write_config(temp_dir):
    """Écrit une configuration JSON dans le répertoire temporaire"""
    def _write(name, data):
        path = temp_dir / f"{name}.json"
        path.write_text(json.dumps(data), encoding='utf-8')
        return path
    return _write


@pytest.fixture
def configs_dir():
    """Répertoire des configurations d'exemple livrées"""
    return CONFIGS_DIR
