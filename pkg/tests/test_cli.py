"""
Tests pour le point d'entrée en ligne de commande
"""

import json
import sys
from pathlib import Path

import pytest

# Ajouter la racine du projet au path
sys.path.insert(0, str(Path(__file__).parent.parent))

import main as cli


class TestCommandLine:
    """Tests pour main.py"""

    def test_list_prints_catalog(self, capsys):
        assert cli.main(['list']) == 0
        catalog = json.loads(capsys.readouterr().out)
        assert 'counting' in catalog['metrics']
        assert 'range' in catalog['learners']

    def test_list_is_stable(self, capsys):
        cli.main(['list'])
        first = capsys.readouterr().out
        cli.main(['list'])
        assert capsys.readouterr().out == first

    def test_command_required(self):
        with pytest.raises(SystemExit):
            cli.main([])

    def test_run_single_config(self, mocker, capsys):
        manager = mocker.Mock()
        manager.run_config.return_value = (0, 'VERDICT CONVERGING')
        factory = mocker.patch.object(cli, 'ExperimentManager', return_value=manager)
        assert cli.main(['run', 'configs/chain_counting.json', '--out', 'results', '--seed', '3']) == 0
        factory.assert_called_once_with(max_workers=None)
        manager.run_config.assert_called_once_with('configs/chain_counting.json', 'results', 3)
        assert 'VERDICT CONVERGING' in capsys.readouterr().out

    def test_run_propagates_exit_code(self, mocker):
        manager = mocker.Mock()
        manager.run_config.return_value = (2, 'config error: epsilon: doit être strictement positif')
        mocker.patch.object(cli, 'ExperimentManager', return_value=manager)
        assert cli.main(['run', 'bad.json']) == 2

    def test_run_batch_returns_worst_code(self, mocker):
        manager = mocker.Mock()
        manager.run_batch.return_value = [('a.json', 0, 'ok'), ('b.json', 3, 'PreconditionError [texts]: ...')]
        mocker.patch.object(cli, 'ExperimentManager', return_value=manager)
        assert cli.main(['run', 'a.json', 'b.json', '--workers', '2']) == 3
        manager.run_batch.assert_called_once_with(['a.json', 'b.json'], None, None)

    def test_run_unexpected_failure(self, mocker, capsys):
        mocker.patch.object(cli, 'ExperimentManager', side_effect=RuntimeError('boom'))
        assert cli.main(['run', 'a.json']) == 1
        assert 'boom' in capsys.readouterr().err

    def test_end_to_end(self, settings, mocker, configs_dir, temp_dir):
        """Exécution réelle d'une configuration livrée"""
        from src.core.experiment_manager import ExperimentManager
        mocker.patch.object(cli, 'ExperimentManager', side_effect=lambda max_workers=None: ExperimentManager(settings))
        code = cli.main(['run', str(configs_dir / 'telltale_learnable.json'), '--out', str(temp_dir)])
        assert code == 0
        assert (temp_dir / 'telltale_learnable' / 'report.txt').exists()
