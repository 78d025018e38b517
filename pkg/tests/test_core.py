"""
Tests pour le gestionnaire d'expériences
"""

import sys
from pathlib import Path

import pytest

# Ajouter le répertoire src au path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from src.core.experiment_manager import CHAIN_HEADER, EXIT_CONFIG, EXIT_DOMAIN, EXIT_OK, \
    EXIT_UNEXPECTED, PHASE_HEADER, SIMULATE_HEADER, ExperimentManager
from src.utils.artifacts import read_csv_rows
from src.utils.experiment_config import ExperimentConfig


@pytest.fixture
def manager(settings):
    """Gestionnaire sans journal fichier"""
    return ExperimentManager(settings)


def csv_header(path: Path):
    return next(line for line in path.read_text(encoding='utf-8').splitlines() if not line.startswith('#'))


class TestExperimentManager:
    """Tests pour ExperimentManager"""

    def test_init(self, manager):
        """Test de l'initialisation"""
        assert manager.logger is not None
        assert manager.max_workers == 2
        assert manager.get_run_stats()['total_runs'] == 0

    def test_simulate_artifacts(self, manager, configs_dir, temp_dir):
        """Trace de 100 lignes, dernière distance 1/100"""
        code, message = manager.run_config(configs_dir / 'simulate_range_counting.json', temp_dir)
        assert code == EXIT_OK, message
        run_dir = temp_dir / 'simulate_range_counting'
        assert csv_header(run_dir / 'trace.csv') == ','.join(SIMULATE_HEADER)
        rows = read_csv_rows(run_dir / 'trace.csv')
        assert len(rows) == 100
        assert rows[-1]['distance_lo'] == rows[-1]['distance_hi'] == '1/100'
        assert rows[0]['hypothesis_card'] == '1'
        assert {row['changed'] for row in rows} == {'true'}

        report = (run_dir / 'report.txt').read_text(encoding='utf-8')
        assert 'CONVERGENCE epsilon=1/2 entered_at=3 (within horizon 100)' in report
        assert 'STABILIZATION stabilized_at=NONE (within horizon 100)' in report
        assert (run_dir / 'config.json').exists()

    def test_trace_metadata(self, manager, configs_dir, temp_dir):
        manager.run_config(configs_dir / 'simulate_range_random.json', temp_dir)
        lines = (temp_dir / 'simulate_range_random' / 'trace.csv').read_text(encoding='utf-8').splitlines()
        metadata = [line for line in lines if line.startswith('#')]
        assert any(line.startswith('# config: ') for line in metadata)
        assert '# horizon: 500' in metadata
        assert '# seed: 7' in metadata
        assert any('splitmix64' in line for line in metadata)

    def test_seed_override(self, manager, configs_dir, temp_dir):
        manager.run_config(configs_dir / 'simulate_range_random.json', temp_dir / 'a', seed=7)
        manager.run_config(configs_dir / 'simulate_range_random.json', temp_dir / 'b', seed=8)
        first = (temp_dir / 'a' / 'simulate_range_random' / 'trace.csv').read_bytes()
        second = (temp_dir / 'b' / 'simulate_range_random' / 'trace.csv').read_bytes()
        assert first != second

    def test_chain_convergence(self, manager, configs_dir, temp_dir):
        code, message = manager.run_config(configs_dir / 'chain_counting.json', temp_dir)
        assert code == EXIT_OK
        assert message.startswith('VERDICT CONVERGING n_max=1000')
        run_dir = temp_dir / 'chain_counting'
        assert csv_header(run_dir / 'chain.csv') == ','.join(CHAIN_HEADER)
        rows = read_csv_rows(run_dir / 'chain.csv')
        assert rows[999] == {'n': '1000', 'distance_lo': '1/1000', 'distance_hi': '1/1000'}

    def test_chain_obstructed(self, manager, configs_dir, temp_dir):
        code, message = manager.run_config(configs_dir / 'chain_exact.json', temp_dir)
        assert code == EXIT_OK
        assert 'OBSTRUCTED' in message
        assert 'unbeaten=1/2,1/4,1/8,1/16,1/32,1/64' in message

    def test_telltale_not_learnable(self, manager, configs_dir, temp_dir):
        """Un verdict NOT_LEARNABLE reste une exécution réussie"""
        code, _ = manager.run_config(configs_dir / 'telltale_bounded.json', temp_dir)
        assert code == EXIT_OK
        report = (temp_dir / 'telltale_bounded' / 'report.txt').read_text(encoding='utf-8')
        assert 'FAMILY NOT_LEARNABLE' in report
        assert 'MEMBER 57 REFUTED a+' in report

    def test_telltale_learnable_cross_check(self, manager, configs_dir, temp_dir):
        code, _ = manager.run_config(configs_dir / 'telltale_learnable.json', temp_dir)
        assert code == EXIT_OK
        report = (temp_dir / 'telltale_learnable' / 'report.txt').read_text(encoding='utf-8')
        assert 'MEMBER 1 WITNESS {a} D={a}' in report
        assert 'MEMBER 2 WITNESS a+ D={aa}' in report
        assert 'CROSS_CHECK PASS' in report

    def test_locking_search(self, manager, configs_dir, temp_dir):
        code, message = manager.run_config(configs_dir / 'locking_search_exact.json', temp_dir)
        assert code == EXIT_OK
        assert 'not found under search policy' in message
        rows = read_csv_rows(temp_dir / 'locking_search_exact' / 'candidates.csv')
        assert len(rows) == 6
        assert {row['verdict'] for row in rows} == {'FAIL'}

        code, message = manager.run_config(configs_dir / 'locking_search_counting.json', temp_dir)
        assert code == EXIT_OK
        assert message.startswith('FOUND')

    def test_locking_verify(self, manager, configs_dir, temp_dir):
        code, message = manager.run_config(configs_dir / 'locking_verify.json', temp_dir)
        assert code == EXIT_OK
        assert message == 'PASS'

    def test_adversary(self, manager, configs_dir, temp_dir):
        code, _ = manager.run_config(configs_dir / 'adversary_memorizing.json', temp_dir)
        assert code == EXIT_OK
        run_dir = temp_dir / 'adversary_memorizing'
        assert csv_header(run_dir / 'phase_log.csv') == ','.join(PHASE_HEADER)
        rows = read_csv_rows(run_dir / 'phase_log.csv')
        assert len(rows) == 200
        assert rows[0]['policy'] == 'FEED_FRESH'
        report = (run_dir / 'report.txt').read_text(encoding='utf-8')
        assert 'WITNESS HOLDS' in report
        assert 'RANGE_INVARIANT true' in report

    def test_metric_axioms(self, manager, configs_dir, temp_dir):
        code, message = manager.run_config(configs_dir / 'metric_axioms_symdiff.json', temp_dir)
        assert code == EXIT_OK
        assert message.startswith('PASS metric=symdiff')

    def test_truncation_rank_setting(self, settings, configs_dir, temp_dir, mocker):
        """Le réglage truncation_rank devient le rang par défaut de la métrique symdiff"""
        settings.config['truncation_rank'] = 32
        spy = mocker.spy(ExperimentConfig, 'components')
        manager = ExperimentManager(settings)
        code, message = manager.run_config(configs_dir / 'metric_axioms_symdiff.json', temp_dir)
        assert code == EXIT_OK, message
        assert spy.call_args.kwargs['truncation_rank'] == 32
        assert spy.spy_return['metric'].parameters['truncation_rank'] == 32

    def test_config_error_exit_code(self, manager, write_config, temp_dir):
        """ε = 0: sortie non nulle, message nommant epsilon"""
        path = write_config('bad', {'alphabet': 'a', 'experiment': 'locking-search', 'target': 'a+',
                                    'learner': {'kind': 'range'}, 'metric': {'kind': 'exact'}, 'epsilon': 0})
        code, message = manager.run_config(path, temp_dir / 'out')
        assert code == EXIT_CONFIG
        assert 'epsilon' in message
        assert not (temp_dir / 'out' / 'bad').exists()

    def test_missing_config_file(self, manager, temp_dir):
        code, _ = manager.run_config(temp_dir / 'absent.json', temp_dir)
        assert code == EXIT_CONFIG

    def test_domain_error_exit_code(self, manager, write_config, temp_dir):
        """Erreur de domaine remontée avec le module d'origine"""
        path = write_config('prefix', {'alphabet': 'a', 'experiment': 'simulate', 'learner': {'kind': 'range'},
                                       'text': {'kind': 'locking-prefix', 'prefix': ['aa']},
                                       'target': {'kind': 'finite', 'words': ['a']},
                                       'metric': {'kind': 'exact'}, 'horizon': 5})
        code, message = manager.run_config(path, temp_dir)
        assert code == EXIT_DOMAIN
        assert message.startswith('PreconditionError [texts]')

    def test_unexpected_error_exit_code(self, manager, configs_dir, temp_dir, mocker):
        mocker.patch.object(manager, 'run_experiment', side_effect=RuntimeError('boom'))
        code, message = manager.run_config(configs_dir / 'simulate_range_counting.json', temp_dir)
        assert code == EXIT_UNEXPECTED
        assert 'boom' in message

    def test_include_timing(self, manager, write_config, temp_dir):
        path = write_config('timed', {'alphabet': 'a', 'experiment': 'locking-verify', 'candidate': ['a'],
                                      'target': {'kind': 'finite', 'words': ['a']}, 'learner': {'kind': 'range'},
                                      'metric': {'kind': 'exact'}, 'epsilon': '1/2', 'include_timing': True})
        code, _ = manager.run_config(path, temp_dir / 'out')
        assert code == EXIT_OK
        report = (temp_dir / 'out' / 'timed' / 'report.txt').read_text(encoding='utf-8')
        assert 'WALL_CLOCK' in report
        assert 'ELAPSED' in report

    def test_run_batch(self, manager, configs_dir, write_config, temp_dir):
        bad = write_config('bad', {'alphabet': 'a', 'experiment': 'simulate'})
        paths = [configs_dir / 'telltale_learnable.json', bad, configs_dir / 'locking_verify.json']
        results = manager.run_batch(paths, temp_dir / 'out')
        assert [code for _, code, _ in results] == [EXIT_OK, EXIT_CONFIG, EXIT_OK]
        assert [path for path, _, _ in results] == [str(p) for p in paths]
        stats = manager.get_run_stats()
        assert stats['total_runs'] == 3
        assert stats['completed_runs'] == 2
        assert stats['failed_runs'] == 1


class TestReproducibility:
    """Deux exécutions d'une configuration livrée produisent des artefacts identiques"""

    @pytest.mark.parametrize("name", sorted(p.name for p in
                                            (Path(__file__).parent.parent / 'configs').glob('*.json')))
    def test_byte_identical_artifacts(self, manager, configs_dir, temp_dir, name):
        for out in ('first', 'second'):
            code, message = manager.run_config(configs_dir / name, temp_dir / out)
            assert code == EXIT_OK, message
        first = temp_dir / 'first' / Path(name).stem
        second = temp_dir / 'second' / Path(name).stem
        files = sorted(p.name for p in first.iterdir())
        assert files == sorted(p.name for p in second.iterdir())
        for filename in files:
            assert (first / filename).read_bytes() == (second / filename).read_bytes()
