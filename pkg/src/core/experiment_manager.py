"""
Gestionnaire d'expériences: journalisation, exécution des configurations et artefacts
"""

import logging
import time
import traceback
from concurrent.futures import ThreadPoolExecutor, as_completed
from datetime import datetime
from pathlib import Path
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from src.core.learnability.adversary import adversary_trace, classify_pattern, mind_changes, \
    run_adversary, witness_holds
from src.core.learnability.angluin import TelltaleChecker, cross_check
from src.core.learnability.base import LearnabilityError, as_fraction, format_cardinality
from src.core.learnability.chains import convergence_experiment
from src.core.learnability.languages import is_subset
from src.core.learnability.locking import LockingVerifier
from src.core.learnability.metrics import DEFAULT_TRUNCATION_RANK, estimate_gap, verify_metric_axioms
from src.core.learnability.random_source import describe_rng
from src.core.learnability.simulate import check_exact_stabilization, check_limit_convergence, run
from src.utils.artifacts import distance_columns, format_distance, format_number, write_config, \
    write_csv, write_report
from src.utils.config_manager import ConfigManager
from src.utils.experiment_config import ConfigError, ExperimentConfig

PROJECT_ROOT = Path(__file__).resolve().parent.parent.parent

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

SIMULATE_HEADER = ('k', 'hypothesis_kind', 'hypothesis_card', 'distance_lo', 'distance_hi',
                   'changed', 'flag')
CHAIN_HEADER = ('n', 'distance_lo', 'distance_hi')
PHASE_HEADER = ('k', 'word', 'policy', 'hypothesis_kind', 'changed')
LOCKING_HEADER = ('prefix_len', 'candidate', 'verdict', 'reason', 'counterexample',
                  'distance_lo', 'distance_hi', 'continuations_checked')
TELLTALE_HEADER = ('index', 'member', 'status', 'witness', 'candidates_checked', 'reverified')
AXIOM_HEADER = ('axiom', 'languages', 'detail')


def _flag(value: bool) -> str:
    return 'true' if value else 'false'


def _index(value: Optional[int]) -> str:
    return 'NONE' if value is None else str(value)


class ExperimentResult:
    """Rapport texte et traces CSV produits par une expérience"""

    def __init__(self, summary: str):
        self.summary = summary
        self.lines: List[str] = []
        self.tables: List[Tuple[str, Sequence[str], List[Sequence[Any]], Dict[str, Any]]] = []
        self.elapsed = 0.0

    def add(self, line: str):
        self.lines.append(line)

    def table(self, filename: str, header: Sequence[str], rows: List[Sequence[Any]],
              metadata: Dict[str, Any]):
        self.tables.append((filename, header, rows, metadata))


class ExperimentManager:
    """Gestionnaire d'expériences avec exécution parallèle des lots et logs"""

    def __init__(self, settings: Optional[ConfigManager] = None, max_workers: Optional[int] = None):
        """Initialise le gestionnaire"""
        self.settings = settings or ConfigManager(PROJECT_ROOT / 'app_config.json')
        self.max_workers = max(1, int(max_workers or self.settings.get('max_workers', 5)))
        self.float_digits = int(self.settings.get('float_digits', 12))
        self.truncation_rank = int(self.settings.get('truncation_rank', DEFAULT_TRUNCATION_RANK))
        self._run_stats = {
            'total_runs': 0,
            'completed_runs': 0,
            'failed_runs': 0,
            'start_time': None,
            'end_time': None
        }

        # Configurer le logging en premier
        self._setup_logging()
        self._check_dependencies()

        self._runners: Dict[str, Callable[[ExperimentConfig, Dict[str, Any]], ExperimentResult]] = {
            'simulate': self._run_simulate,
            'locking-search': self._run_locking_search,
            'locking-verify': self._run_locking_verify,
            'telltale-check': self._run_telltale_check,
            'chain-convergence': self._run_chain_convergence,
            'adversary': self._run_adversary,
            'metric-axioms': self._run_metric_axioms,
        }

    def _setup_logging(self):
        """Configure le système de logging"""
        self.logger = logging.getLogger('learnlab')
        try:
            self.logger.setLevel(logging.DEBUG)

            # Éviter les handlers dupliqués
            if not self.logger.handlers:
                formatter = logging.Formatter('%(asctime)s - %(levelname)s - %(message)s')

                if self.settings.get('log_to_file', True):
                    logs_dir = Path(self.settings.get('log_dir', 'logs'))
                    if not logs_dir.is_absolute():
                        logs_dir = PROJECT_ROOT / logs_dir
                    logs_dir.mkdir(parents=True, exist_ok=True)
                    log_file = logs_dir / f"learnlab_{datetime.now().strftime('%Y%m%d')}_{datetime.now().strftime('%H%M%S')}.log"
                    file_handler = logging.FileHandler(log_file, encoding='utf-8')
                    file_handler.setLevel(logging.DEBUG)
                    file_handler.setFormatter(formatter)
                    self.logger.addHandler(file_handler)
                    self.logger.debug(f"Dossier de logs: {logs_dir}")

                console_handler = logging.StreamHandler()
                console_handler.setLevel(getattr(logging, str(self.settings.get('log_level', 'INFO')).upper(),
                                                 logging.INFO))
                console_handler.setFormatter(formatter)
                self.logger.addHandler(console_handler)

        except Exception as e:
            self.logger.error(f"Erreur configuration logging: {e}")

    def _check_dependencies(self):
        """Vérifie les dépendances optionnelles"""
        try:
            import psutil  # noqa: F401
            self.psutil_available = True
        except ImportError:
            self.psutil_available = False
            self.logger.debug("psutil absent: mesures mémoire désactivées")

    def _memory_mb(self) -> float:
        if not self.psutil_available:
            return 0.0
        import psutil
        return psutil.Process().memory_info().rss / (1024 * 1024)

    # ------------------------------------------------------------------
    # Exécution
    # ------------------------------------------------------------------

    def run_config(self, path, out=None, seed: Optional[int] = None) -> Tuple[int, str]:
        """Exécute une configuration; retourne (code de sortie, message)"""
        path = Path(path)
        try:
            self.logger.info(f"🚀 Expérience: {path.name}")
            config = ExperimentConfig.load(path).with_seed(seed)
            if seed is not None:
                config.validate()
            out_root = Path(out or config.output_dir or self.settings.get('output_dir', 'out'))
            result = self.run_experiment(config, out_root / path.stem)
            self.logger.info(f"✅ {path.name}: {result.summary}")
            return EXIT_OK, result.summary

        except ConfigError as e:
            self.logger.error(f"❌ Configuration invalide ({path.name}): {e}")
            return EXIT_CONFIG, f"config error: {e}"
        except LearnabilityError as e:
            module = Path(traceback.extract_tb(e.__traceback__)[-1].filename).stem
            self.logger.error(f"❌ Erreur de domaine [{module}] ({path.name}): {e}")
            return EXIT_DOMAIN, f"{type(e).__name__} [{module}]: {e}"
        except Exception as e:
            self.logger.error(f"❌ Erreur inattendue ({path.name}): {e}")
            self.logger.debug(traceback.format_exc())
            return EXIT_UNEXPECTED, f"unexpected error: {e}"

    def run_experiment(self, config: ExperimentConfig, run_dir: Path) -> ExperimentResult:
        """Exécute l'expérience et écrit report.txt, les CSV et config.json dans run_dir"""
        start = time.perf_counter()
        components = config.components(truncation_rank=self.truncation_rank)
        result = self._runners[config.experiment](config, components)
        result.elapsed = time.perf_counter() - start

        header = [f"EXPERIMENT {config.experiment}", f"ALPHABET {config.alphabet}"]
        if config.description:
            header.append(f"DESCRIPTION {config.description}")
        if config.seed is not None:
            header.append(f"SEED {config.seed}")
        lines = header + result.lines
        if config.include_timing:
            lines.append(f"ELAPSED {result.elapsed:.3f}s")

        run_dir.mkdir(parents=True, exist_ok=True)
        write_report(run_dir / 'report.txt', lines)
        for filename, table_header, rows, metadata in result.tables:
            metadata = dict(metadata, config=config.to_dict(), seed=config.seed, rng=describe_rng())
            write_csv(run_dir / filename, table_header, rows, metadata)
        write_config(run_dir / 'config.json', config)

        memory = f", mémoire {self._memory_mb():.1f} MB" if self.psutil_available else ''
        self.logger.info(f"📊 {config.experiment} terminé en {result.elapsed:.2f}s{memory} → {run_dir}")
        return result

    def run_batch(self, paths: Sequence, out=None, seed: Optional[int] = None) -> List[Tuple[str, int, str]]:
        """Exécute plusieurs configurations en parallèle (un dossier de sortie par configuration)"""
        self._run_stats = {
            'total_runs': len(paths),
            'completed_runs': 0,
            'failed_runs': 0,
            'start_time': time.time(),
            'end_time': None
        }
        self.logger.info(f"🚀 Lot de {len(paths)} expériences")
        results: Dict[str, Tuple[int, str]] = {}

        with ThreadPoolExecutor(max_workers=self.max_workers) as executor:
            future_to_path = {
                executor.submit(self.run_config, path, out, seed): str(path)
                for path in paths
            }
            for future in as_completed(future_to_path):
                path = future_to_path[future]
                code, message = future.result()
                results[path] = (code, message)
                if code == EXIT_OK:
                    self._run_stats['completed_runs'] += 1
                else:
                    self._run_stats['failed_runs'] += 1

        self._run_stats['end_time'] = time.time()
        elapsed_time = self._run_stats['end_time'] - self._run_stats['start_time']
        self.logger.info(f"✅ Lot terminé: {self._run_stats['completed_runs']} réussies, "
                         f"{self._run_stats['failed_runs']} échouées en {elapsed_time:.2f}s")
        return [(str(p), *results[str(p)]) for p in paths]

    def get_run_stats(self) -> Dict:
        """Retourne les statistiques du dernier lot"""
        return self._run_stats.copy()

    # ------------------------------------------------------------------
    # Expériences
    # ------------------------------------------------------------------

    def _ladder(self, config: ExperimentConfig, key: str):
        values = config.get(key) or self.settings.get('epsilon_ladder')
        return [as_fraction(v) for v in values]

    def _locking_bound(self, config: ExperimentConfig, key: str) -> int:
        return int(config.get(key, self.settings.get('locking_defaults', {}).get(key)))

    def _run_simulate(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        horizon = config.get('horizon')
        trace = run(c['learner'], c['text'], c['target'], c['metric'], horizon, self.logger)
        digits = self.float_digits

        rows = []
        for step in trace.steps:
            lo, hi = distance_columns(step.distance, digits)
            rows.append((step.k, step.hypothesis.kind, format_cardinality(step.hypothesis.cardinality()),
                         lo, hi, _flag(step.hyp_changed), step.flag))

        stabilized = check_exact_stabilization(trace)
        result = ExperimentResult(f"stabilized_at={_index(stabilized)} (within horizon {horizon})")
        result.add(f"LEARNER {c['learner'].name}")
        result.add(f"TEXT {c['text'].kind}")
        result.add(f"TARGET {c['target'].label()}")
        result.add(f"METRIC {c['metric'].name}")
        result.add(f"HORIZON {horizon}")
        result.add(f"STABILIZATION stabilized_at={_index(stabilized)} (within horizon {horizon})")
        for eps in self._ladder(config, 'epsilons'):
            entered = check_limit_convergence(trace, eps)
            result.add(f"CONVERGENCE epsilon={format_number(eps)} entered_at={_index(entered)} "
                       f"(within horizon {horizon})")
        result.add(f"FINAL distance={format_distance(trace.steps[-1].distance, digits)}")
        result.add(f"MIND_CHANGES {mind_changes(trace)}")
        result.add(f"FLAGGED_STEPS {len(trace.flagged)}")
        result.table('trace.csv', SIMULATE_HEADER, rows, {'horizon': horizon, 'text': trace.text})
        return result

    def _locking_rows(self, reports) -> List[Sequence[Any]]:
        rows = []
        for report in reports:
            lo, hi = distance_columns(report.achieved_distance, self.float_digits)
            counterexample = report.counterexample.label() if report.counterexample else ''
            rows.append((report.candidate.length, report.candidate.label(), report.verdict, report.reason,
                         counterexample, lo, hi, report.continuations_checked))
        return rows

    def _locking_lines(self, result: ExperimentResult, report, include_timing: bool):
        result.add(f"CANDIDATE {report.candidate.label()} {report.verdict}"
                   + (f" reason={report.reason}" if report.reason else ''))
        result.add(f"SEARCHED {report.continuation_sample()} checked={report.continuations_checked}")
        if report.counterexample is not None:
            result.add(f"COUNTEREXAMPLE {report.counterexample.label()} "
                       f"distance={format_distance(report.achieved_distance, self.float_digits)}")
        if include_timing:
            result.add(f"WALL_CLOCK {report.elapsed:.3f}s")

    def _run_locking_search(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        bounds = {key: self._locking_bound(config, key)
                  for key in ('max_prefix_len', 'max_cont_len', 'word_pool_size')}
        verifier = LockingVerifier(c['learner'], c['metric'], self.max_workers, self.logger)
        search = verifier.search(c['target'], config.get('epsilon'), **bounds)

        verdict = 'FOUND' if search.found is not None else 'NONE'
        result = ExperimentResult(f"{verdict}: {search.message}")
        result.add(f"TARGET {c['target'].label()}")
        result.add(f"LEARNER {c['learner'].name} METRIC {c['metric'].name} "
                   f"EPSILON {format_number(as_fraction(config.get('epsilon')))}")
        result.add('BOUNDS ' + ' '.join(f"{k}={v}" for k, v in sorted(bounds.items())))
        result.add(f"RESULT {verdict} {search.message}")
        if search.report is not None:
            self._locking_lines(result, search.report, config.include_timing)
        result.add(f"CANDIDATES_TRIED {search.candidates_tried}")
        result.table('candidates.csv', LOCKING_HEADER, self._locking_rows(search.reports), {'bounds': bounds})
        return result

    def _run_locking_verify(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        bounds = {key: self._locking_bound(config, key) for key in ('max_cont_len', 'word_pool_size')}
        verifier = LockingVerifier(c['learner'], c['metric'], self.max_workers, self.logger)
        report = verifier.verify(c['candidate'], c['target'], config.get('epsilon'), **bounds)

        result = ExperimentResult(f"{report.verdict} {report.reason}".strip())
        result.add(f"TARGET {c['target'].label()}")
        result.add(f"LEARNER {c['learner'].name} METRIC {c['metric'].name} "
                   f"EPSILON {format_number(report.epsilon)}")
        result.add(f"INITIAL distance={format_distance(report.initial_distance, self.float_digits)}")
        self._locking_lines(result, report, config.include_timing)
        result.add(f"VERDICT {report.verdict} (no counterexample in the searched universe)"
                   if report.passed else f"VERDICT {report.verdict}")
        result.table('candidates.csv', LOCKING_HEADER, self._locking_rows([report]), {'bounds': bounds})
        return result

    def _run_telltale_check(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        family = c['family']
        checker = TelltaleChecker(self.max_workers, self.logger)
        report = checker.check(family, config.get('max_subset_size', 4), config.get('max_word_len', 6))

        result = ExperimentResult(f"FAMILY {report.verdict}")
        result.add(f"MEMBERS {len(report.verdicts)} BOUNDS max_subset_size={report.max_subset_size} "
                   f"max_word_len={report.max_word_len}")
        for line in report.lines():
            result.add(line)
        if config.get('cross_check', True):
            check = cross_check(family, report, self.logger)
            if check is not None:
                for line in check.lines():
                    result.add(line)
                result.add(f"CROSS_CHECK {'PASS' if check.passed else 'FAIL'}")

        rows = [(v.index, v.member.label(), v.status, v.witness.label() if v.witness else '',
                 v.candidates_checked, '' if v.reverified is None else _flag(v.reverified))
                for v in report.verdicts]
        result.table('members.csv', TELLTALE_HEADER, rows, {'family': family.describe()})
        return result

    def _run_chain_convergence(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        n_max = config.get('n_max')
        experiment = convergence_experiment(c['chain'], c['metric'], n_max,
                                            self._ladder(config, 'ladder'), logger=self.logger)
        rows = [(row.n, *distance_columns(row.distance, self.float_digits)) for row in experiment.rows]

        result = ExperimentResult(experiment.verdict_line())
        result.add(f"CHAIN {c['chain'].kind} LIMIT {c['chain'].limit.label()}")
        result.add(f"METRIC {c['metric'].name}")
        for eps in experiment.ladder:
            result.add(f"EPSILON {format_number(eps)} entered_at={_index(experiment.entered_at[eps])}")
        flagged = sum(1 for row in experiment.rows if row.flag)
        if flagged:
            result.add(f"FLAGGED_ROWS {flagged}")
        result.add(experiment.verdict_line())
        result.table('chain.csv', CHAIN_HEADER, rows, {'n_max': n_max})
        return result

    def _run_adversary(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        horizon = config.get('horizon')
        adversary = run_adversary(c['learner'], c['L_inf'], horizon, self.logger)
        trace = adversary_trace(adversary)
        pattern = classify_pattern(adversary)

        rows = [(step.k, step.word, step.policy, step.hypothesis.kind, _flag(step.changed))
                for step in adversary.steps]
        holds = witness_holds(adversary)
        result = ExperimentResult(f"pattern={pattern} witness={'HOLDS' if holds else 'WEAK'}")
        result.add(f"LEARNER {c['learner'].name}")
        result.add(f"L_INF {c['L_inf'].label()}")
        result.add(f"HORIZON {horizon}")
        result.add(f"PATTERN {pattern} (within horizon {horizon})")
        result.add(f"MIND_CHANGES {mind_changes(trace)}")
        result.add(f"WITNESS {'HOLDS' if holds else 'WEAK'}")
        result.add(f"RANGE_INVARIANT {_flag(is_subset(adversary.produced.range(), c['L_inf']))}")
        result.table('phase_log.csv', PHASE_HEADER, rows, {'horizon': horizon})
        return result

    def _run_metric_axioms(self, config: ExperimentConfig, c: Dict[str, Any]) -> ExperimentResult:
        sample = list(c.get('sample', [])) + list(c.get('extras', []))
        tolerance = float(as_fraction(config.get('tolerance', '1/1000000000')))
        report = verify_metric_axioms(c['metric'], sample, tolerance, self.logger)
        gap = estimate_gap(c['metric'], sample)

        result = ExperimentResult(report.summary())
        result.add(f"SAMPLE {len(sample)}")
        result.add(report.summary())
        result.add(f"GAP_ESTIMATE {format_distance(gap, self.float_digits) if gap is not None else 'undefined'}")
        for left, right in report.domain_errors:
            result.add(f"DOMAIN_ERROR {left} {right}")
        rows = [(v.axiom, ' '.join(v.languages), v.detail) for v in report.counterexamples]
        for row in rows:
            result.add(f"VIOLATION {row[0]} {row[1]} {row[2]}")
        result.table('violations.csv', AXIOM_HEADER, rows, {'sample': [L.describe() for L in sample]})
        return result
