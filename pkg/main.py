#!/usr/bin/env python3
"""
Point d'entrée principal du laboratoire d'apprenabilité à la limite

    python main.py run configs/simulate_range_counting.json --out out --seed 7
    python main.py list
"""

import argparse
import sys
from pathlib import Path

# Ajouter la racine du projet au path pour les imports
sys.path.insert(0, str(Path(__file__).parent))

from src.core.experiment_manager import EXIT_OK, EXIT_UNEXPECTED, ExperimentManager  # noqa: E402
from src.core.learnability.catalog import render_builtins  # noqa: E402


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='learnlab',
        description="Expériences d'apprentissage à la limite (exact et métrique)")
    subparsers = parser.add_subparsers(dest='command', required=True)

    run_parser = subparsers.add_parser('run', help="Exécute une ou plusieurs configurations JSON")
    run_parser.add_argument('configs', nargs='+', help="Fichiers de configuration")
    run_parser.add_argument('--out', default=None, help="Dossier racine des artefacts")
    run_parser.add_argument('--seed', type=int, default=None, help="Remplace la graine des configurations")
    run_parser.add_argument('--workers', type=int, default=None, help="Nombre de workers")

    subparsers.add_parser('list', help="Liste les composants intégrés et leurs paramètres")
    return parser


def main(argv=None) -> int:
    """Fonction principale; retourne le code de sortie"""
    args = build_parser().parse_args(argv)

    if args.command == 'list':
        print(render_builtins())
        return EXIT_OK

    try:
        manager = ExperimentManager(max_workers=args.workers)
        if len(args.configs) == 1:
            code, message = manager.run_config(args.configs[0], args.out, args.seed)
            print(f"{args.configs[0]}: {message}")
            return code

        results = manager.run_batch(args.configs, args.out, args.seed)
        for path, code, message in results:
            print(f"{path}: {message}")
        return max(code for _, code, _ in results)

    except Exception as e:
        print(f"Erreur lors de l'exécution: {e}", file=sys.stderr)
        return EXIT_UNEXPECTED


if __name__ == "__main__":
    sys.exit(main())
