"""
Командная строка ST-DAGCN.

Команды: gen-synthetic, train, extract-dag, evaluate, compare-groups.
Общие флаги: --config, --seed, --out, --jobs, --verbose.
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import Sequence

import numpy as np
from pydantic import ValidationError

from .config import RunConfig, SyntheticSpec, load_run_config
from .data import generate_synthetic, load_dataset, write_dataset, write_ground_truth
from .experiment import StDagcnExperiment
from .models import CheckpointStorage
from .utils.errors import DataError, StDagcnError
from .utils.tables import read_labeled_matrix

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


def configure_logging(verbose: bool = False) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.INFO, format=LOG_FORMAT, force=True)


def _settings(args: argparse.Namespace) -> RunConfig:
    return load_run_config(args.config, seed=args.seed)


def _read_adjacency(path: Path) -> tuple[np.ndarray, list[str]]:
    """Матрица A из CSV или из контрольной точки (.json)."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"Файл не найден: {path}")
    if path.suffix.lower() == ".json":
        checkpoint = CheckpointStorage(path).load()
        return checkpoint.graph.numpy(), list(checkpoint.roi_names)
    return read_labeled_matrix(path)


def cmd_gen_synthetic(args: argparse.Namespace) -> int:
    spec = SyntheticSpec.from_file(args.spec)
    if args.seed is not None:
        spec = spec.model_copy(update={"seed": args.seed})
    settings = _settings(args)

    dataset, truth = generate_synthetic(spec)
    out = Path(args.out)
    write_dataset(dataset, out)
    write_ground_truth(spec, truth, dataset.roi_names, out)
    settings.echo(out)
    print(f"Синтетическая когорта: {dataset} -> {out}")
    return 0


def cmd_train(args: argparse.Namespace) -> int:
    settings = _settings(args)
    dataset = load_dataset(args.manifest)
    experiment = StDagcnExperiment(settings, jobs=args.jobs)

    results = experiment.train(dataset, trials=args.trials, fixed_graph=args.fixed_graph == "correlation")
    experiment.save_training(results, dataset, args.out)
    for i, result in enumerate(results, 1):
        final_h = f"{result.final_h:.3e}" if result.graph.trainable else "-"
        print(f"Испытание {i}: {result.reason}, эпох {len(result.trajectory)}, h(A)={final_h}")
    return 0


def cmd_extract(args: argparse.Namespace) -> int:
    settings = _settings(args)
    adjacency, names = _read_adjacency(args.input)
    experiment = StDagcnExperiment(settings, jobs=args.jobs)
    for result in experiment.extract(adjacency, names, args.out, args.epsilon, transpose=args.transpose):
        summary = result.summary()
        print(
            f"ε={summary['epsilon']:g}: оставлено {summary['kept']}, "
            f"удалено порогом {summary['threshold_removed']}, удалено из циклов {summary['cycle_removed']}"
        )
    return 0


def cmd_evaluate(args: argparse.Namespace) -> int:
    settings = _settings(args)
    dataset = load_dataset(args.manifest)
    experiment = StDagcnExperiment(settings, jobs=args.jobs)

    if args.cv:
        report = experiment.cross_validate(dataset)
    else:
        if args.checkpoint is None:
            raise DataError("Без --cv требуется --checkpoint")
        report = experiment.evaluate_checkpoint(CheckpointStorage(args.checkpoint).load(), dataset)

    out = Path(args.out)
    settings.echo(out)
    report.write_json(out / "metrics.json")
    print(json.dumps(report.aggregate(), indent=2))
    return 0


def cmd_compare_groups(args: argparse.Namespace) -> int:
    settings = _settings(args)
    experiment = StDagcnExperiment(settings, jobs=args.jobs)
    diff = experiment.compare_groups(
        read_labeled_matrix(args.group1),
        read_labeled_matrix(args.group2),
        args.out,
        top_nodes=args.top_nodes,
        top_edges=args.top_edges,
    )
    print(f"Суммарное различие ребер: {diff.edge_diff.sum():.6g}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="Файл конфигурации (JSON или key=value)")
    common.add_argument("--seed", type=int, default=None, help="Переопределить seed конфигурации")
    common.add_argument("--out", type=Path, default=Path("out"), help="Каталог результатов")
    common.add_argument("--jobs", type=int, default=1, help="Процессов для независимых испытаний и фолдов")
    common.add_argument("--verbose", action="store_true", help="Подробный журнал (DEBUG)")

    parser = argparse.ArgumentParser(
        prog="st-dagcn",
        description="Обучение DAG эффективной связности и классификатора ST-DAGCN. Положительный класс: метка 1.",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    gen = commands.add_parser("gen-synthetic", parents=[common], help="Сгенерировать синтетическую когорту")
    gen.add_argument("--spec", type=Path, default=None, help="JSON спецификация генератора")
    gen.set_defaults(handler=cmd_gen_synthetic)

    train = commands.add_parser("train", parents=[common], help="Обучить A и θ")
    train.add_argument("--manifest", type=Path, required=True)
    train.add_argument("--trials", type=int, default=1, help="Число независимых испытаний")
    train.add_argument("--fixed-graph", choices=["correlation"], default=None, help="Абляция с фиксированным графом")
    train.set_defaults(handler=cmd_train)

    extract = commands.add_parser("extract-dag", parents=[common], help="Порог и удаление циклов")
    extract.add_argument("input", type=Path, help="CSV матрицы A или контрольная точка .json")
    extract.add_argument("--epsilon", type=float, action="append", default=None, help="Порог ε (можно несколько)")
    extract.add_argument("--transpose", action="store_true", help="Записывать матрицы как Aᵀ")
    extract.set_defaults(handler=cmd_extract)

    evaluate = commands.add_parser("evaluate", parents=[common], help="Метрики ACC, SEN, SPE, AUC")
    evaluate.add_argument("--manifest", type=Path, required=True)
    evaluate.add_argument("--checkpoint", type=Path, default=None)
    evaluate.add_argument("--cv", action="store_true", help="Повторная стратифицированная перекрестная проверка")
    evaluate.set_defaults(handler=cmd_evaluate)

    compare = commands.add_parser("compare-groups", parents=[common], help="Различия графов двух групп")
    compare.add_argument("group1", type=Path)
    compare.add_argument("group2", type=Path)
    compare.add_argument("--top-nodes", type=int, default=10)
    compare.add_argument("--top-edges", type=int, default=10)
    compare.set_defaults(handler=cmd_compare_groups)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Точка входа CLI.

    Returns:
        int: 0 при успехе (в том числе при остановке оптимизации без сходимости), 1 при ошибке
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except (StDagcnError, ValidationError, OSError) as e:
        logger.debug("Подробности ошибки", exc_info=True)
        print(f"Ошибка: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
