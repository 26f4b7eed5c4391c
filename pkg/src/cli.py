"""
egalbandit command line.

    python src/main.py simulate --K 10 --U 3 --T 150000 --runs 30 --seed 7
    python src/main.py sweep-users --K 20 --U 2:20:2 --T 126000 --runs 30 --seed 1 \
        --gen bernoulli --gen top-u-means:0.8,0.5
    python src/main.py bounds --K 4 --U 2 --T 10000
    python src/main.py ingest-run --trace machines.csv --id-column machine_id \
        --value-column cycles_per_instruction --negate --K 10 --U 5 --T 100000 --seed 3
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import Any, Sequence

from dotenv import dotenv_values

from errors import ConfigError
from models.config import ExperimentConfig
from repositories.instance_repository import InstanceRepository
from repositories.result_repository import ResultRepository
from repositories.trace_repository import TraceRepository
from services.bound_service import BoundService
from services.experiment_service import ExperimentService
from services.ingest_service import IngestService
from services.instance_service import InstanceService
from services.simulation_service import SimulationService
from settings import check_log_level, configure_logging, load_settings

logger = logging.getLogger(__name__)

MODES = ("simulate", "sweep-users", "bounds", "ingest-run")
RUNTIME_KEYS = frozenset({"mode", "config", "log_level", "progress", "threads"})


class _ArgumentParser(argparse.ArgumentParser):
    """Raises ConfigError instead of exiting, so callers choose the exit status."""

    def error(self, message: str):
        raise ConfigError(message)


def _add_shared(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="flat key=value file; flags override its values")
    parser.add_argument("--log-level", help="DEBUG, INFO, WARNING or ERROR (default: EGALBANDIT_LOG_LEVEL)")
    parser.add_argument("--threads", type=int, help="worker processes (default: EGALBANDIT_THREADS or CPU count)")
    parser.add_argument("--progress", action="store_true", help="show a progress bar on stderr")
    parser.add_argument("--K", help="number of arms")
    parser.add_argument("--U", help="users: 3, 1-5, 2,4,8 or 2:20:2")
    parser.add_argument("--T", help="horizon, a multiple of every U")
    parser.add_argument("--runs", help="episodes per U")
    parser.add_argument("--seed", help="base seed; run i uses seed + i")
    parser.add_argument("--policy", help="egalucb, oracle or random")
    parser.add_argument("--out", help="output directory")
    parser.add_argument("--round-horizon", action="store_true", help="round T down to a multiple of U")
    parser.add_argument("--gen", action="append", help="generator item; may be repeated")
    parser.add_argument("--instance", help="instance file with header arm_id,kind,p1,p2")
    parser.add_argument("--save-instance", help="also write the instance used to this file")
    parser.add_argument("--record-every", help="keep every n-th block boundary in runs and aggregate files")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="egalbandit", description="Egalitarian multi-user bandit experiments.")
    commands = parser.add_subparsers(dest="mode", required=True, parser_class=_ArgumentParser)
    helps = {
        "simulate": "replicated episodes for one or more U",
        "sweep-users": "final regret per U, with an optional log-log slope",
        "bounds": "evaluate the regret bounds",
        "ingest-run": "build an instance from a trace and simulate on it",
    }
    for mode in MODES:
        sub = commands.add_parser(mode, help=helps[mode], argument_default=argparse.SUPPRESS)
        _add_shared(sub)
        if mode in ("simulate", "sweep-users", "ingest-run"):
            sub.add_argument("--fit-slope", action="store_true", help="fit ln(mean regret) against ln(U)")
        if mode == "bounds":
            sub.add_argument("--delta-min", help="smallest positive gap")
            sub.add_argument("--delta-max", help="largest gap")
        if mode == "ingest-run":
            sub.add_argument("--trace", help="CSV with a header row")
            sub.add_argument("--id-column", help="column naming the arm")
            sub.add_argument("--value-column", help="column holding rewards")
            sub.add_argument("--negate", action="store_true", help="use the negated values")
            sub.add_argument("--max-rows", help="read at most this many rows")
            sub.add_argument("--select", help="top-count or random:SEED")
            sub.add_argument("--summary", action="store_true", help="print the instance summary")
    return parser


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """
    Parses the command line. Unknown flags are reported by key name.

    Raises:
        ConfigError: On any usage error.
    """
    namespace, extras = build_parser().parse_known_args(argv)
    for extra in extras:
        if extra.startswith("--"):
            key = extra[2:].split("=", 1)[0].replace("-", "_")
            raise ConfigError(f"unknown key '{key}'", key=key)
    if extras:
        raise ConfigError(f"unexpected argument '{extras[0]}'")
    return namespace


def read_config_file(path: str | Path) -> dict[str, str]:
    """Reads a flat key=value file; `#` lines are comments."""
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}", key="config")
    return {key: value for key, value in dotenv_values(path).items() if value is not None}


def config_from_namespace(namespace: argparse.Namespace) -> ExperimentConfig:
    """Merges defaults, the config file and flags, in increasing precedence."""
    values: dict[str, Any] = {}
    if getattr(namespace, "config", None):
        values.update(read_config_file(namespace.config))
        if values.get("mode", namespace.mode) != namespace.mode:
            raise ConfigError(f"config file is for '{values['mode']}', not '{namespace.mode}'", key="mode")
    values.update({key: value for key, value in vars(namespace).items() if key not in RUNTIME_KEYS})
    values["mode"] = namespace.mode
    return ExperimentConfig.resolve(values)


def parse_config(argv: Sequence[str] | None = None) -> ExperimentConfig:
    """
    Builds the validated configuration for a command line.

    Args:
        argv (Sequence[str] | None): Arguments after the program name.

    Returns:
        ExperimentConfig: The resolved configuration.

    Raises:
        ConfigError: On unknown keys, missing or conflicting values.
    """
    return config_from_namespace(parse_args(argv))


def build_experiment_service(workers: int, progress: bool = False) -> ExperimentService:
    return ExperimentService(
        instance_service=InstanceService(InstanceRepository()),
        simulation_service=SimulationService(workers=workers, progress=progress),
        bound_service=BoundService(),
        ingest_service=IngestService(TraceRepository()),
        result_repo=ResultRepository(),
    )


def main(argv: Sequence[str] | None = None) -> int:
    """
    Runs one command.

    Returns:
        int: 0 on success, 1 when the command failed, 2 on a usage error.
    """
    try:
        settings = load_settings()
        namespace = parse_args(argv)
        level = check_log_level(namespace.log_level) if getattr(namespace, "log_level", None) else settings.log_level
        configure_logging(level)
        config = config_from_namespace(namespace)
        workers = getattr(namespace, "threads", settings.threads)
        if workers < 1:
            raise ConfigError(f"threads must be >= 1, got {workers}", key="threads")
    except ConfigError as e:
        print(f"egalbandit: usage error: {e}", file=sys.stderr)
        return 2

    service = build_experiment_service(workers, progress=getattr(namespace, "progress", False))
    ok, message = service.run(config)
    if not ok:
        print(f"egalbandit: error: {message}", file=sys.stderr)
        return 1
    print(message)
    return 0
