import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

from errors import ConfigError

# logging.getLevelNamesMapping is Python 3.11+; same mapping on older interpreters.
_level_names_mapping = getattr(logging, "getLevelNamesMapping", lambda: logging._nameToLevel.copy())

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


@dataclass(frozen=True)
class Settings:
    """Process-level settings read from the environment (and a `.env` file)."""
    threads: int
    log_level: str


def load_settings() -> Settings:
    """
    Reads EGALBANDIT_THREADS (default: CPU count) and EGALBANDIT_LOG_LEVEL
    (default: WARNING). Neither affects the bytes of any output file.

    Raises:
        ConfigError: If a variable holds an invalid value.
    """
    load_dotenv()
    raw_threads = os.getenv("EGALBANDIT_THREADS")
    if raw_threads is None or raw_threads.strip() == "":
        threads = os.cpu_count() or 1
    else:
        try:
            threads = int(raw_threads)
        except ValueError:
            raise ConfigError(f"EGALBANDIT_THREADS must be an integer, got '{raw_threads}'.", key="threads") from None
        if threads < 1:
            raise ConfigError(f"EGALBANDIT_THREADS must be >= 1, got {threads}.", key="threads")
    return Settings(threads=threads, log_level=check_log_level(os.getenv("EGALBANDIT_LOG_LEVEL", "WARNING")))


def check_log_level(level: str) -> str:
    level = level.strip().upper()
    if level not in _level_names_mapping():
        raise ConfigError(f"Unknown log level '{level}'.", key="log_level")
    return level


def configure_logging(level: str) -> None:
    """Sends log records to stderr at `level`; safe to call more than once."""
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)
