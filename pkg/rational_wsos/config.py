"""
Environment-driven defaults for rational_wsos

Settings are read from the process environment on each call so tests and
the CLI can override them without reloading the package.
"""

import logging
import os

__all__ = ["get_sqrt_bits", "get_max_sqrt_bits", "get_log_level", "configure_logging"]

DEFAULT_SQRT_BITS = 64
DEFAULT_MAX_SQRT_BITS = 4096
DEFAULT_LOG_LEVEL = "WARNING"


def _read_positive_int(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def get_sqrt_bits() -> int:
    """
    Precision used for square-root enclosures.

    Returns:
        int: value of WSOS_SQRT_BITS, or 64 when unset
    """
    return _read_positive_int("WSOS_SQRT_BITS", DEFAULT_SQRT_BITS)


def get_max_sqrt_bits() -> int:
    """
    Ceiling for automatic precision doubling when a rounding interval is empty.

    Returns:
        int: value of WSOS_MAX_SQRT_BITS, or 4096 when unset
    """
    return _read_positive_int("WSOS_MAX_SQRT_BITS", DEFAULT_MAX_SQRT_BITS)


def get_log_level() -> str:
    """
    Log level name for the package logger.

    Returns:
        str: WSOS_LOG_LEVEL upper-cased, or WARNING when unset
    """
    level = os.environ.get("WSOS_LOG_LEVEL", DEFAULT_LOG_LEVEL).strip().upper()
    if not isinstance(logging.getLevelName(level), int):
        raise ValueError(f"WSOS_LOG_LEVEL must be a logging level name, got {level!r}")
    return level


def configure_logging(verbose: bool = False) -> None:
    """
    Configure root logging once for command-line use.

    Args:
        verbose: force DEBUG regardless of WSOS_LOG_LEVEL
    """
    level = logging.DEBUG if verbose else getattr(logging, get_log_level())
    logging.basicConfig(
        level=level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
    )
    logging.getLogger("rational_wsos").setLevel(level)
