"""Environment-driven settings and fixture loading."""

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from .errors import FixtureError, InputError

logger = logging.getLogger(__name__)

PACKAGED_FIXTURES = Path(__file__).parent / "fixtures"
FIXTURE_NAMES = ("sl3", "sl4")
ENV_VARS = (
    "SLODOWY_LOG_LEVEL",
    "SLODOWY_FIXTURES",
    "SLODOWY_JOBS",
    "SLODOWY_MAX_DIM",
    "SLODOWY_HOST",
    "SLODOWY_PORT",
)


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as e:
        raise InputError(f"{name} must be an integer, got {raw!r}") from e


@dataclass(frozen=True)
class Settings:
    log_level: str = "ERROR"
    fixtures: Path = field(default=PACKAGED_FIXTURES)
    jobs: int = 1
    max_dim: int = 20000
    host: str = "127.0.0.1"
    port: int = 5555

    @classmethod
    def from_env(cls) -> "Settings":
        fixtures = os.getenv("SLODOWY_FIXTURES")
        return cls(
            log_level=os.getenv("SLODOWY_LOG_LEVEL", "ERROR").upper(),
            fixtures=Path(fixtures) if fixtures else PACKAGED_FIXTURES,
            jobs=max(1, _env_int("SLODOWY_JOBS", 1)),
            max_dim=_env_int("SLODOWY_MAX_DIM", 20000),
            host=os.getenv("SLODOWY_HOST", "127.0.0.1"),
            port=_env_int("SLODOWY_PORT", 5555),
        )


def load_fixture(name: str, directory: Path | str | None = None) -> dict[str, Any]:
    """Read ``<name>.json`` from ``directory`` (default: SLODOWY_FIXTURES or the packaged data)."""
    if name not in FIXTURE_NAMES:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(FIXTURE_NAMES)}")
    base = Path(directory) if directory is not None else Settings.from_env().fixtures
    path = base / f"{name}.json"
    logger.debug("loading fixture %s", path)
    try:
        with path.open(encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as e:
        raise FixtureError(f"fixture not found: {path}", path=str(path)) from e
    except (OSError, json.JSONDecodeError) as e:
        raise FixtureError(f"cannot read fixture {path}: {e}", path=str(path)) from e
    if not isinstance(data, dict) or data.get("name") != name:
        raise FixtureError(f"fixture {path} does not describe {name}", path=str(path))
    return data
