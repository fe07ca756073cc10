from __future__ import annotations

from dataclasses import dataclass
import os
from pathlib import Path

ENV_PREFIX = "UNILIN_"
DEFAULT_HOST = "127.0.0.1"
DEFAULT_PORT = 8000


@dataclass(frozen=True, slots=True)
class ServerSettings:
    host: str = DEFAULT_HOST
    port: int = DEFAULT_PORT


def load_env_file(base_dir: Path, filename: str = ".env", prefix: str = ENV_PREFIX) -> dict[str, str]:
    """Load ``UNILIN_*`` KEY=VALUE pairs from a local .env file.

    Variables already set in the environment win. Returns what was applied.
    """
    env_path = base_dir / filename
    applied: dict[str, str] = {}
    if not env_path.exists():
        return applied
    for raw_line in env_path.read_text(encoding="utf-8").splitlines():
        line = raw_line.strip()
        if line.startswith("export "):
            line = line[len("export ") :].strip()
        if not line or line.startswith("#") or "=" not in line:
            continue
        key, value = (part.strip() for part in line.split("=", 1))
        if not key.startswith(prefix) or key in os.environ:
            continue
        os.environ[key] = applied[key] = value.strip('"').strip("'")
    return applied


def server_settings() -> ServerSettings:
    host = os.getenv(f"{ENV_PREFIX}HOST", "").strip() or DEFAULT_HOST
    raw_port = os.getenv(f"{ENV_PREFIX}PORT", "").strip()
    if not raw_port:
        return ServerSettings(host)
    try:
        port = int(raw_port)
    except ValueError:
        raise ValueError(f"{ENV_PREFIX}PORT must be an integer, got {raw_port!r}") from None
    if not 0 < port < 65536:
        raise ValueError(f"{ENV_PREFIX}PORT out of range: {port}")
    return ServerSettings(host, port)
