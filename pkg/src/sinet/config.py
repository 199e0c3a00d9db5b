"""Line-oriented configuration with environment-variable overrides.

Config files hold ``key = value`` lines (``#`` starts a comment).
Resolution order: explicit CLI value, then ``SINET_<KEY>`` environment
variable, then config file, then the built-in default.
"""

from __future__ import annotations

import os
from pathlib import Path

from .errors import ValidationError

ENV_PREFIX = "SINET_"

DEFAULTS = {
    "ledger": "runs.jsonl",
    "workers": "2",
    "host": "127.0.0.1",
    "port": "8772",
}


def load_config(path: str | Path | None) -> dict[str, str]:
    if path is None:
        return {}
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"{path}:{lineno}: expected 'key = value': {raw!r}")
        key, value = line.split("=", 1)
        values[key.strip()] = value.strip()
    return values


def resolve(
    key: str,
    cli_value: str | None = None,
    config: dict[str, str] | None = None,
    default: str | None = None,
) -> str | None:
    if cli_value is not None:
        return cli_value
    env = os.environ.get(ENV_PREFIX + key.upper())
    if env is not None:
        return env
    if config and key in config:
        return config[key]
    if default is not None:
        return default
    return DEFAULTS.get(key)
