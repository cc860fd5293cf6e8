"""Configuration lookup shared by every pipeline stage.

Precedence per key: explicit command-line value, DOCALIGN_<KEY>
environment variable, the stage's section in the config file, the file's
top level, then the built-in default.
"""

from __future__ import annotations

import json
import os
from typing import Any, Callable, Optional

from .errors import ConfigurationError

ENV_PREFIX = "DOCALIGN_"


class PipelineConfig:
    def __init__(self, data: Optional[dict] = None):
        self.data = dict(data or {})

    @classmethod
    def load(cls, path: Optional[str]) -> "PipelineConfig":
        if path is None:
            return cls({})
        try:
            with open(path, encoding="utf-8") as fh:
                data = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigurationError("cannot read config %s: %s" % (path, exc))
        if not isinstance(data, dict):
            raise ConfigurationError("config root must be a JSON object")
        return cls(data)

    def resolve(
        self,
        key: str,
        stage: Optional[str] = None,
        cli: Optional[Any] = None,
        default: Optional[Any] = None,
        cast: Optional[Callable] = None,
    ) -> Any:
        value = cli
        if value is None:
            env = os.environ.get(ENV_PREFIX + key.upper().replace("-", "_"))
            if env is not None:
                value = env
        if value is None and stage is not None:
            section = self.data.get(stage)
            if isinstance(section, dict) and key in section:
                value = section[key]
        if value is None:
            top = self.data.get(key)
            if top is not None and not isinstance(top, dict):
                value = top
        if value is None:
            value = default
        if value is None or cast is None:
            return value
        try:
            return cast(value)
        except (TypeError, ValueError):
            raise ConfigurationError("bad value for %s: %r" % (key, value))
