from pathlib import Path
from typing import Any, Optional

import confuse  # type: ignore
import yaml

config = confuse.Configuration("HVI", __name__)
config.set_env()


def read_flat(path: Path) -> dict[str, Any]:
    """
    Parses `key = value` lines into a nested dict. Dotted keys address nested
    values, `#` starts a comment and values are read as YAML scalars.
    """
    result: dict[str, Any] = {}
    for number, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise confuse.ConfigError(f"{path}:{number}: expected 'key = value'")

        key, value = (part.strip() for part in line.split("=", 1))
        node = result
        *parents, leaf = key.replace("-", "_").split(".")
        for name in parents:
            node = node.setdefault(name, {})
        node[leaf] = _scalar(value) if value else None
    return result


def _scalar(value: str) -> Any:
    # ranges like 1:3:30 would be read as base 60 integers
    if ":" in value:
        return value
    parsed = yaml.safe_load(value)
    if isinstance(parsed, str):
        try:
            return float(parsed)
        except ValueError:
            return parsed
    return parsed


def load_settings(
    path: Optional[Path] = None, overrides: Optional[dict[str, Any]] = None
) -> confuse.Configuration:
    """
    Fresh configuration layered as defaults < environment < file < overrides.
    """
    settings = confuse.Configuration("HVI", __name__)
    settings.set_env()
    if path is not None:
        path = Path(path)
        if path.suffix in (".yaml", ".yml"):
            settings.set_file(str(path))
        else:
            settings.set(read_flat(path))
    if overrides:
        settings.set_args({k: v for k, v in overrides.items() if v is not None})
    return settings
