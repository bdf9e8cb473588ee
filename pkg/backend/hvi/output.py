"""
Writing and reading of command artifacts.

An artifact is a CSV table with a `#` provenance line, optionally followed
by a `#` JSON footer, plus an optional JSON summary next to it.
"""
import io
import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional, TextIO

import numpy as np
import pandas as pd

from hvi import __version__

logger = logging.getLogger(__name__)


@dataclass
class Artifact:
    frame: pd.DataFrame
    summary: Optional[dict[str, Any]] = None
    footer: bool = False
    extra: dict[str, pd.DataFrame] = field(default_factory=dict)


def provenance_line(command: str, params: str) -> str:
    return f"# hvi {__version__} {command} {params}".rstrip()


def _plain(value: Any) -> Any:
    """
    JSON-compatible version of numpy scalars, arrays and enums. Non-finite
    floats become null.
    """
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, float):
        return value if math.isfinite(value) else None
    if hasattr(value, "value") and not isinstance(value, (int, str, bool)):
        return value.value
    return value


def dump_summary(summary: dict[str, Any]) -> str:
    return json.dumps(_plain(summary), sort_keys=True)


def _frame_text(frame: pd.DataFrame, digits: int) -> str:
    frame = frame.copy()
    for name in frame.columns:
        if len(frame) and hasattr(frame[name].iloc[0], "value"):
            frame[name] = frame[name].map(lambda v: v.value)
    return frame.to_csv(index=False, float_format=f"%.{digits}g", lineterminator="\n")


def render(
    frame: pd.DataFrame,
    command: str,
    params: str,
    *,
    digits: int = 12,
    footer: Optional[dict[str, Any]] = None,
) -> str:
    text = provenance_line(command, params) + "\n" + _frame_text(frame, digits)
    if footer is not None:
        text += "# " + dump_summary(footer) + "\n"
    return text


def write_artifact(
    artifact: Artifact,
    command: str,
    params: str,
    path: Optional[Path] = None,
    *,
    digits: int = 12,
    stream: Optional[TextIO] = None,
) -> list[Path]:
    """
    Writes the artifact to `path` (plus siblings for extra tables and the
    summary) or, without a path, everything to `stream`. Returns the files
    written.
    """
    footer = artifact.summary if artifact.footer else None
    main = render(artifact.frame, command, params, digits=digits, footer=footer)

    if path is None:
        out = stream if stream is not None else io.StringIO()
        out.write(main)
        for name, frame in artifact.extra.items():
            out.write(render(frame, f"{command}:{name}", params, digits=digits))
        if artifact.summary is not None and not artifact.footer:
            out.write("# " + dump_summary(artifact.summary) + "\n")
        return []

    path = Path(path)
    written = [path]
    path.write_text(main)
    for name, frame in artifact.extra.items():
        extra_path = path.with_name(f"{path.stem}_{name}{path.suffix or '.csv'}")
        extra_path.write_text(
            render(frame, f"{command}:{name}", params, digits=digits)
        )
        written.append(extra_path)
    if artifact.summary is not None:
        summary_path = path.with_suffix(".json")
        summary_path.write_text(dump_summary(artifact.summary) + "\n")
        written.append(summary_path)

    logger.info("wrote %s", ", ".join(str(p) for p in written))
    return written


def read_artifact(source: Path | str | TextIO) -> pd.DataFrame:
    """
    Parses an artifact table, ignoring provenance and footer lines.
    """
    return pd.read_csv(source, comment="#")


def read_footer(path: Path | str) -> Optional[dict[str, Any]]:
    lines = Path(path).read_text().splitlines()
    for line in reversed(lines):
        if line.startswith("# {"):
            return json.loads(line[2:])
    return None
