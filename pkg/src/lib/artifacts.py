"""Artifact writing with all-or-nothing staging.

Every subcommand writes through a ``StagedOutput``: files land in a hidden
staging directory and are moved into the output directory only when the
command body finishes without an exception.
"""

import json
import logging
import math
import os
import shutil
from pathlib import Path
from types import TracebackType
from typing import Any

import numpy as np
import pandas as pd

from src.lib.config import CSV_FLOAT_FORMAT
from src.lib.errors import ArtifactError

logger = logging.getLogger(__name__)


def _json_safe(value: Any) -> Any:
    """Replace non-finite floats with None and numpy scalars with Python ones."""
    if isinstance(value, dict):
        return {str(k): _json_safe(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_json_safe(v) for v in value]
    if isinstance(value, np.ndarray):
        return _json_safe(value.tolist())
    if hasattr(value, "item") and not isinstance(value, (str, bytes)):
        value = value.item()
    if isinstance(value, float) and not math.isfinite(value):
        return None
    return value


def dump_json(payload: dict[str, Any]) -> str:
    """Serialize with sorted keys and fixed indentation (stable across reruns)."""
    return json.dumps(_json_safe(payload), sort_keys=True, indent=2, allow_nan=False) + "\n"


def write_json(path: Path, payload: dict[str, Any]) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(dump_json(payload), encoding="utf-8", newline="\n")
    except OSError as e:
        raise ArtifactError(f"Failed to write {path}: {e}") from e


def read_json(path: Path) -> dict[str, Any]:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except FileNotFoundError as e:
        raise ArtifactError(f"Artifact not found: {path}") from e
    except (OSError, json.JSONDecodeError) as e:
        raise ArtifactError(f"Failed to read {path}: {e}") from e
    if not isinstance(data, dict):
        raise ArtifactError(f"Expected a JSON object in {path}")
    return data


def write_csv(path: Path, frame: pd.DataFrame) -> None:
    """Write a frame with the fixed float format and ``\\n`` line endings."""
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    except OSError as e:
        raise ArtifactError(f"Failed to write {path}: {e}") from e


class StagedOutput:
    """
    Collect a command's artifacts and publish them atomically.

    Example:
        >>> with StagedOutput(Path("out"), "ingest") as staged:
        ...     staged.write_csv("panel.csv", frame)
    """

    def __init__(self, out_dir: Path | str, stage: str):
        """
        Args:
            out_dir: Final output directory
            stage: Subcommand name, used for the staging directory name
        """
        self.out_dir = Path(out_dir)
        self.stage = stage
        self.staging_dir = self.out_dir / f".staging-{stage}"
        self.written: list[str] = []

    def __enter__(self) -> "StagedOutput":
        try:
            if self.staging_dir.exists():
                shutil.rmtree(self.staging_dir)
            self.staging_dir.mkdir(parents=True)
        except OSError as e:
            raise ArtifactError(f"Cannot create staging directory {self.staging_dir}: {e}") from e
        return self

    def path(self, relative: str) -> Path:
        """Staging path for an artifact; records it for publication."""
        if relative not in self.written:
            self.written.append(relative)
        target = self.staging_dir / relative
        target.parent.mkdir(parents=True, exist_ok=True)
        return target

    def write_json(self, relative: str, payload: dict[str, Any]) -> None:
        write_json(self.path(relative), payload)

    def write_csv(self, relative: str, frame: pd.DataFrame) -> None:
        write_csv(self.path(relative), frame)

    def write_text(self, relative: str, text: str) -> None:
        try:
            self.path(relative).write_text(text, encoding="utf-8", newline="\n")
        except OSError as e:
            raise ArtifactError(f"Failed to write {relative}: {e}") from e

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> bool:
        if exc_type is not None:
            logger.warning(f"{self.stage} failed; discarding {len(self.written)} staged artifacts")
            shutil.rmtree(self.staging_dir, ignore_errors=True)
            return False

        try:
            for relative in self.written:
                source = self.staging_dir / relative
                if not source.exists():
                    continue
                target = self.out_dir / relative
                target.parent.mkdir(parents=True, exist_ok=True)
                os.replace(source, target)
            shutil.rmtree(self.staging_dir, ignore_errors=True)
        except OSError as e:
            raise ArtifactError(f"Failed to publish artifacts into {self.out_dir}: {e}") from e

        logger.info(f"{self.stage}: wrote {len(self.written)} artifacts to {self.out_dir}")
        return False
