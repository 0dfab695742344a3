"""
Output files: checkpoint CSV and JSON reports
"""

import json
import logging
from pathlib import Path
from typing import Any, Union

import pandas as pd
from pydantic import BaseModel

from model.series import TimeSeries

logger = logging.getLogger(__name__)


def write_series_csv(series: TimeSeries, path: Union[str, Path]) -> Path:
    """Header ``n,E,M_1,...,M_k``, integer fields, '\\n' line endings."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    series.to_frame().to_csv(path, index=False, lineterminator="\n")
    logger.info("Wrote %d checkpoints to %s", len(series), path)
    return path


def read_series_csv(path: Union[str, Path]) -> TimeSeries:
    frame = pd.read_csv(path, dtype="int64")
    return TimeSeries.from_frame(frame)


def to_jsonable(payload: Any) -> Any:
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, dict):
        return {key: to_jsonable(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [to_jsonable(value) for value in payload]
    if isinstance(payload, Path):
        return str(payload)
    return payload


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), indent=2) + "\n"


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    """Write a model or plain structure as indented JSON."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    logger.info("Wrote %s", path)
    return path
