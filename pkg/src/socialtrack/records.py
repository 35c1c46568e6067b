"""Line-delimited JSON record formats shared by ingest, simulation and evaluation.

One JSON object per line, UTF-8::

    {"frame_id": 3, "timestamp_ms": 120.0, "x": 10.5, "y": 40.0, "w": 32.0,
     "h": 80.0, "confidence": 0.91, "descriptor": [0.6, 0.8]}

``descriptor`` is optional. Ground-truth records add ``"identity"``. A
record carrying only ``frame_id`` and ``timestamp_ms`` marks a frame with
no detections, so empty frames still advance the tracker.
"""
from __future__ import annotations

import io
import json
import logging
import math
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, TextIO

import numpy as np

from .errors import FormatError, InputError, ParameterError
from .geometry import BoundingBox

logger = logging.getLogger(__name__)

_BOX_KEYS = ("x", "y", "w", "h")


@dataclass
class DetectionRecord:
    frame_id: int
    timestamp_ms: float
    box: BoundingBox
    confidence: float
    descriptor: np.ndarray | None = None
    identity: str | int | None = None

    def to_dict(self) -> dict:
        out = {
            "frame_id": self.frame_id,
            "timestamp_ms": self.timestamp_ms,
            "x": self.box.x,
            "y": self.box.y,
            "w": self.box.w,
            "h": self.box.h,
            "confidence": self.confidence,
        }
        if self.descriptor is not None:
            out["descriptor"] = [float(v) for v in self.descriptor]
        if self.identity is not None:
            out["identity"] = self.identity
        return out


@dataclass
class FrameBatch:
    frame_id: int
    timestamp_ms: float
    records: list[DetectionRecord] = field(default_factory=list)


@dataclass
class ParsedStream:
    batches: list[FrameBatch]
    skipped: int = 0

    def __iter__(self) -> Iterator[FrameBatch]:
        return iter(self.batches)

    def __len__(self) -> int:
        return len(self.batches)


def dumps(obj) -> str:
    """Canonical single-line JSON (sorted keys, no spaces)."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False)


def frame_marker(frame_id: int, timestamp_ms: float) -> dict:
    return {"frame_id": frame_id, "timestamp_ms": timestamp_ms}


def _number(obj: dict, key: str) -> float:
    value = obj[key]
    if isinstance(value, bool) or not isinstance(value, (int, float)) or not math.isfinite(value):
        raise ParameterError(f"{key} must be a finite number")
    return float(value)


def _parse_header(obj) -> tuple[int, float]:
    if not isinstance(obj, dict):
        raise ParameterError("record must be a JSON object")
    frame_id = obj.get("frame_id")
    if isinstance(frame_id, bool) or not isinstance(frame_id, int):
        raise ParameterError("frame_id must be an integer")
    return frame_id, _number(obj, "timestamp_ms")


def parse_record(obj: dict) -> DetectionRecord:
    frame_id, ts = _parse_header(obj)
    box = BoundingBox(*(_number(obj, k) for k in _BOX_KEYS))
    confidence = _number(obj, "confidence")
    if not 0.0 <= confidence <= 1.0:
        raise ParameterError("confidence must lie in [0, 1]")
    descriptor = None
    if obj.get("descriptor") is not None:
        descriptor = np.asarray(obj["descriptor"], dtype=np.float64)
        if descriptor.ndim != 1 or descriptor.size < 2 or not np.all(np.isfinite(descriptor)):
            raise ParameterError("descriptor must be a finite vector of dimension >= 2")
        if abs(np.linalg.norm(descriptor) - 1.0) > 1e-6:
            raise ParameterError("descriptor must have unit norm")
    return DetectionRecord(frame_id, ts, box, confidence, descriptor, obj.get("identity"))


def _open_lines(source) -> Iterable[str]:
    if isinstance(source, (str, os.PathLike)):
        try:
            with open(source, encoding="utf-8") as fh:
                return fh.read().splitlines()
        except (OSError, UnicodeDecodeError) as exc:
            raise InputError(f"cannot read {source}: {exc}") from exc
    if isinstance(source, io.IOBase) or hasattr(source, "read"):
        return source.read().splitlines()
    return list(source)


def parse_stream(source) -> ParsedStream:
    """Group records into per-frame batches, preserving order.

    ``source`` is a path, an open text file, or an iterable of lines.
    Malformed lines are skipped with a warning; a decreasing ``frame_id``
    raises :class:`FormatError`.
    """
    batches: list[FrameBatch] = []
    skipped = 0
    for lineno, line in enumerate(_open_lines(source), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
            frame_id, ts = _parse_header(obj)
            is_marker = not any(k in obj for k in _BOX_KEYS)
            record = None if is_marker else parse_record(obj)
        except (ValueError, KeyError, TypeError) as exc:
            skipped += 1
            logger.warning("line %d skipped: %s", lineno, exc)
            continue
        if batches and frame_id < batches[-1].frame_id:
            raise FormatError(
                f"line {lineno}: frame_id {frame_id} after {batches[-1].frame_id} (must be non-decreasing)"
            )
        if not batches or frame_id != batches[-1].frame_id:
            batches.append(FrameBatch(frame_id, ts))
        if record is not None:
            batches[-1].records.append(record)
    if skipped:
        logger.warning("%d malformed line(s) skipped", skipped)
    return ParsedStream(batches, skipped)


def write_jsonl(path_or_file, rows: Iterable[dict]) -> None:
    if isinstance(path_or_file, (str, os.PathLike)):
        with open(path_or_file, "w", encoding="utf-8", newline="\n") as fh:
            _write_rows(fh, rows)
    else:
        _write_rows(path_or_file, rows)


def _write_rows(fh: TextIO, rows: Iterable[dict]) -> None:
    for row in rows:
        fh.write(dumps(row))
        fh.write("\n")
