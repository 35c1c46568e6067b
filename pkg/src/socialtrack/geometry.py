"""Bounding-box primitives: IoU, non-max suppression, anchors, centroid and depth.

Boxes are ``(left, top, width, height)`` in continuous pixel coordinates.
Areas use the open-interval convention (no +1 pixel correction).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import ParameterError

# Table of anchor hyperparameters per detector: sizes p, ratios r, NMS IoU threshold.
ANCHOR_PRESETS = {
    "faster_rcnn": {"sizes": (0.25, 0.5, 1.0), "ratios": (0.5, 1.0, 2.0), "nms_iou": 0.7},
    "ssd": {"sizes": (0.2, 0.57, 0.95), "ratios": (0.3, 0.5, 1.0), "nms_iou": 0.6},
    "yolo_v3": {"sizes": (0.25, 0.5, 1.0), "ratios": (0.5, 1.0, 2.0), "nms_iou": 0.7},
}


@dataclass(frozen=True)
class BoundingBox:
    x: float
    y: float
    w: float
    h: float

    def __post_init__(self):
        for name in ("x", "y", "w", "h"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"box field {name} must be finite, got {value!r}")
        if not (self.w > 0 and self.h > 0):
            raise ParameterError(f"box width and height must be positive, got w={self.w}, h={self.h}")

    @property
    def area(self) -> float:
        return self.w * self.h

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.x, self.y, self.w, self.h)

    def to_xyah(self) -> tuple[float, float, float, float]:
        """Centroid, aspect ratio ``w/h`` and height: the tracker's measurement."""
        return (self.x + self.w / 2.0, self.y + self.h / 2.0, self.w / self.h, self.h)

    @classmethod
    def from_xyah(cls, u: float, v: float, aspect: float, h: float) -> "BoundingBox":
        w = aspect * h
        return cls(u - w / 2.0, v - h / 2.0, w, h)


@dataclass(frozen=True)
class ScoredBox:
    box: BoundingBox
    score: float

    def __post_init__(self):
        if not (0.0 <= self.score <= 1.0):
            raise ParameterError(f"score must lie in [0, 1], got {self.score!r}")


@dataclass(frozen=True)
class Anchor:
    center_x: float
    center_y: float
    w: float
    h: float
    size: float
    ratio: float


def iou(a: BoundingBox, b: BoundingBox) -> float:
    ix = min(a.x + a.w, b.x + b.w) - max(a.x, b.x)
    iy = min(a.y + a.h, b.y + b.h) - max(a.y, b.y)
    if ix <= 0 or iy <= 0:
        return 0.0
    inter = ix * iy
    return inter / (a.area + b.area - inter)


def boxes_to_array(boxes: Iterable[BoundingBox]) -> np.ndarray:
    return np.array([b.as_tuple() for b in boxes], dtype=np.float64).reshape(-1, 4)


def iou_matrix(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Vectorized IoU between every row of ``a`` (n, 4) and ``b`` (m, 4), xywh format."""
    a = np.asarray(a, dtype=np.float64).reshape(-1, 4)
    b = np.asarray(b, dtype=np.float64).reshape(-1, 4)
    ax2, ay2 = a[:, 0] + a[:, 2], a[:, 1] + a[:, 3]
    bx2, by2 = b[:, 0] + b[:, 2], b[:, 1] + b[:, 3]
    iw = np.minimum(ax2[:, None], bx2[None, :]) - np.maximum(a[:, None, 0], b[None, :, 0])
    ih = np.minimum(ay2[:, None], by2[None, :]) - np.maximum(a[:, None, 1], b[None, :, 1])
    inter = np.clip(iw, 0, None) * np.clip(ih, 0, None)
    union = (a[:, 2] * a[:, 3])[:, None] + (b[:, 2] * b[:, 3])[None, :] - inter
    return inter / union


def nms(candidates: Sequence[ScoredBox], iou_threshold: float) -> list[ScoredBox]:
    """Greedy non-max suppression.

    Candidates are visited in descending score (ties keep input order); a
    candidate is dropped when its IoU with an already kept box is at least
    ``iou_threshold``.
    """
    if not (0.0 < iou_threshold <= 1.0):
        raise ParameterError(f"iou_threshold must lie in (0, 1], got {iou_threshold!r}")
    if not candidates:
        return []
    scores = np.array([c.score for c in candidates])
    order = np.argsort(-scores, kind="stable")
    boxes = boxes_to_array(c.box for c in candidates)
    overlaps = iou_matrix(boxes, boxes)
    suppressed = np.zeros(len(candidates), dtype=bool)
    kept = []
    for idx in order:
        if suppressed[idx]:
            continue
        kept.append(candidates[idx])
        suppressed |= overlaps[idx] >= iou_threshold
    return kept


def generate_anchors(
    image_w: float,
    image_h: float,
    sizes: Sequence[float],
    ratios: Sequence[float],
    locations: Sequence[tuple[float, float]],
) -> list[Anchor]:
    """Anchors of ``image_w*p*sqrt(r) x image_h*p*sqrt(r)`` at every location.

    Order is location-major, then size, then ratio.
    """
    if not (image_w > 0 and image_h > 0):
        raise ParameterError("image dimensions must be positive")
    for p in sizes:
        if not (0.0 < p <= 1.0):
            raise ParameterError(f"anchor size must lie in (0, 1], got {p!r}")
    for r in ratios:
        if not r > 0:
            raise ParameterError(f"anchor ratio must be positive, got {r!r}")
    anchors = []
    for cx, cy in locations:
        for p in sizes:
            for r in ratios:
                scale = p * math.sqrt(r)
                anchors.append(Anchor(cx, cy, image_w * scale, image_h * scale, p, r))
    return anchors


def centroid(box: BoundingBox) -> tuple[float, float]:
    return (box.x + box.w / 2.0, box.y + box.h / 2.0)


def depth_estimate(box: BoundingBox, precedence: str = "printed") -> float:
    """Camera-depth proxy from box width and height.

    ``precedence="printed"`` evaluates ``(2*3.14*180) / (w + h*360) * 1000 + 3``
    literally; ``"grouped"`` uses ``(w + h) * 360`` in the denominator.
    """
    if precedence == "printed":
        denom = box.w + box.h * 360
    elif precedence == "grouped":
        denom = (box.w + box.h) * 360
    else:
        raise ParameterError(f"unknown precedence {precedence!r}")
    return (2 * 3.14 * 180) / denom * 1000 + 3
