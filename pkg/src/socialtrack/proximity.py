"""Per-frame social-distance analysis.

Each confirmed person is placed in an ``(x, y, d)`` feature space (box
centroid plus a depth proxy), pairwise L2 distances are computed in one
vectorized pass, and people closer than a position-dependent threshold are
joined into groups (connected components of the closeness graph).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _backend
from .errors import ParameterError
from .geometry import BoundingBox, centroid, depth_estimate

THRESHOLD_MIN = 90.0
THRESHOLD_MAX = 170.0


@dataclass(frozen=True)
class PersonFeature:
    track_id: int
    x: float
    y: float
    d: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.y) and math.isfinite(self.d)):
            raise ParameterError("feature components must be finite")


@dataclass(frozen=True)
class DistanceMatrix:
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SocialGroup:
    members: tuple[int, ...]
    color_index: int


@dataclass(frozen=True)
class ViolationStats:
    n_g: int
    n_p: int
    v_i: float
    estimated_violations: float


def feature_of(box: BoundingBox, track_id: int, depth_precedence: str = "printed") -> PersonFeature:
    x, y = centroid(box)
    return PersonFeature(track_id, x, y, depth_estimate(box, depth_precedence))


def pairwise_l2(
    features: Sequence[PersonFeature], axis_scales: Sequence[float] = (1.0, 1.0, 1.0)
) -> DistanceMatrix:
    pts = np.array([(f.x, f.y, f.d) for f in features], dtype=np.float64).reshape(-1, 3)
    pts = pts * np.asarray(axis_scales, dtype=np.float64)
    diff = pts[:, None, :] - pts[None, :, :]
    return DistanceMatrix(np.sqrt(np.einsum("ijk,ijk->ij", diff, diff)))


def closeness_threshold(
    y: float | np.ndarray,
    frame_h: float,
    lower: float = THRESHOLD_MIN,
    upper: float = THRESHOLD_MAX,
):
    """Pixel threshold growing linearly from ``lower`` at the top of the frame to ``upper`` at the bottom."""
    if not frame_h > 0:
        raise ParameterError("frame_h must be positive")
    frac = np.clip(np.asarray(y, dtype=np.float64), 0.0, frame_h) / frame_h
    out = lower + (upper - lower) * frac
    return float(out) if out.ndim == 0 else out


def closeness_graph(
    matrix: DistanceMatrix,
    features: Sequence[PersonFeature],
    frame_h: float,
    lower: float = THRESHOLD_MIN,
    upper: float = THRESHOLD_MAX,
) -> np.ndarray:
    """Boolean adjacency: distance strictly below the smaller endpoint threshold."""
    if matrix.n != len(features):
        raise ParameterError("distance matrix does not match the feature list")
    thr = closeness_threshold(np.array([f.y for f in features]).reshape(-1), frame_h, lower, upper)
    thr = np.atleast_1d(thr)
    adj = matrix.values < np.minimum(thr[:, None], thr[None, :])
    np.fill_diagonal(adj, False)
    return adj


def build_groups(
    matrix: DistanceMatrix,
    features: Sequence[PersonFeature],
    frame_h: float,
    lower: float = THRESHOLD_MIN,
    upper: float = THRESHOLD_MAX,
) -> list[SocialGroup]:
    if not features:
        return []
    adj = closeness_graph(matrix, features, frame_h, lower, upper)
    labels = _backend.connected_components(adj)
    comps: dict[int, list[int]] = {}
    for f, lab in zip(features, labels.tolist()):
        comps.setdefault(lab, []).append(f.track_id)
    members = sorted(tuple(sorted(c)) for c in comps.values() if len(c) >= 2)
    return [SocialGroup(m, i) for i, m in enumerate(members)]


def violation_stats(groups: Sequence[SocialGroup]) -> ViolationStats:
    n_g = len(groups)
    n_p = sum(len(g.members) for g in groups)
    v_i = n_p / n_g if n_g else 0.0
    return ViolationStats(n_g, n_p, v_i, v_i * n_g)


@dataclass(frozen=True)
class TrackSnapshot:
    id: int
    box: BoundingBox
    status: str


@dataclass(frozen=True)
class FrameReport:
    frame_id: int
    timestamp_ms: float
    tracks: tuple[TrackSnapshot, ...]
    groups: tuple[SocialGroup, ...]
    stats: ViolationStats
    violation: bool = field(default=False)

    def to_dict(self) -> dict:
        return {
            "frame_id": self.frame_id,
            "timestamp_ms": self.timestamp_ms,
            "tracks": [
                {"id": t.id, "x": t.box.x, "y": t.box.y, "w": t.box.w, "h": t.box.h, "status": t.status}
                for t in self.tracks
            ],
            "groups": [{"members": list(g.members), "color_index": g.color_index} for g in self.groups],
            "stats": {
                "n_g": self.stats.n_g,
                "n_p": self.stats.n_p,
                "v_i": self.stats.v_i,
                "estimated_violations": self.stats.estimated_violations,
            },
            "violation": self.violation,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "FrameReport":
        return cls(
            frame_id=data["frame_id"],
            timestamp_ms=data["timestamp_ms"],
            tracks=tuple(
                TrackSnapshot(t["id"], BoundingBox(t["x"], t["y"], t["w"], t["h"]), t["status"])
                for t in data["tracks"]
            ),
            groups=tuple(SocialGroup(tuple(g["members"]), g["color_index"]) for g in data["groups"]),
            stats=ViolationStats(**data["stats"]),
            violation=data["violation"],
        )


def frame_report(
    tracks: Sequence[TrackSnapshot],
    groups: Sequence[SocialGroup],
    stats: ViolationStats,
    frame_id: int,
    timestamp_ms: float,
) -> FrameReport:
    return FrameReport(frame_id, timestamp_ms, tuple(tracks), tuple(groups), stats, stats.n_g >= 1)
