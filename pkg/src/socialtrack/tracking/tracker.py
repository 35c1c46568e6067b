"""Tracking-by-detection state machine."""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..errors import ParameterError
from ..geometry import BoundingBox
from .. import _backend
from .association import min_cost_matching
from .kalman import CHI2INV95_4DOF, KalmanFilter, KalmanState, Measurement, NoiseModel


class TrackStatus(str, enum.Enum):
    TENTATIVE = "tentative"
    CONFIRMED = "confirmed"
    DELETED = "deleted"


@dataclass
class Detection:
    box: BoundingBox
    confidence: float = 1.0
    descriptor: np.ndarray | None = None

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise ParameterError(f"confidence must lie in [0, 1], got {self.confidence!r}")
        if self.descriptor is not None:
            d = np.asarray(self.descriptor, dtype=np.float64).ravel()
            if d.size < 2 or abs(math.sqrt(d @ d) - 1.0) > 1e-6:
                raise ParameterError("descriptor must be a unit vector of dimension >= 2")
            self.descriptor = d


@dataclass
class TrackerConfig:
    gate_mahalanobis: float = CHI2INV95_4DOF
    gate_cosine: float = 0.2
    # None: 0.0 when the frame carries descriptors, 1.0 otherwise
    lambda_weight: float | None = None
    max_age: int = 30
    n_init: int = 3
    gallery_capacity: int = 100
    noise: NoiseModel = field(default_factory=NoiseModel)

    def __post_init__(self):
        if not (self.gate_mahalanobis > 0 and self.gate_cosine > 0):
            raise ParameterError("gating thresholds must be positive")
        if self.lambda_weight is not None and not (0.0 <= self.lambda_weight <= 1.0):
            raise ParameterError("lambda_weight must lie in [0, 1]")
        if self.max_age < 0 or self.n_init < 1 or self.gallery_capacity < 1:
            raise ParameterError("max_age >= 0, n_init >= 1 and gallery_capacity >= 1 required")


class Gallery:
    """Most recent ``capacity`` unit descriptors of a track, oldest evicted first.

    The backing buffer is always fully populated: slots not yet written hold
    copies of the first descriptor, which never changes a min/max over the
    gallery. That keeps every track's buffer the same shape so the tracker
    can score all tracks with one matrix product.
    """

    def __init__(self, capacity: int):
        self.capacity = capacity
        self.buffer: np.ndarray | None = None
        self._count = 0
        self._next = 0

    def append(self, descriptor: np.ndarray) -> None:
        if self.buffer is None:
            self.buffer = np.tile(descriptor, (self.capacity, 1))
        elif descriptor.shape[0] != self.buffer.shape[1]:
            raise ParameterError("descriptor dimension changed within a track")
        else:
            self.buffer[self._next] = descriptor
        self._next = (self._next + 1) % self.capacity
        self._count = min(self._count + 1, self.capacity)

    def __len__(self) -> int:
        return self._count

    def __iter__(self):
        """Descriptors in chronological order."""
        if self.buffer is None:
            return iter(())
        start = self._next if self._count == self.capacity else 0
        order = [(start + i) % self.capacity for i in range(self._count)]
        return iter(self.buffer[order])


@dataclass
class Track:
    id: int
    mean: np.ndarray
    covariance: np.ndarray
    status: TrackStatus = TrackStatus.TENTATIVE
    hits: int = 1
    frames_since_update: int = 0
    age: int = 1
    gallery: Gallery = field(default_factory=lambda: Gallery(100))
    last_box: BoundingBox | None = None

    @property
    def state(self) -> KalmanState:
        return KalmanState(self.mean, self.covariance)

    @property
    def is_confirmed(self) -> bool:
        return self.status is TrackStatus.CONFIRMED

    def to_box(self) -> BoundingBox:
        u, v, aspect, h = self.mean[:4]
        return BoundingBox.from_xyah(float(u), float(v), float(aspect), float(h))


@dataclass(frozen=True)
class TrackEvent:
    kind: str  # "created" | "confirmed" | "deleted"
    track_id: int


def associate(
    tracks: Sequence[Track],
    detections: Sequence[Detection],
    kf: KalmanFilter,
    config: TrackerConfig,
    lambda_weight: float,
):
    """Gated min-cost assignment of detections to (already predicted) tracks.

    Returns ``(matches, unmatched_track_ids, unmatched_detection_indices)``,
    ``matches`` being ``(track_id, detection_index)`` pairs.
    """
    if not tracks or not detections:
        return [], [t.id for t in tracks], list(range(len(detections)))
    means = np.stack([t.mean for t in tracks])
    covs = np.stack([t.covariance for t in tracks])
    meas = np.array([d.box.to_xyah() for d in detections])
    pairs, rows_left, cols_left = _match(
        means, covs, [t.gallery for t in tracks], detections, meas, kf, config, lambda_weight
    )
    return [(tracks[r].id, c) for r, c in pairs], [tracks[r].id for r in rows_left], cols_left


def association_matrices(means, covs, galleries, detections, meas, kf: KalmanFilter,
                         config: TrackerConfig):
    """Motion distance ``d1``, appearance distance ``d2`` and the joint gate.

    ``d2`` is scored only inside the motion gate; outside it the value is
    2.0, which is harmless since those pairs are inadmissible anyway. Pairs
    where the track has no gallery or the detection no descriptor get
    ``d2 = 0``, so the appearance gate passes vacuously.
    """
    proj_means, proj_covs = kf.project_many(means, covs)
    d1 = _backend.mahalanobis_matrix(proj_means, proj_covs, meas)
    motion_ok = d1 < config.gate_mahalanobis
    d2 = np.where(motion_ok, 0.0, 2.0)
    rows = [i for i, g in enumerate(galleries) if g.buffer is not None]
    cols = [j for j, d in enumerate(detections) if d.descriptor is not None]
    if rows and cols:
        block = np.ix_(rows, cols)
        sub_mask = motion_ok[block]
        if sub_mask.any():
            desc = np.stack([detections[j].descriptor for j in cols])
            bufs = [galleries[i].buffer for i in rows]
            if bufs[0].shape[1] != desc.shape[1]:
                raise ParameterError(
                    f"descriptor dimension {desc.shape[1]} does not match gallery {bufs[0].shape[1]}"
                )
            d2[block] = _backend.gated_cosine_distance(bufs, desc, sub_mask)
    admissible = motion_ok & (d2 < config.gate_cosine)
    return d1, d2, admissible


def _match(means, covs, galleries, detections, meas, kf, config, lambda_weight):
    d1, d2, admissible = association_matrices(means, covs, galleries, detections, meas, kf, config)
    cost = lambda_weight * d1 + (1.0 - lambda_weight) * d2
    return min_cost_matching(cost, admissible)


class Tracker:
    """Single-owner tracker; call :meth:`step` once per frame, in frame order."""

    def __init__(self, config: TrackerConfig | None = None):
        self.config = config or TrackerConfig()
        self.kf = KalmanFilter(self.config.noise)
        self.tracks: list[Track] = []
        self._ids = itertools.count(1)

    def _lambda_for(self, detections: Sequence[Detection]) -> float:
        if self.config.lambda_weight is not None:
            return self.config.lambda_weight
        return 0.0 if any(d.descriptor is not None for d in detections) else 1.0

    def step(self, detections: Sequence[Detection]):
        """Advance one frame. Returns ``(live_tracks, events)``."""
        cfg = self.config
        events: list[TrackEvent] = []
        tracks = self.tracks
        matches: list[tuple[int, int]] = []
        unmatched_dets = list(range(len(detections)))
        missed: list[int] = []

        if tracks:
            means, covs = self.kf.predict_many(
                np.stack([t.mean for t in tracks]), np.stack([t.covariance for t in tracks])
            )
            missed = list(range(len(tracks)))
            if detections:
                meas = np.array([d.box.to_xyah() for d in detections])
                matches, missed, unmatched_dets = _match(
                    means, covs, [t.gallery for t in tracks], detections, meas,
                    self.kf, cfg, self._lambda_for(detections),
                )
                if matches:
                    rows = [r for r, _ in matches]
                    cols = [c for _, c in matches]
                    means[rows], covs[rows] = self.kf.update_many(means[rows], covs[rows], meas[cols])
            for t, mu, cov in zip(tracks, means, covs):
                t.mean, t.covariance = mu, cov
                t.age += 1
                t.frames_since_update += 1

        for r, j in matches:
            t, det = tracks[r], detections[j]
            t.hits += 1
            t.frames_since_update = 0
            t.last_box = det.box
            if det.descriptor is not None:
                t.gallery.append(det.descriptor)
            if t.status is TrackStatus.TENTATIVE and t.hits >= cfg.n_init:
                t.status = TrackStatus.CONFIRMED
                events.append(TrackEvent("confirmed", t.id))

        for r in missed:
            t = tracks[r]
            if t.status is TrackStatus.TENTATIVE or t.frames_since_update > cfg.max_age:
                t.status = TrackStatus.DELETED
                events.append(TrackEvent("deleted", t.id))

        for j in unmatched_dets:
            events.append(TrackEvent("created", self._initiate(detections[j]).id))

        self.tracks = [t for t in self.tracks if t.status is not TrackStatus.DELETED]
        return list(self.tracks), events

    def _initiate(self, det: Detection) -> Track:
        state = self.kf.initiate(Measurement.from_box(det.box))
        track = Track(
            id=next(self._ids),
            mean=state.mean,
            covariance=state.covariance,
            gallery=Gallery(self.config.gallery_capacity),
            last_box=det.box,
        )
        if det.descriptor is not None:
            track.gallery.append(det.descriptor)
        if self.config.n_init <= 1:
            track.status = TrackStatus.CONFIRMED
        self.tracks.append(track)
        return track


def tracker_step(tracker: Tracker, frame_detections: Sequence[Detection]):
    return tracker.step(frame_detections)
