"""Seeded synthetic pedestrian scenes: ground truth plus noisy detections."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from ..geometry import BoundingBox
from ..records import DetectionRecord


@dataclass(frozen=True)
class ScenarioConfig:
    frame_width: float = 1280.0
    frame_height: float = 720.0
    n_people: int = 10
    n_frames: int = 100
    speed_min: float = 0.5  # pixels/frame
    speed_max: float = 3.0
    height_min: float = 90.0
    height_max: float = 150.0
    aspect: float = 0.4
    noise_std: float = 0.0  # pixels, applied to x, y, w, h
    miss_rate: float = 0.0
    fp_rate: float = 0.0  # expected false positives per frame
    descriptor_dim: int = 16  # 0 disables descriptors
    descriptor_noise: float = 0.05
    fps: float = 25.0
    seed: int = 0
    # optional fixed centroids, one per person; overrides random placement
    positions: tuple[tuple[float, float], ...] | None = None

    def __post_init__(self):
        if self.frame_width <= 0 or self.frame_height <= 0 or self.fps <= 0:
            raise ParameterError("frame dimensions and fps must be positive")
        if self.n_people < 0 or self.n_frames < 0:
            raise ParameterError("n_people and n_frames must be non-negative")
        if not (0 <= self.speed_min <= self.speed_max):
            raise ParameterError("need 0 <= speed_min <= speed_max")
        if not (0 < self.height_min <= self.height_max) or self.aspect <= 0:
            raise ParameterError("box height range and aspect must be positive")
        if self.noise_std < 0 or self.fp_rate < 0 or self.descriptor_noise < 0:
            raise ParameterError("noise and rates must be non-negative")
        if not (0.0 <= self.miss_rate < 1.0):
            raise ParameterError("miss_rate must lie in [0, 1)")
        if self.descriptor_dim == 1 or self.descriptor_dim < 0:
            raise ParameterError("descriptor_dim must be 0 or >= 2")
        if self.positions is not None and len(self.positions) != self.n_people:
            raise ParameterError("positions must list one centroid per person")


@dataclass
class GroundTruthFrame:
    frame_id: int
    timestamp_ms: float
    boxes: list[tuple[BoundingBox, int]] = field(default_factory=list)


@dataclass
class Scenario:
    truth: list[GroundTruthFrame]
    detections: list[list[DetectionRecord]]
    n_opportunities: int = 0
    n_missed: int = 0
    n_false_positives: int = 0


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def generate_scenario(config: ScenarioConfig) -> Scenario:
    """Constant-velocity walkers reflecting off the frame edges.

    Every random draw comes from one ``numpy`` generator seeded with
    ``config.seed`` in a fixed order, so output is reproducible bit for bit.
    """
    cfg = config
    rng = np.random.default_rng(cfg.seed)
    W, H = cfg.frame_width, cfg.frame_height

    heights = rng.uniform(cfg.height_min, cfg.height_max, cfg.n_people)
    widths = heights * cfg.aspect
    if cfg.positions is not None:
        pos = np.array(cfg.positions, dtype=np.float64).reshape(-1, 2)
    else:
        pos = np.column_stack([
            rng.uniform(widths / 2, W - widths / 2),
            rng.uniform(heights / 2, H - heights / 2),
        ]) if cfg.n_people else np.zeros((0, 2))
    speed = rng.uniform(cfg.speed_min, cfg.speed_max, cfg.n_people)
    heading = rng.uniform(0, 2 * np.pi, cfg.n_people)
    vel = np.column_stack([speed * np.cos(heading), speed * np.sin(heading)])
    base_desc = [_unit(rng, cfg.descriptor_dim) for _ in range(cfg.n_people)] if cfg.descriptor_dim else []

    truth, detections = [], []
    n_missed = n_fp = 0
    for f in range(cfg.n_frames):
        frame_id = f + 1
        ts = round(f * 1000.0 / cfg.fps, 6)
        if f > 0:
            pos = pos + vel
            for axis, half, limit in ((0, widths / 2, W), (1, heights / 2, H)):
                low = pos[:, axis] < half
                high = pos[:, axis] > limit - half
                pos[low, axis] = 2 * half[low] - pos[low, axis]
                pos[high, axis] = 2 * (limit - half[high]) - pos[high, axis]
                vel[low | high, axis] *= -1
        gt = GroundTruthFrame(frame_id, ts)
        dets = []
        for p in range(cfg.n_people):
            box = BoundingBox(pos[p, 0] - widths[p] / 2, pos[p, 1] - heights[p] / 2, widths[p], heights[p])
            gt.boxes.append((box, p + 1))
            noise = rng.normal(0.0, cfg.noise_std, 4) if cfg.noise_std > 0 else np.zeros(4)
            dropped = rng.random() < cfg.miss_rate
            conf = float(rng.uniform(0.6, 1.0))
            desc = None
            if cfg.descriptor_dim:
                desc = base_desc[p] + cfg.descriptor_noise * rng.standard_normal(cfg.descriptor_dim) / np.sqrt(cfg.descriptor_dim)
                desc = desc / np.linalg.norm(desc)
            if dropped:
                n_missed += 1
                continue
            noisy = BoundingBox(
                box.x + noise[0], box.y + noise[1],
                max(box.w + noise[2], 1.0), max(box.h + noise[3], 1.0),
            ) if cfg.noise_std > 0 else box
            dets.append(DetectionRecord(frame_id, ts, noisy, conf, desc))
        for _ in range(int(rng.poisson(cfg.fp_rate)) if cfg.fp_rate > 0 else 0):
            h = rng.uniform(cfg.height_min, cfg.height_max)
            w = h * cfg.aspect
            box = BoundingBox(rng.uniform(0, W - w), rng.uniform(0, H - h), w, h)
            desc = _unit(rng, cfg.descriptor_dim) if cfg.descriptor_dim else None
            dets.append(DetectionRecord(frame_id, ts, box, float(rng.uniform(0.05, 0.95)), desc))
            n_fp += 1
        truth.append(gt)
        detections.append(dets)
    return Scenario(truth, detections, cfg.n_people * cfg.n_frames, n_missed, n_fp)


def scenario_to_rows(scenario: Scenario) -> tuple[list[dict], list[dict]]:
    """Serialize to ``(detection_rows, truth_rows)`` in the ingest format."""
    det_rows, truth_rows = [], []
    for gt, dets in zip(scenario.truth, scenario.detections):
        if dets:
            det_rows.extend(d.to_dict() for d in dets)
        else:
            det_rows.append({"frame_id": gt.frame_id, "timestamp_ms": gt.timestamp_ms})
        for box, ident in gt.boxes:
            truth_rows.append(DetectionRecord(gt.frame_id, gt.timestamp_ms, box, 1.0, None, ident).to_dict())
        if not gt.boxes:
            truth_rows.append({"frame_id": gt.frame_id, "timestamp_ms": gt.timestamp_ms})
    return det_rows, truth_rows
