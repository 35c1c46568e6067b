"""Detection matching, precision/recall and average precision."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ..errors import ParameterError
from ..geometry import BoundingBox, ScoredBox, boxes_to_array, iou_matrix


@dataclass(frozen=True)
class PRPoint:
    precision: float
    recall: float
    score_threshold: float


@dataclass
class MatchResult:
    true_positives: int
    false_positives: int
    false_negatives: int
    # (score, is_true_positive) per prediction, in descending score order
    ranked: list[tuple[float, bool]] = field(default_factory=list)


def match_detections(
    predictions: Sequence[ScoredBox], truth: Sequence[BoundingBox], iou_thr: float = 0.5
) -> MatchResult:
    """Greedy matching in descending score order; each truth box is consumed at most once."""
    if not (0.0 < iou_thr < 1.0):
        raise ParameterError(f"iou_thr must lie in (0, 1), got {iou_thr!r}")
    order = sorted(range(len(predictions)), key=lambda i: -predictions[i].score)
    overlaps = iou_matrix(boxes_to_array(p.box for p in predictions), boxes_to_array(truth))
    consumed = np.zeros(len(truth), dtype=bool)
    ranked = []
    tp = 0
    for i in order:
        is_tp = False
        if len(truth):
            candidates = np.where(consumed, -1.0, overlaps[i])
            best = int(np.argmax(candidates))
            if candidates[best] >= iou_thr:
                consumed[best] = True
                is_tp = True
                tp += 1
        ranked.append((predictions[i].score, is_tp))
    return MatchResult(tp, len(predictions) - tp, len(truth) - tp, ranked)


def precision_recall_curve(ranked: Sequence[tuple[float, bool]], n_truth: int) -> list[PRPoint]:
    """One point per prediction, visited by descending score (stable on ties)."""
    order = sorted(range(len(ranked)), key=lambda i: -ranked[i][0])
    points = []
    tp = fp = 0
    for i in order:
        score, hit = ranked[i]
        if hit:
            tp += 1
        else:
            fp += 1
        recall = tp / n_truth if n_truth else 0.0
        points.append(PRPoint(tp / (tp + fp), recall, score))
    return points


def average_precision(pr_points: Sequence[PRPoint]) -> float:
    """All-points interpolated area under the precision/recall curve."""
    if not pr_points:
        return 0.0
    recall = np.array([0.0] + [p.recall for p in pr_points])
    precision = np.array([0.0] + [p.precision for p in pr_points])
    # envelope: best precision at any recall >= r
    envelope = np.maximum.accumulate(precision[::-1])[::-1]
    return float(np.sum(np.diff(recall) * envelope[1:]))


def evaluate_frames(
    predictions: Mapping[int, Sequence[ScoredBox]],
    truth: Mapping[int, Sequence[BoundingBox]],
    iou_thr: float = 0.5,
) -> dict:
    """Pool per-frame matches into one ranking and report AP for the person class."""
    ranked: list[tuple[float, bool]] = []
    tp = fp = fn = 0
    for frame_id in sorted(set(predictions) | set(truth)):
        res = match_detections(predictions.get(frame_id, []), truth.get(frame_id, []), iou_thr)
        ranked.extend(res.ranked)
        tp += res.true_positives
        fp += res.false_positives
        fn += res.false_negatives
    ap = average_precision(precision_recall_curve(ranked, tp + fn))
    return {"ap": ap, "map": mean_average_precision({"person": ap}), "tp": tp, "fp": fp, "fn": fn}


def mean_average_precision(per_class_ap: Mapping[str, float]) -> float:
    if not per_class_ap:
        return 0.0
    return float(np.mean(list(per_class_ap.values())))


def id_switches(assignments: Sequence[Mapping[int, int | None]]) -> int:
    """Count identity switches over a frame sequence.

    ``assignments[f]`` maps each ground-truth identity visible in frame ``f``
    to the track id covering it (or None when untracked). A switch is
    counted whenever an identity's track id differs from the last track id
    it had.
    """
    last: dict[int, int] = {}
    switches = 0
    for frame in assignments:
        for gt, track_id in frame.items():
            if track_id is None:
                continue
            if gt in last and last[gt] != track_id:
                switches += 1
            last[gt] = track_id
    return switches
