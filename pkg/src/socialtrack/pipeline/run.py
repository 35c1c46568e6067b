"""Frame-ordered orchestration: ingest -> tracking -> proximity -> reports."""
from __future__ import annotations

import logging
from dataclasses import dataclass, field

from ..errors import FrameProcessingError, SocialTrackError
from ..proximity import (
    FrameReport,
    TrackSnapshot,
    build_groups,
    feature_of,
    frame_report,
    pairwise_l2,
    violation_stats,
)
from ..records import FrameBatch, dumps, parse_stream, write_jsonl
from ..tracking import Detection, Tracker
from .config import PipelineConfig

logger = logging.getLogger(__name__)


@dataclass
class RunResult:
    reports: list[FrameReport] = field(default_factory=list)
    events: list[dict] = field(default_factory=list)
    overlays: list[dict] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def event_record(report: FrameReport) -> dict:
    s = report.stats
    return {
        "frame_id": report.frame_id,
        "timestamp_ms": report.timestamp_ms,
        "n_g": s.n_g,
        "n_p": s.n_p,
        "v_i": s.v_i,
        "estimated_violations": s.estimated_violations,
        "groups": [list(g.members) for g in report.groups],
    }


def emit_overlay(report: FrameReport) -> dict:
    """Per-person drawing instructions; ``color_index`` is None for ungrouped people."""
    color = {tid: g.color_index for g in report.groups for tid in g.members}
    return {
        "frame_id": report.frame_id,
        "timestamp_ms": report.timestamp_ms,
        "entries": [
            {
                "track_id": t.id,
                "x": t.box.x,
                "y": t.box.y,
                "w": t.box.w,
                "h": t.box.h,
                "status": t.status,
                "color_index": color.get(t.id),
            }
            for t in report.tracks
        ],
    }


class FrameProcessor:
    """Holds the tracker; feed batches in frame order."""

    def __init__(self, config: PipelineConfig):
        self.config = config
        self.tracker = Tracker(config.tracker)

    def process(self, batch: FrameBatch) -> FrameReport:
        cfg = self.config
        prox = cfg.proximity
        dets = [
            Detection(r.box, r.confidence, r.descriptor)
            for r in batch.records
            if r.confidence >= cfg.confidence_threshold
        ]
        tracks, _ = self.tracker.step(dets)
        visible = [t for t in tracks if t.frames_since_update == 0]
        confirmed = [t for t in visible if t.is_confirmed]
        features = [feature_of(t.last_box, t.id, prox.depth_precedence) for t in confirmed]
        matrix = pairwise_l2(features, prox.axis_scales)
        groups = build_groups(matrix, features, cfg.frame_height, prox.threshold_min, prox.threshold_max)
        stats = violation_stats(groups)
        snapshots = [TrackSnapshot(t.id, t.last_box, t.status.value) for t in visible]
        return frame_report(snapshots, groups, stats, batch.frame_id, batch.timestamp_ms)


def run(config: PipelineConfig, source) -> RunResult:
    """Process a detection stream (path, file, line iterable or parsed batches)."""
    if isinstance(source, (list, tuple)) and source and all(isinstance(b, FrameBatch) for b in source):
        batches = list(source)
    else:
        batches = parse_stream(source).batches
    processor = FrameProcessor(config)
    result = RunResult()
    for batch in batches:
        try:
            report = processor.process(batch)
        except SocialTrackError:
            raise
        except Exception as exc:
            raise FrameProcessingError(f"frame {batch.frame_id}: {exc}") from exc
        result.reports.append(report)
        result.overlays.append(emit_overlay(report))
        if report.violation:
            result.events.append(event_record(report))
    result.summary = summarize(result.reports)
    return result


def summarize(reports: list[FrameReport]) -> dict:
    vis = [r.stats.v_i for r in reports if r.violation]
    return {
        "total_frames": len(reports),
        "total_violation_frames": len(vis),
        "max_v_i": max(vis) if vis else 0.0,
        "mean_v_i": sum(vis) / len(vis) if vis else 0.0,
    }


def write_outputs(result: RunResult, reports=None, events=None, overlay=None, summary=None) -> None:
    if reports is not None:
        write_jsonl(reports, (r.to_dict() for r in result.reports))
    if events is not None:
        write_jsonl(events, result.events)
    if overlay is not None:
        write_jsonl(overlay, result.overlays)
    if summary is not None:
        with open(summary, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(dumps(result.summary) + "\n")
