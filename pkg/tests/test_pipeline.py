import json

import pytest

from socialtrack.errors import ConfigError
from socialtrack.geometry import BoundingBox
from socialtrack.pipeline import PipelineConfig, config_from_dict, emit_overlay, load_config, run, write_outputs
from socialtrack.proximity import FrameReport
from socialtrack.records import DetectionRecord, dumps, frame_marker, parse_stream

from scenes import group_scene


def _static_stream(boxes, n_frames, confidence=0.9):
    rows = []
    for f in range(1, n_frames + 1):
        if not boxes:
            rows.append(dumps(frame_marker(f, (f - 1) * 40.0)))
        for b in boxes:
            rows.append(dumps(DetectionRecord(f, (f - 1) * 40.0, b, confidence).to_dict()))
    return rows


def test_stream_without_detections():
    result = run(PipelineConfig(), _static_stream([], 5))
    assert len(result.reports) == 5
    assert all(r.tracks == () and not r.violation for r in result.reports)
    assert result.events == []
    assert result.summary == {"total_frames": 5, "total_violation_frames": 0, "max_v_i": 0.0, "mean_v_i": 0.0}


def test_two_near_people_after_confirmation():
    boxes = [BoundingBox(400, 300, 40, 100), BoundingBox(440, 300, 40, 100)]
    result = run(PipelineConfig(), _static_stream(boxes, 8))
    v = [r.stats.v_i for r in result.reports]
    assert v[:2] == [0.0, 0.0]  # both tracks still tentative
    assert v[2:] == [2.0] * 6
    assert [len(r.tracks) for r in result.reports] == [2] * 8


@pytest.mark.parametrize("sizes,expected", [((3, 3), 3.0), ((2, 2), 2.0), ((2, 2), 2.0), ((3, 2, 2), 2.33)])
def test_mixed_scenes_violation_index(sizes, expected):
    result = run(PipelineConfig(), _static_stream(group_scene(sizes), 4))
    assert result.reports[-1].stats.v_i == pytest.approx(expected, abs=0.005)


def test_confidence_filter():
    boxes = [BoundingBox(400, 300, 40, 100), BoundingBox(440, 300, 40, 100)]
    result = run(PipelineConfig(), _static_stream(boxes, 5, confidence=0.3))
    assert all(r.tracks == () for r in result.reports)
    result = run(PipelineConfig(confidence_threshold=0.2), _static_stream(boxes, 5, confidence=0.3))
    assert result.reports[-1].stats.n_g == 1


def test_overlay_colors_and_round_trip():
    boxes = group_scene((3,)) + [BoundingBox(1500, 800, 40, 100)]
    result = run(PipelineConfig(), _static_stream(boxes, 4))
    overlay = result.overlays[-1]
    colors = [e["color_index"] for e in overlay["entries"]]
    assert sorted(colors, key=lambda c: (c is None, c)) == [0, 0, 0, None]
    assert json.loads(dumps(overlay)) == overlay
    assert emit_overlay(result.reports[-1]) == overlay


def test_run_invariants_on_noisy_scenario():
    from socialtrack.evaluation import ScenarioConfig, generate_scenario, scenario_to_rows

    det_rows, _ = scenario_to_rows(generate_scenario(
        ScenarioConfig(n_people=14, n_frames=120, noise_std=2.0, miss_rate=0.05, fp_rate=0.5, seed=11)))
    batches = parse_stream([dumps(r) for r in det_rows]).batches
    result = run(PipelineConfig(frame_width=1280, frame_height=720), [dumps(r) for r in det_rows])
    assert len(result.reports) == len(batches)
    ids = [r.frame_id for r in result.reports]
    assert ids == sorted(set(ids))
    violating = [r for r in result.reports if r.violation]
    assert [e["frame_id"] for e in result.events] == [r.frame_id for r in violating]
    assert [e["timestamp_ms"] for e in result.events] == [r.timestamp_ms for r in violating]
    assert result.summary["total_violation_frames"] == sum(r.stats.n_g >= 1 for r in result.reports)
    for r in result.reports:
        assert FrameReport.from_dict(json.loads(dumps(r.to_dict()))) == r


def test_write_outputs(tmp_path):
    result = run(PipelineConfig(), _static_stream(group_scene((2,)), 4))
    paths = {k: tmp_path / f"{k}.out" for k in ("reports", "events", "overlay", "summary")}
    write_outputs(result, **paths)
    assert len(paths["reports"].read_text().splitlines()) == 4
    assert len(paths["events"].read_text().splitlines()) == 2
    assert json.loads(paths["summary"].read_text()) == result.summary


def test_config_unknown_keys_fatal():
    with pytest.raises(ConfigError, match="frame_hieght"):
        config_from_dict({"frame_hieght": 720})
    with pytest.raises(ConfigError, match="tracker.max_agee"):
        config_from_dict({"tracker": {"max_agee": 3}})
    with pytest.raises(ConfigError):
        config_from_dict({"tracker": {"noise": {"bogus": 1}}})


def test_config_values_validated():
    with pytest.raises(ConfigError):
        config_from_dict({"proximity": {"threshold_min": 200, "threshold_max": 100}})
    with pytest.raises(ConfigError):
        config_from_dict({"confidence_threshold": 2})
    with pytest.raises(ConfigError):
        config_from_dict([])


def test_config_nested_build(tmp_path):
    path = tmp_path / "c.json"
    path.write_text(json.dumps({"frame_height": 720, "tracker": {"max_age": 10, "noise": {"std_weight_position": 0.1}},
                                "proximity": {"axis_scales": [1, 1, 2]}}))
    cfg = load_config(path)
    assert cfg.frame_height == 720 and cfg.tracker.max_age == 10
    assert cfg.tracker.noise.std_weight_position == 0.1
    assert cfg.proximity.axis_scales == (1, 1, 2)
    assert load_config(None) == PipelineConfig()


def test_config_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ConfigError):
        load_config(bad)
