"""Bundled synthetic scenario used by the determinism check and the README walkthrough.

Regenerate with ``python -m socialtrack.demo`` (fixed seed, so the files are stable).
"""
from __future__ import annotations

from importlib import resources
from pathlib import Path

DEMO_SCENARIO = dict(
    frame_width=1920.0,
    frame_height=1080.0,
    n_people=12,
    n_frames=200,
    noise_std=1.5,
    miss_rate=0.05,
    fp_rate=0.5,
    seed=2021,
)


def demo_file(name: str) -> Path:
    """Path of a bundled file: ``demo_config.json``, ``demo_detections.jsonl`` or ``demo_truth.jsonl``."""
    path = Path(str(resources.files("socialtrack") / "data" / name))
    if not path.is_file():
        raise FileNotFoundError(f"no bundled file named {name!r}")
    return path


def regenerate(directory: Path) -> None:
    import json

    from .evaluation import ScenarioConfig, generate_scenario, scenario_to_rows
    from .records import write_jsonl

    det_rows, truth_rows = scenario_to_rows(generate_scenario(ScenarioConfig(**DEMO_SCENARIO)))
    write_jsonl(directory / "demo_detections.jsonl", det_rows)
    write_jsonl(directory / "demo_truth.jsonl", truth_rows)
    config = {
        "frame_width": DEMO_SCENARIO["frame_width"],
        "frame_height": DEMO_SCENARIO["frame_height"],
        "confidence_threshold": 0.5,
        "tracker": {"max_age": 30, "n_init": 3, "gate_cosine": 0.2},
        "proximity": {"threshold_min": 90.0, "threshold_max": 170.0},
    }
    (directory / "demo_config.json").write_text(json.dumps(config, indent=2, sort_keys=True) + "\n")


if __name__ == "__main__":
    regenerate(Path(__file__).parent / "data")
