"""Detection metrics and synthetic scenario generation."""
from .metrics import (
    MatchResult,
    PRPoint,
    average_precision,
    evaluate_frames,
    id_switches,
    match_detections,
    mean_average_precision,
    precision_recall_curve,
)
from .scenario import GroundTruthFrame, Scenario, ScenarioConfig, generate_scenario, scenario_to_rows

__all__ = [
    "MatchResult", "PRPoint", "average_precision", "evaluate_frames", "id_switches", "match_detections",
    "mean_average_precision", "precision_recall_curve", "GroundTruthFrame", "Scenario",
    "ScenarioConfig", "generate_scenario", "scenario_to_rows",
]
