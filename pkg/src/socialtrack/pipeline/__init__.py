"""End-to-end orchestration and configuration."""
from .config import OutputConfig, PipelineConfig, ProximityConfig, config_from_dict, load_config
from .run import FrameProcessor, RunResult, emit_overlay, event_record, run, summarize, write_outputs

__all__ = [
    "OutputConfig", "PipelineConfig", "ProximityConfig", "config_from_dict", "load_config",
    "FrameProcessor", "RunResult", "emit_overlay", "event_record", "run", "summarize", "write_outputs",
]
