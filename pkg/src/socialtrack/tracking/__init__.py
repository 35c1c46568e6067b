"""Kalman filtering, gated association and track lifecycle."""
from .association import (
    AssociationCost,
    appearance_distance_matrix,
    cosine_distance,
    gate_and_cost,
    mahalanobis,
    min_cost_matching,
    squared_mahalanobis,
)
from .kalman import (
    CHI2INV95_4DOF,
    KalmanFilter,
    KalmanState,
    Measurement,
    NoiseModel,
    kf_initiate,
    kf_predict,
    kf_update,
)
from .tracker import (
    Detection,
    Gallery,
    Track,
    TrackEvent,
    Tracker,
    TrackerConfig,
    TrackStatus,
    associate,
    association_matrices,
    tracker_step,
)

__all__ = [
    "AssociationCost", "appearance_distance_matrix", "cosine_distance", "gate_and_cost",
    "mahalanobis", "min_cost_matching", "squared_mahalanobis", "CHI2INV95_4DOF",
    "KalmanFilter", "KalmanState", "Measurement", "NoiseModel", "kf_initiate", "kf_predict",
    "kf_update", "Detection", "Gallery", "Track", "TrackEvent", "Tracker", "TrackerConfig", "TrackStatus",
    "associate", "association_matrices", "tracker_step",
]
