"""Association metrics, gating and the track/detection assignment."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .. import _backend
from ..errors import ParameterError
from .kalman import KalmanFilter, KalmanState, Measurement


@dataclass(frozen=True)
class AssociationCost:
    d1: float
    d2: float
    combined: float
    admissible: bool


def squared_mahalanobis(mean: np.ndarray, covariance: np.ndarray, point: np.ndarray) -> float:
    """``(point - mean)^T covariance^-1 (point - mean)`` for one point."""
    out = _backend.mahalanobis_matrix(
        np.asarray(mean, dtype=np.float64)[None],
        np.asarray(covariance, dtype=np.float64)[None],
        np.asarray(point, dtype=np.float64)[None],
    )
    return float(out[0, 0])


def mahalanobis(state: KalmanState, m: Measurement, kf: KalmanFilter | None = None) -> float:
    """Squared Mahalanobis distance of ``m`` from the track's projected measurement distribution."""
    kf = kf or KalmanFilter()
    proj_mean, S = kf.project(state)
    return squared_mahalanobis(proj_mean, S, m.as_array())


def _unit_rows(x: np.ndarray, what: str, tol: float = 1e-6) -> np.ndarray:
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    norms = np.linalg.norm(x, axis=1)
    if not np.all(np.abs(norms - 1.0) <= tol):
        raise ParameterError(f"{what} must have unit L2 norm")
    return x


def cosine_distance(gallery: Sequence[np.ndarray] | np.ndarray, descriptor: np.ndarray) -> float:
    """Smallest ``1 - r^T g`` over the gallery vectors ``g``."""
    if len(gallery) == 0:
        raise ParameterError("gallery must not be empty")
    g = _unit_rows(np.asarray(gallery), "gallery descriptors")
    r = _unit_rows(descriptor, "descriptor")[0]
    if g.shape[1] != r.shape[0]:
        raise ParameterError(f"descriptor dimension {r.shape[0]} does not match gallery {g.shape[1]}")
    return float(np.clip(np.min(1.0 - g @ r), 0.0, 2.0))


def gate_and_cost(d1: float, d2: float, t1: float, t2: float, lambda_weight: float) -> AssociationCost:
    if not (t1 > 0 and t2 > 0):
        raise ParameterError("gating thresholds must be positive")
    if not (0.0 <= lambda_weight <= 1.0):
        raise ParameterError("lambda_weight must lie in [0, 1]")
    admissible = (d1 < t1) and (d2 < t2)
    combined = lambda_weight * d1 + (1.0 - lambda_weight) * d2
    return AssociationCost(d1, d2, combined, admissible)


def min_cost_matching(cost: np.ndarray, admissible: np.ndarray | None = None):
    """Minimum-cost matching restricted to admissible pairs.

    Among all matchings of maximum cardinality over the admissible pairs,
    returns one with the smallest total cost. Costs must be non-negative.
    Rectangular inputs are padded to square with a finite sentinel larger
    than the sum of all admissible costs, so trading any number of
    admissible pairs for one more matched pair is always worse than
    leaving a row unmatched.

    Returns ``(matches, unmatched_rows, unmatched_cols)`` with ``matches`` a
    list of ``(row, col)`` sorted by row.
    """
    cost = np.asarray(cost, dtype=np.float64)
    if cost.ndim != 2:
        raise ParameterError("cost matrix must be 2-D")
    n, m = cost.shape
    if admissible is None:
        admissible = np.ones((n, m), dtype=bool)
    admissible = np.asarray(admissible, dtype=bool) & np.isfinite(cost)
    if np.any(cost[admissible] < 0):
        raise ParameterError("admissible costs must be non-negative")
    if n == 0 or m == 0 or not admissible.any():
        return [], list(range(n)), list(range(m))

    sentinel = math.fsum(cost[admissible].tolist()) + 1.0
    size = max(n, m)
    padded = np.full((size, size), sentinel)
    padded[:n, :m] = np.where(admissible, cost, sentinel)
    rows, cols = _backend.linear_assignment(padded)

    matches = []
    matched_r, matched_c = set(), set()
    for r, c in zip(rows.tolist(), cols.tolist()):
        if r < n and c < m and admissible[r, c]:
            matches.append((r, c))
            matched_r.add(r)
            matched_c.add(c)
    unmatched_rows = [r for r in range(n) if r not in matched_r]
    unmatched_cols = [c for c in range(m) if c not in matched_c]
    return matches, unmatched_rows, unmatched_cols


def appearance_distance_matrix(galleries: Sequence, descriptors: Sequence) -> np.ndarray:
    """Pairwise smallest cosine distance; 0 where either side has no descriptor.

    ``galleries`` holds one 2-D array (or sequence of vectors) per track.
    """
    n, m = len(galleries), len(descriptors)
    out = np.zeros((n, m))
    det_idx = [j for j, d in enumerate(descriptors) if d is not None]
    if not det_idx or n == 0:
        return out
    det = np.stack([descriptors[j] for j in det_idx])
    mats = [np.atleast_2d(np.asarray(g, dtype=np.float64)) if len(g) else None for g in galleries]
    filled = [i for i, g in enumerate(mats) if g is not None]
    if not filled:
        return out
    stacked = np.concatenate([mats[i] for i in filled])
    if stacked.shape[1] != det.shape[1]:
        raise ParameterError(
            f"descriptor dimension {det.shape[1]} does not match gallery {stacked.shape[1]}"
        )
    sizes = np.array([len(mats[i]) for i in filled])
    starts = np.r_[0, np.cumsum(sizes)[:-1]]
    best = np.maximum.reduceat(stacked @ det.T, starts, axis=0)
    out[np.ix_(filled, det_idx)] = 1.0 - best
    np.clip(out, 0.0, 2.0, out=out)
    return out
