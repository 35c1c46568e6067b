"""Constant-velocity Kalman filter over ``(u, v, aspect, h)`` box measurements.

The 8-dimensional state is ``[u, v, aspect, h, du, dv, daspect, dh]``: box
centroid, aspect ratio ``w/h``, height, and their per-frame velocities. The
observation model is ``H = [I4 | 0]``.

Noise is scale dependent: the standard deviations on u, v and h are
proportional to the current box height, so a box twice as tall is allowed
twice the pixel uncertainty. The aspect-ratio axis is unitless and uses
fixed standard deviations instead.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ParameterError

NDIM = 4

# 0.95 quantile of the chi-square distribution with 4 degrees of freedom.
CHI2INV95_4DOF = 9.4877


@dataclass(frozen=True)
class Measurement:
    u: float
    v: float
    aspect: float
    h: float

    def __post_init__(self):
        if not np.all(np.isfinite([self.u, self.v, self.aspect, self.h])):
            raise ParameterError("measurement components must be finite")
        if not (self.h > 0 and self.aspect > 0):
            raise ParameterError(f"measurement needs h > 0 and aspect > 0, got {self}")

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v, self.aspect, self.h], dtype=np.float64)

    @classmethod
    def from_box(cls, box) -> "Measurement":
        return cls(*box.to_xyah())


@dataclass
class KalmanState:
    mean: np.ndarray
    covariance: np.ndarray

    def copy(self) -> "KalmanState":
        return KalmanState(self.mean.copy(), self.covariance.copy())


@dataclass(frozen=True)
class NoiseModel:
    """Standard-deviation weights of the process and measurement noise."""

    std_weight_position: float = 1.0 / 20
    std_weight_velocity: float = 1.0 / 160
    std_weight_measurement: float = 1.0 / 20
    init_velocity_variance_factor: float = 10.0
    aspect_std_position: float = 1e-2
    aspect_std_velocity: float = 1e-5
    aspect_std_measurement: float = 1e-1

    def __post_init__(self):
        for name, value in self.__dict__.items():
            if not (np.isfinite(value) and value > 0):
                raise ParameterError(f"noise parameter {name} must be positive, got {value!r}")


class KalmanFilter:
    """Kalman filter for image-space box tracking.

    Single-state methods take and return ``KalmanState``; the ``*_many``
    variants operate on stacked ``(n, 8)`` means and ``(n, 8, 8)``
    covariances and are what the tracker uses per frame.
    """

    def __init__(self, noise: NoiseModel | None = None):
        self.noise = noise or NoiseModel()
        self._motion_mat = np.eye(2 * NDIM)
        self._motion_mat[:NDIM, NDIM:] = np.eye(NDIM)
        self._update_mat = np.eye(NDIM, 2 * NDIM)

    # -- noise terms -------------------------------------------------------

    def _process_std(self, h: np.ndarray) -> np.ndarray:
        nz = self.noise
        pos = nz.std_weight_position * h
        vel = nz.std_weight_velocity * h
        return np.stack(
            [pos, pos, np.full_like(h, nz.aspect_std_position), pos,
             vel, vel, np.full_like(h, nz.aspect_std_velocity), vel],
            axis=-1,
        )

    def _measurement_std(self, h: np.ndarray) -> np.ndarray:
        nz = self.noise
        pos = nz.std_weight_measurement * h
        return np.stack([pos, pos, np.full_like(h, nz.aspect_std_measurement), pos], axis=-1)

    def measurement_covariance(self, h: float) -> np.ndarray:
        return np.diag(np.square(self._measurement_std(np.asarray(float(h)))))

    # -- single state ------------------------------------------------------

    def initiate(self, measurement: Measurement) -> KalmanState:
        z = measurement.as_array()
        nz = self.noise
        h = z[3]
        pos_var = np.square([2 * nz.std_weight_position * h, 2 * nz.std_weight_position * h,
                             nz.aspect_std_position, 2 * nz.std_weight_position * h])
        var = np.r_[pos_var, nz.init_velocity_variance_factor * pos_var]
        return KalmanState(np.r_[z, np.zeros(NDIM)], np.diag(var))

    def predict(self, state: KalmanState) -> KalmanState:
        mean, cov = self.predict_many(state.mean[None], state.covariance[None])
        return KalmanState(mean[0], cov[0])

    def project(self, state: KalmanState) -> tuple[np.ndarray, np.ndarray]:
        """Measurement-space mean and innovation covariance ``S = H P H^T + R``."""
        mean, cov = self.project_many(state.mean[None], state.covariance[None])
        return mean[0], cov[0]

    def update(self, state: KalmanState, measurement: Measurement) -> KalmanState:
        mean, cov = self.update_many(
            state.mean[None], state.covariance[None], measurement.as_array()[None]
        )
        return KalmanState(mean[0], cov[0])

    # -- batched -----------------------------------------------------------

    def predict_many(self, means: np.ndarray, covs: np.ndarray):
        q = np.square(self._process_std(means[:, 3]))
        F = self._motion_mat
        new_means = means @ F.T
        new_covs = F @ covs @ F.T
        idx = np.arange(2 * NDIM)
        new_covs[:, idx, idx] += q
        return new_means, new_covs

    def project_many(self, means: np.ndarray, covs: np.ndarray):
        r = np.square(self._measurement_std(means[:, 3]))
        proj_means = means[:, :NDIM].copy()
        proj_covs = covs[:, :NDIM, :NDIM].copy()
        idx = np.arange(NDIM)
        proj_covs[:, idx, idx] += r
        return proj_means, proj_covs

    def update_many(self, means: np.ndarray, covs: np.ndarray, measurements: np.ndarray):
        """Joseph-form update; keeps covariances symmetric positive semidefinite."""
        proj_means, S = self.project_many(means, covs)
        PHt = covs[:, :, :NDIM]  # P H^T, (n, 8, 4)
        # K = P H^T S^-1  <=>  S K^T = (P H^T)^T
        gain = np.linalg.solve(S, PHt.transpose(0, 2, 1)).transpose(0, 2, 1)
        innovation = measurements - proj_means
        new_means = means + np.einsum("nij,nj->ni", gain, innovation)
        I_KH = np.broadcast_to(np.eye(2 * NDIM), covs.shape).copy()
        I_KH[:, :, :NDIM] -= gain
        R = S - covs[:, :NDIM, :NDIM]
        new_covs = I_KH @ covs @ I_KH.transpose(0, 2, 1) + gain @ R @ gain.transpose(0, 2, 1)
        new_covs = 0.5 * (new_covs + new_covs.transpose(0, 2, 1))
        return new_means, new_covs


_default_filter = KalmanFilter()


def kf_initiate(m: Measurement, kf: KalmanFilter | None = None) -> KalmanState:
    return (kf or _default_filter).initiate(m)


def kf_predict(s: KalmanState, kf: KalmanFilter | None = None) -> KalmanState:
    return (kf or _default_filter).predict(s)


def kf_update(s: KalmanState, m: Measurement, kf: KalmanFilter | None = None) -> KalmanState:
    return (kf or _default_filter).update(s, m)
