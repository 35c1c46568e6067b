"""SIR model with a behavioural social-distancing factor.

The infection flux ``beta * S * I / N`` is scaled by an awareness factor
``a`` in [0, 1]:

* long-term awareness: ``a = (1 - (I + R) / N) ** k``
* short-term awareness: ``a = (1 - I / N) ** k``

Integration is fixed-step classical RK4.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import IntegrationError, ParameterError


class Awareness(str, enum.Enum):
    LONG_TERM = "long-term"
    SHORT_TERM = "short-term"
    NONE = "none"


@dataclass(frozen=True)
class EpidemicState:
    S: float
    I: float
    R: float
    t: float = 0.0

    @property
    def total(self) -> float:
        return self.S + self.I + self.R


@dataclass(frozen=True)
class EpidemicParams:
    beta: float
    delta: float
    N: float
    k: float = 0.0
    awareness: Awareness = Awareness.NONE
    # dI/dt = -delta*I + beta*I*(I/N)*a, as printed in the source model; breaks S+I+R = N
    literal_infection_term: bool = False

    def __post_init__(self):
        # beta = 0 is allowed: pure recovery, I decays as exp(-delta t)
        if not (self.beta >= 0 and self.delta > 0):
            raise ParameterError("need beta >= 0 and delta > 0")
        if not self.N > 0:
            raise ParameterError("N must be positive")
        if not self.k >= 0:
            raise ParameterError("k must be non-negative")
        object.__setattr__(self, "awareness", Awareness(self.awareness))


def awareness(state: EpidemicState, params: EpidemicParams) -> float:
    if params.awareness is Awareness.NONE:
        return 1.0
    affected = state.I + state.R if params.awareness is Awareness.LONG_TERM else state.I
    base = min(max(1.0 - affected / params.N, 0.0), 1.0)
    return base ** params.k


def derivative(state: EpidemicState, params: EpidemicParams) -> tuple[float, float, float]:
    a = awareness(state, params)
    frac = state.I / params.N
    recovery = params.delta * state.I
    if params.literal_infection_term:
        return (-params.beta * state.S * frac * a,
                params.beta * state.I * frac * a - recovery,
                recovery)
    flux = params.beta * state.S * frac * a
    return (-flux, flux - recovery, recovery)


def _shift(state: EpidemicState, k: tuple[float, float, float], h: float) -> EpidemicState:
    return EpidemicState(state.S + h * k[0], state.I + h * k[1], state.R + h * k[2], state.t + h)


def rk4_step(state: EpidemicState, params: EpidemicParams, dt: float) -> EpidemicState:
    k1 = derivative(state, params)
    k2 = derivative(_shift(state, k1, dt / 2), params)
    k3 = derivative(_shift(state, k2, dt / 2), params)
    k4 = derivative(_shift(state, k3, dt), params)
    return EpidemicState(
        state.S + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
        state.I + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]),
        state.R + dt / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2]),
        state.t + dt,
    )


def integrate(initial: EpidemicState, params: EpidemicParams, dt: float, steps: int) -> list[EpidemicState]:
    """Fixed-step RK4 trajectory of ``steps + 1`` states, starting at ``initial``.

    Raises IntegrationError if any compartment drops below ``-1e-9 * N``.
    """
    if not dt > 0:
        raise ParameterError("dt must be positive")
    if steps < 1:
        raise ParameterError("steps must be >= 1")
    if min(initial.S, initial.I, initial.R) < 0:
        raise ParameterError("initial compartments must be non-negative")
    if not params.literal_infection_term and abs(initial.total - params.N) > 1e-9 * params.N:
        raise ParameterError(f"initial S + I + R = {initial.total} does not equal N = {params.N}")
    floor = -1e-9 * params.N
    trajectory = [initial]
    state = initial
    for step in range(steps):
        state = rk4_step(state, params, dt)
        if min(state.S, state.I, state.R) < floor:
            raise IntegrationError(
                f"state left the non-negative orthant at step {step + 1} (t={state.t:g}); "
                f"use a smaller dt than {dt:g}"
            )
        trajectory.append(state)
    return trajectory


def peak_infected(trajectory: list[EpidemicState]) -> tuple[float, float]:
    """Maximum infected count and the first time it is reached."""
    if not trajectory:
        raise ParameterError("trajectory must not be empty")
    best = trajectory[0]
    for s in trajectory[1:]:
        if s.I > best.I:
            best = s
    return best.I, best.t
