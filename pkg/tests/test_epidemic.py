import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from socialtrack.epidemic import (
    Awareness,
    EpidemicParams,
    EpidemicState,
    awareness,
    derivative,
    integrate,
    peak_infected,
)
from socialtrack.errors import IntegrationError, ParameterError

from oracles import euler_sir_reference

N = 1e4


def _params(**kw):
    base = dict(beta=0.3, delta=0.1, N=N)
    base.update(kw)
    return EpidemicParams(**base)


def _start(i0=10.0):
    return EpidemicState(N - i0, i0, 0.0)


def test_awareness_examples():
    s = EpidemicState(N / 2, N / 2, 0.0)
    assert awareness(s, _params(k=0, awareness="short-term")) == 1.0
    assert awareness(EpidemicState(0, N / 2, N / 2), _params(k=3, awareness="long-term")) == 0.0
    assert awareness(s, _params(k=2, awareness="short-term")) == pytest.approx(0.25)
    assert awareness(s, _params(k=5)) == 1.0


@given(st.floats(0, N), st.floats(0, 1), st.floats(0, 20), st.floats(0, 20))
def test_awareness_non_increasing_in_k(i, frac_r, k1, k2):
    r = (N - i) * frac_r
    s = EpidemicState(N - i - r, i, r)
    lo, hi = sorted((k1, k2))
    for mode in (Awareness.LONG_TERM, Awareness.SHORT_TERM):
        a_lo = awareness(s, _params(k=lo, awareness=mode))
        a_hi = awareness(s, _params(k=hi, awareness=mode))
        assert 0.0 <= a_hi <= a_lo <= 1.0


def test_disease_free_equilibrium():
    assert derivative(EpidemicState(N, 0, 0), _params()) == (0.0, 0.0, 0.0)


def test_linearisation_growth_rate():
    i = 1e-6 * N
    _, di, _ = derivative(EpidemicState(N - i, i, 0.0), _params())
    assert di / i == pytest.approx(0.3 - 0.1, rel=1e-5)


@given(st.floats(0, N), st.floats(0, 1), st.floats(0.01, 2), st.floats(0.01, 2), st.floats(0, 10),
       st.sampled_from(list(Awareness)))
@settings(max_examples=200)
def test_derivative_conserves(i, frac_r, beta, delta, k, mode):
    r = (N - i) * frac_r
    ds, di, dr = derivative(EpidemicState(N - i - r, i, r), EpidemicParams(beta, delta, N, k, mode))
    scale = max(abs(ds), abs(di), abs(dr), 1e-300)
    assert abs(ds + di + dr) <= 4 * 2.0 ** -52 * scale
    assert dr >= 0


def test_literal_term_breaks_conservation():
    p = _params(literal_infection_term=True)
    ds, di, dr = derivative(EpidemicState(N / 2, N / 4, N / 4), p)
    assert ds + di + dr != pytest.approx(0.0)


def test_conservation_along_trajectory():
    p = _params(k=10, awareness="long-term")
    dt = 0.01 / 0.3
    traj = integrate(_start(), p, dt, 6000)
    assert max(abs(s.total - N) / N for s in traj) <= 1e-8
    rs = [s.R for s in traj]
    assert all(b >= a for a, b in zip(rs, rs[1:]))


def test_zero_infected_is_constant():
    traj = integrate(EpidemicState(N, 0, 0), _params(), 0.1, 50)
    assert all((s.S, s.I, s.R) == (N, 0, 0) for s in traj)


def test_pure_decay_matches_exponential():
    delta = 0.1
    dt = 0.01 / delta
    traj = integrate(_start(100.0), _params(beta=0.0, delta=delta), dt, 5000)
    for s in traj:
        assert s.S == N - 100.0
        assert s.I == pytest.approx(100.0 * math.exp(-delta * s.t), rel=1e-6)
    assert peak_infected(traj) == (100.0, 0.0)


def test_fourth_order_convergence():
    p = _params()
    T = 40.0

    def end_i(steps):
        return integrate(_start(), p, T / steps, steps)[-1].I

    ref = end_i(64000)
    e1, e2 = abs(end_i(400) - ref), abs(end_i(800) - ref)
    assert 12 < e1 / e2 < 20


def test_rk4_agrees_with_fine_euler():
    p = _params()
    rk = integrate(_start(), p, 0.05, 400)[-1]
    s, i, r = euler_sir_reference(N - 10, 10, 0, 0.3, 0.1, N, 20.0, 400_000)
    assert rk.I == pytest.approx(i, rel=1e-3)
    assert rk.S == pytest.approx(s, rel=1e-3)


def test_peak_where_susceptible_fraction_is_delta_over_beta():
    traj = integrate(_start(), _params(), 0.01, 20000)
    peak, t_peak = peak_infected(traj)
    at_peak = next(s for s in traj if s.t == t_peak)
    assert at_peak.S / N == pytest.approx(0.1 / 0.3, rel=0.02)
    assert 0 < t_peak < traj[-1].t


@pytest.mark.parametrize("mode", ["short-term", "long-term"])
def test_awareness_reduces_peak(mode):
    dt = 0.01 / 0.3
    base, _ = peak_infected(integrate(_start(), _params(k=0, awareness=mode), dt, 9000))
    aware, _ = peak_infected(integrate(_start(), _params(k=10, awareness=mode), dt, 9000))
    assert aware < base


def test_flat_trajectory_first_index():
    traj = [EpidemicState(1, 2, 3, t) for t in (0.0, 1.0, 2.0)]
    assert peak_infected(traj) == (2, 0.0)


def test_instability_raises():
    with pytest.raises(IntegrationError):
        integrate(_start(5000.0), _params(beta=50.0, delta=40.0), 1.0, 10)


@pytest.mark.parametrize("kw", [dict(beta=-1), dict(delta=0), dict(N=0), dict(k=-1), dict(awareness="bogus")])
def test_param_domain(kw):
    with pytest.raises((ParameterError, ValueError)):
        _params(**kw)


def test_integrate_argument_checks():
    with pytest.raises(ParameterError):
        integrate(_start(), _params(), 0.0, 10)
    with pytest.raises(ParameterError):
        integrate(_start(), _params(), 0.1, 0)
    with pytest.raises(ParameterError):
        integrate(EpidemicState(1, 1, 1), _params(), 0.1, 1)
    with pytest.raises(ParameterError):
        peak_infected([])
