import numpy as np
import pytest

from risald.ald import NoiseSchedule, ald_optimize, ald_trace, make_schedule
from risald.channel import CascadedEvaluator, CascadedModel
from risald.errors import DimensionMismatch, InvalidSchedule
from risald.numerics import RngState
from risald.scorenet import zero_denoiser

from oracles import grid_posterior_mean_oracle

PSI2 = np.array([0.3, 0.7])

identity_denoiser = lambda phi, psi, sigma: phi


# ---------------------------------------------------------------------------
# schedules


def test_schedule_defaults_and_levels():
    s = make_schedule()
    assert (s.sigma1, s.beta, s.t_steps, s.k_steps, s.step) == (0.5, 0.9, 10, 5, 1e-2)
    levels = s.levels()
    assert levels.shape == (10,)
    assert levels[0] == 0.5
    assert np.allclose(levels[1:] / levels[:-1], 0.9, rtol=0, atol=1e-15)
    assert levels[-1] == pytest.approx(0.5 * 0.9 ** 9)  # ~0.19371
    assert s.total_iterations == 50


def test_schedule_validation():
    for kwargs in (
        {"sigma1": 0.0}, {"sigma1": -1.0},
        {"beta": 0.0}, {"beta": 1.0}, {"beta": 1.3},
        {"t_steps": 0}, {"k_steps": 0},
        {"step": 0.0}, {"step": -1e-3},
    ):
        with pytest.raises(InvalidSchedule):
            make_schedule(**kwargs)


# ---------------------------------------------------------------------------
# deterministic dynamics (noise off)


def test_identity_denoiser_is_stationary():
    phi0 = np.array([0.2, 0.8, 0.5])
    sched = make_schedule(t_steps=3, k_steps=4)
    out = ald_optimize(identity_denoiser, PSI2, sched, phi0, RngState(0), noise=False)
    assert np.array_equal(out, phi0)


def test_constant_denoiser_fixed_point():
    target = np.array([0.3, 0.6])
    fn = lambda phi, psi, sigma: target
    sched = make_schedule(t_steps=2, k_steps=3)
    out = ald_optimize(fn, PSI2, sched, target.copy(), RngState(0), noise=False)
    assert np.array_equal(out, target)


def test_constant_denoiser_contracts_toward_target():
    target = np.array([0.8])
    fn = lambda phi, psi, sigma: target
    sched = make_schedule(sigma1=0.5, beta=0.9, t_steps=10, k_steps=5, step=1e-2)
    start = np.array([0.1])
    out = ald_optimize(fn, PSI2, sched, start, RngState(0), noise=False)
    assert abs(out[0] - 0.8) < abs(start[0] - 0.8)


def test_hand_computed_two_steps():
    d = np.array([0.9, 0.1])
    fn = lambda phi, psi, sigma: d
    sched = NoiseSchedule(sigma1=0.5, beta=0.9, t_steps=1, k_steps=2, step=0.01)
    track = []
    phi0 = np.array([0.4, 0.6])
    out = ald_optimize(fn, PSI2, sched, phi0, RngState(0), noise=False, _track=track)
    drift = 0.01 / (2.0 * 0.5 ** 2)
    step1 = phi0 + drift * (d - phi0)
    step2 = step1 + drift * (d - step1)
    assert np.allclose(track[0], step1, rtol=0, atol=1e-15)
    assert np.allclose(track[1], step2, rtol=0, atol=1e-15)
    assert np.array_equal(out, track[-1])


def test_sigma_scaled_step_variant():
    d = np.array([1.0])
    fn = lambda phi, psi, sigma: d
    sched = NoiseSchedule(sigma1=0.4, beta=0.5, t_steps=2, k_steps=1, step=0.01)
    track = []
    phi0 = np.array([0.0])
    ald_optimize(fn, PSI2, sched, phi0, RngState(0), noise=False,
                 sigma_scaled_step=True, _track=track)
    # level 1: sigma=0.4, eps = 0.01 * (0.4/0.2)^2 = 0.04
    s1 = 0.0 + 0.04 / (2 * 0.4 ** 2) * (1.0 - 0.0)
    # level 2: sigma=0.2, eps = 0.01
    s2 = s1 + 0.01 / (2 * 0.2 ** 2) * (1.0 - s1)
    assert track[0][0] == pytest.approx(s1, abs=1e-15)
    assert track[1][0] == pytest.approx(s2, abs=1e-15)


def test_clamp_keeps_iterates_inside_box():
    fn = lambda phi, psi, sigma: np.full_like(phi, 3.0)  # pushes hard up
    sched = make_schedule(sigma1=0.3, t_steps=4, k_steps=3, step=5e-2)
    track = []
    ald_optimize(fn, PSI2, sched, np.array([0.5, 0.5]), RngState(1), _track=track)
    arr = np.array(track)
    assert arr.min() >= 0.0 and arr.max() <= 1.0


def test_phi0_shape_check():
    with pytest.raises(DimensionMismatch):
        ald_optimize(identity_denoiser, PSI2, make_schedule(),
                     np.zeros((2, 2)), RngState(0))


# ---------------------------------------------------------------------------
# stochastic behaviour


def test_noise_floor_tracks_final_sigma():
    # with the identity denoiser the drift vanishes, so iterates random-walk
    # with kicks sqrt(eps) z; the clamped walk must still move
    sched = make_schedule(t_steps=2, k_steps=10, step=1e-4)
    phi0 = np.full(4, 0.5)
    out = ald_optimize(identity_denoiser, PSI2, sched, phi0, RngState(2))
    assert not np.array_equal(out, phi0)
    assert np.abs(out - phi0).max() < 0.2  # sqrt(1e-4) * ~20 kicks stays local


def test_seeded_runs_reproduce():
    params = zero_denoiser(3, 2)
    sched = make_schedule(t_steps=3, k_steps=2)
    a = ald_optimize(params, PSI2, sched, np.full(3, 0.2), RngState(7))
    b = ald_optimize(params, PSI2, sched, np.full(3, 0.2), RngState(7))
    c = ald_optimize(params, PSI2, sched, np.full(3, 0.2), RngState(8))
    assert np.array_equal(a, b)
    assert not np.array_equal(a, c)


def test_two_mode_prior_lands_on_modes():
    # oracle denoiser: exact posterior mean under an equal-weight two-point
    # prior {0.2, 0.8}; annealing must commit to one mode almost always
    grid = np.array([[0.2], [0.8]])
    prior_log = np.zeros(2)

    def fn(phi, psi, sigma):
        return grid_posterior_mean_oracle(grid, prior_log, phi, sigma)

    sched = make_schedule(sigma1=0.5, beta=0.7, t_steps=12, k_steps=8, step=1e-4)
    rng = RngState(3)
    hits = 0
    runs = 200
    for _ in range(runs):
        phi0 = rng.uniform(1)
        out = ald_optimize(fn, PSI2, sched, phi0, rng, sigma_scaled_step=True)
        if min(abs(out[0] - 0.2), abs(out[0] - 0.8)) < 0.1:
            hits += 1
    assert hits >= 0.9 * runs


# ---------------------------------------------------------------------------
# traces


def test_trace_shape_and_agreement():
    model = CascadedModel(n_p=3, n_tx=1, n_rx=2, n_bands=2, seed=4)
    ev = CascadedEvaluator(model)
    params = zero_denoiser(3, 2)
    sched = make_schedule(t_steps=4, k_steps=3)
    phi0 = np.array([0.1, 0.5, 0.9])
    rows = ald_trace(params, PSI2, sched, phi0, RngState(5), ev)
    assert len(rows) == sched.total_iterations + 1
    assert [r[0] for r in rows] == list(range(len(rows)))
    assert np.array_equal(rows[0][1], phi0)
    final = ald_optimize(params, PSI2, sched, phi0, RngState(5))
    assert np.array_equal(rows[-1][1], final)
    for _, phi, rate in rows:
        assert np.isfinite(rate)


def test_trace_charges_no_optimization_calls():
    model = CascadedModel(n_p=2, n_tx=1, n_rx=1, n_bands=1, seed=6)
    ev = CascadedEvaluator(model)
    ald_trace(zero_denoiser(2, 2), PSI2, make_schedule(t_steps=2, k_steps=2),
              np.full(2, 0.5), RngState(6), ev)
    assert ev.call_count == 0
