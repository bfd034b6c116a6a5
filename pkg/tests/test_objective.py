import numpy as np
import pytest

from risald.channel import CascadedModel, CascadedEvaluator, ChannelTensor
from risald.numerics import RngState
from risald.objective import (
    ObjectiveParams,
    achievable_rate,
    log_posterior,
    log_surrogate_prior,
    zero_order_gradient,
)

from oracles import grid_posterior_oracle, logdet2_eig_oracle


def tensor(*mats):
    mats = np.asarray(mats, dtype=complex)
    return ChannelTensor(mats, np.linspace(0.9, 1.1, mats.shape[0]))


# ---------------------------------------------------------------------------
# achievable_rate


def test_rate_zero_channel():
    assert achievable_rate(tensor(np.zeros((2, 2))), 1.0) == 0.0


def test_rate_scalar_unity():
    assert achievable_rate(tensor([[1.0]]), 1.0) == pytest.approx(1.0, abs=1e-12)


def test_rate_two_identity_bands():
    h = np.eye(2)
    assert achievable_rate(tensor(h, h), 1.0) == pytest.approx(2.0, abs=1e-12)


def test_rate_band_average():
    # one live band and one dead band average to half the live rate
    h = np.eye(2)
    z = np.zeros((2, 2))
    assert achievable_rate(tensor(h, z), 1.0) == pytest.approx(1.0, abs=1e-12)


def test_rate_matches_eig_oracle():
    rng = np.random.default_rng(11)
    for _ in range(10):
        h = rng.normal(size=(2, 3)) + 1j * rng.normal(size=(2, 3))
        m = np.eye(2) + h @ h.conj().T / 0.7
        assert achievable_rate(tensor(h), 0.7) == pytest.approx(
            logdet2_eig_oracle(0.5 * (m + m.conj().T)), abs=1e-8)


def test_rate_monotone_in_snr():
    rng = np.random.default_rng(12)
    h = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    rates = [achievable_rate(tensor(h), s) for s in (4.0, 1.0, 0.25, 0.0625)]
    assert all(a < b for a, b in zip(rates, rates[1:]))


def test_rate_rejects_bad_noise():
    with pytest.raises(ValueError):
        achievable_rate(tensor(np.eye(2)), 0.0)


def test_objective_params_validation():
    with pytest.raises(ValueError):
        ObjectiveParams(sigma_w2=-1.0)


# ---------------------------------------------------------------------------
# surrogate prior / posterior (on the closed-form cascaded channel)


@pytest.fixture
def cascaded():
    return CascadedEvaluator(CascadedModel(n_p=2, n_tx=2, n_rx=2, n_bands=2, seed=0))


def test_prior_alpha_zero_flat(cascaded):
    params = ObjectiveParams(alpha=0.0)
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    for phi in (np.zeros(2), np.ones(2), np.array([0.2, 0.9])):
        assert log_surrogate_prior(phi, psi, cascaded, params) == 0.0


def test_prior_linear_in_alpha(cascaded):
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    phi = np.array([0.4, 0.6])
    one = log_surrogate_prior(phi, psi, cascaded, ObjectiveParams(alpha=1.0))
    two = log_surrogate_prior(phi, psi, cascaded, ObjectiveParams(alpha=2.0))
    assert two == pytest.approx(2.0 * one, rel=1e-12)


def test_prior_argmax_matches_rate_argmax(cascaded):
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    params = ObjectiveParams(alpha=1.7)
    grid = [np.array([a, b]) for a in (0.0, 1.0) for b in (0.0, 1.0)]
    by_prior = max(grid, key=lambda p: log_surrogate_prior(p, psi, cascaded, params))
    by_rate = max(grid, key=lambda p: achievable_rate(cascaded.evaluate(p, psi), 1.0))
    assert np.array_equal(by_prior, by_rate)


def test_posterior_reduces_to_prior(cascaded):
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    phi = np.array([0.25, 0.75])
    params = ObjectiveParams()
    assert log_posterior(phi, phi, psi, 0.3, cascaded, params) == pytest.approx(
        log_surrogate_prior(phi, psi, cascaded, params), abs=1e-14)


def test_posterior_penalty_vanishes_at_huge_sigma(cascaded):
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    phi = np.array([0.25, 0.75])
    noisy = np.array([0.9, 0.1])
    params = ObjectiveParams()
    assert abs(log_posterior(phi, noisy, psi, 1e9, cascaded, params)
               - log_surrogate_prior(phi, psi, cascaded, params)) <= 1e-9


def test_posterior_matches_grid_bayes(cascaded):
    # 9x9 grid: normalized exp(log_posterior) vs brute-force Bayes
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    params = ObjectiveParams(alpha=1.3)
    axis = np.linspace(0.0, 1.0, 9)
    grid = np.array([(a, b) for a in axis for b in axis])
    prior_log = np.array([log_surrogate_prior(p, psi, cascaded, params) for p in grid])
    noisy = np.array([0.35, 0.65])
    sigma = 0.25
    logp = np.array([log_posterior(p, noisy, psi, sigma, cascaded, params) for p in grid])
    ours = np.exp(logp - logp.max())
    ours /= ours.sum()
    assert np.abs(ours - grid_posterior_oracle(grid, prior_log, noisy, sigma)).sum() <= 1e-9


def test_posterior_differences_drop_constants(cascaded):
    # only differences are meaningful; an additive prior constant cancels
    psi = np.array([0.3, 0.7, 0.1, 0.9])
    params = ObjectiveParams()
    a, b = np.array([0.1, 0.2]), np.array([0.8, 0.4])
    noisy = np.array([0.5, 0.5])
    d1 = (log_posterior(a, noisy, psi, 0.3, cascaded, params)
          - log_posterior(b, noisy, psi, 0.3, cascaded, params))
    quad = lambda p: float(np.sum((noisy - p) ** 2)) / (2 * 0.3 ** 2)
    d2 = (log_surrogate_prior(a, psi, cascaded, params) - quad(a)
          - log_surrogate_prior(b, psi, cascaded, params) + quad(b))
    assert d1 == pytest.approx(d2, abs=1e-12)


# ---------------------------------------------------------------------------
# zero-order gradient (Monte-Carlo oracles frozen by seed)


def test_zo_constant_objective_is_exactly_zero():
    g = zero_order_gradient(lambda p: 3.5, np.full(4, 0.5), 2, 1e-2, RngState(0))
    assert np.array_equal(g, np.zeros(4))


def test_zo_linear_unbiased():
    c = np.array([1.0, -2.0, 0.5])
    rng = RngState(101)
    est = np.zeros(3)
    n = 100_000
    for _ in range(n):
        est += zero_order_gradient(lambda p: float(c @ p), np.full(3, 0.5), 1, 1e-2, rng)
    est /= n
    assert np.linalg.norm(est - c) / np.linalg.norm(c) <= 0.02


def test_zo_quadratic_mean():
    phi = np.array([0.5, 0.5])
    rng = RngState(202)
    est = np.zeros(2)
    n = 100_000
    for _ in range(n):
        est += zero_order_gradient(lambda p: float(p @ p), phi, 1, 1e-3, rng)
    est /= n
    assert np.linalg.norm(est - 1.0) / np.sqrt(2.0) <= 0.02


def test_zo_call_accounting():
    calls = []
    def objective(p):
        calls.append(1)
        return float(p.sum())
    zero_order_gradient(objective, np.full(5, 0.5), 3, 1e-2, RngState(7))
    assert len(calls) == 6


def test_zo_deterministic_per_seed():
    f = lambda p: float(np.sin(p).sum())
    a = zero_order_gradient(f, np.full(4, 0.3), 2, 1e-2, RngState(55))
    b = zero_order_gradient(f, np.full(4, 0.3), 2, 1e-2, RngState(55))
    assert np.array_equal(a, b)


def test_zo_parameter_validation():
    f = lambda p: 0.0
    with pytest.raises(ValueError):
        zero_order_gradient(f, np.zeros(3), 3, 1e-2, RngState(0))  # m must be < n_p
    with pytest.raises(ValueError):
        zero_order_gradient(f, np.zeros(3), 1, 0.0, RngState(0))
