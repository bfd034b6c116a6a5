"""Active-learning training of the denoiser against the counted channel.

Each iteration denoises the current working set, measures the rate of the
denoised outputs (one counted call each), estimates the rate gradient at the
outputs with the zero-order probe (2m counted calls each), backpropagates the
combined loss gradient, and then refines the working set: the denoised outputs
become the next inputs at a beta-shrunk noise level, unless a coin flip
re-randomizes the whole set back to sigma_init.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NonFiniteLoss
from .objective import ObjectiveParams, achievable_rate, zero_order_gradient
from .scorenet import DenoiserParams, as_denoise_fn, backward, denoise, sgd_step

RESET_RULES = ("alg2_literal", "text_semantics")


@dataclass
class TrainSample:
    """One working-set entry: noisy configuration, environment setting, noise level."""

    phi: np.ndarray
    psi: np.ndarray
    sigma: float


@dataclass(frozen=True)
class TrainConfig:
    """Hyperparameters of the active-learning loop.

    ``reset_rule`` picks the re-randomization test: 'alg2_literal' resets when
    the uniform draw v > gamma (reset probability 1 - gamma); 'text_semantics'
    resets when v < gamma (gamma is the exploration probability).
    """

    iterations: int = 200
    eta: float = 5e-4
    lam: float = 1.0
    beta: float = 0.9
    gamma: float = 0.25
    m: int = 4
    eps_fd: float = 1e-2
    sigma_init: float = 0.5
    sigma_w2: float = 1.0
    batch_size: int | None = None
    reset_rule: str = "alg2_literal"
    momentum: float = 0.0

    def __post_init__(self):
        if self.iterations < 1:
            raise ValueError("iterations must be >= 1")
        if not self.eta > 0:
            raise ValueError("eta must be > 0")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie in (0, 1)")
        if not 0.0 <= self.gamma <= 1.0:
            raise ValueError("gamma must lie in [0, 1]")
        if not self.sigma_init > 0:
            raise ValueError("sigma_init must be > 0")
        if not self.sigma_w2 > 0:
            raise ValueError("sigma_w2 must be > 0")
        if self.reset_rule not in RESET_RULES:
            raise ValueError(f"reset_rule must be one of {RESET_RULES}")
        if not 0.0 <= self.momentum < 1.0:
            raise ValueError("momentum must lie in [0, 1)")


@dataclass(frozen=True)
class TrainLogRow:
    iteration: int
    loss: float
    mean_rate: float
    sigma_min: float
    sigma_max: float
    reset: bool
    channel_calls: int  # cumulative counted calls spent by training so far


def loss_output_gradient(phi, phi_hat, sigma: float, lam: float, rate_gradient) -> np.ndarray:
    """d(loss)/d(phi_hat) for one sample:
    (2 lam / sigma^2)(phi_hat - phi) - rate_gradient."""
    phi = np.asarray(phi, dtype=float)
    phi_hat = np.asarray(phi_hat, dtype=float)
    return (2.0 * lam / sigma ** 2) * (phi_hat - phi) - np.asarray(rate_gradient, dtype=float)


def map_loss(denoiser, batch, lam: float, ev, params: ObjectiveParams) -> float:
    """Mean over the batch of lam/sigma^2 ||phi - D(phi)||^2 - F(M_psi(D(phi))).

    Costs exactly len(batch) counted channel evaluations.
    """
    if not batch:
        raise ValueError("batch must be non-empty")
    fn = as_denoise_fn(denoiser)
    total = 0.0
    for s in batch:
        phi_hat = fn(s.phi, s.psi, s.sigma)
        quad = lam / s.sigma ** 2 * float(np.sum((np.asarray(s.phi) - phi_hat) ** 2))
        rate = achievable_rate(ev.evaluate(phi_hat, s.psi), params.sigma_w2)
        total += quad - rate
    return total / len(batch)


class _GradAccumulator:
    """Running sum of per-sample (dws, dbs); mean() divides once at the end.

    Summing in place keeps memory at one gradient set regardless of batch
    size (a per-sample list is prohibitive for wide layers).
    """

    def __init__(self):
        self._dws = None
        self._dbs = None
        self._count = 0

    def add(self, dws, dbs):
        if self._dws is None:
            self._dws = [np.array(g, dtype=float) for g in dws]
            self._dbs = [np.array(g, dtype=float) for g in dbs]
        else:
            for acc, g in zip(self._dws, dws):
                acc += g
            for acc, g in zip(self._dbs, dbs):
                acc += g
        self._count += 1

    def mean(self):
        dws = [g / self._count for g in self._dws]
        dbs = [g / self._count for g in self._dbs]
        return dws, dbs


def _mean_grads(per_sample):
    acc = _GradAccumulator()
    for dws, dbs in per_sample:
        acc.add(dws, dbs)
    return acc.mean()


def train(theta0: DenoiserParams, settings, ev, cfg: TrainConfig, rng):
    """Run the active-learning loop; returns (trained params, per-iteration log).

    ``settings`` is a list of environment settings psi; working-set slot j is
    pinned to settings[j % len(settings)].  Randomness is split into one
    control stream (reset coin flips) and one stream per slot (configuration
    draws and zero-order probes), all derived from ``rng``, so a run is
    reproducible regardless of batch size or scheduling.

    Call accounting: iterations * batch * (2m + 1) counted evaluations.

    Raises:
        NonFiniteLoss: the loss went NaN/inf; message carries the iteration
            and the offending state.
    """
    if not settings:
        raise ValueError("settings must be non-empty")
    theta = theta0.copy()
    n_p = theta.n_p
    batch = cfg.batch_size if cfg.batch_size is not None else len(settings)
    if batch < 1:
        raise ValueError("batch_size must be >= 1")
    psis = [np.asarray(settings[j % len(settings)], dtype=float) for j in range(batch)]
    control = rng.derive(0)
    streams = [rng.derive(1 + j) for j in range(batch)]
    samples = [
        TrainSample(phi=streams[j].uniform(n_p), psi=psis[j], sigma=cfg.sigma_init)
        for j in range(batch)
    ]
    velocity = None
    calls_at_start = ev.call_count
    rows = []
    for it in range(1, cfg.iterations + 1):
        v = control.uniform_scalar()
        reset = v > cfg.gamma if cfg.reset_rule == "alg2_literal" else v < cfg.gamma
        if reset:
            for j, s in enumerate(samples):
                s.phi = streams[j].uniform(n_p)
                s.sigma = cfg.sigma_init

        acc = _GradAccumulator()
        loss_terms = []
        rates = []
        for j, s in enumerate(samples):
            phi_hat, trace = denoise(theta, s.phi, s.psi, s.sigma)
            rate = achievable_rate(ev.evaluate(phi_hat, s.psi), cfg.sigma_w2)

            def rate_at(q, _psi=s.psi):
                return achievable_rate(ev.evaluate(q, _psi), cfg.sigma_w2)

            g_rate = zero_order_gradient(rate_at, phi_hat, cfg.m, cfg.eps_fd, streams[j])
            g_out = loss_output_gradient(s.phi, phi_hat, s.sigma, cfg.lam, g_rate)
            acc.add(*backward(theta, trace, g_out))
            loss_terms.append(
                cfg.lam / s.sigma ** 2 * float(np.sum((s.phi - phi_hat) ** 2)) - rate)
            rates.append(rate)
            s.phi = phi_hat  # refined working set: denoised output feeds the next round

        loss = float(np.mean(loss_terms))
        if not np.isfinite(loss):
            raise NonFiniteLoss(
                f"iteration {it}: loss={loss!r}, sigmas="
                f"[{min(s.sigma for s in samples):.3e}, {max(s.sigma for s in samples):.3e}]")

        dws, dbs = acc.mean()
        if cfg.momentum > 0.0:
            if velocity is None:
                velocity = ([np.zeros_like(w) for w in dws], [np.zeros_like(b) for b in dbs])
            for buf, g in zip(velocity[0], dws):
                buf *= cfg.momentum
                buf += g
            for buf, g in zip(velocity[1], dbs):
                buf *= cfg.momentum
                buf += g
            sgd_step(theta, velocity[0], velocity[1], cfg.eta)
        else:
            sgd_step(theta, dws, dbs, cfg.eta)

        rows.append(TrainLogRow(
            iteration=it,
            loss=loss,
            mean_rate=float(np.mean(rates)),
            sigma_min=min(s.sigma for s in samples),
            sigma_max=max(s.sigma for s in samples),
            reset=reset,
            channel_calls=ev.call_count - calls_at_start,
        ))
        for s in samples:
            s.sigma *= cfg.beta
    return theta, rows
