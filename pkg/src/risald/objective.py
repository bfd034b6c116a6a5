"""Achievable-rate objective, surrogate log-prior/posterior, and the
sphere-smoothed zero-order gradient estimator.

The channel only ever enters as a black box: the estimator pays exactly 2m
counted evaluations per call and never needs derivatives.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import ChannelTensor
from .numerics import hermitian_logdet2, sample_unit_sphere


@dataclass(frozen=True)
class ObjectiveParams:
    """sigma_w2: receiver noise power (linear SNR is 1/sigma_w2).
    alpha: sharpness of the rate-tilted surrogate prior."""

    sigma_w2: float = 1.0
    alpha: float = 1.0

    def __post_init__(self):
        if not self.sigma_w2 > 0:
            raise ValueError("sigma_w2 must be > 0")
        if not np.isfinite(self.alpha):
            raise ValueError("alpha must be finite")


def achievable_rate(channel: ChannelTensor, sigma_w2: float) -> float:
    """Mean over subbands of log2 det(I + H H^H / sigma_w2), in bits/channel use.

    Goes through the Cholesky-based log-determinant, never a raw det.
    """
    if not sigma_w2 > 0:
        raise ValueError("sigma_w2 must be > 0")
    mats = channel.matrices
    n_rx = mats.shape[1]
    eye = np.eye(n_rx)
    total = 0.0
    for h in mats:
        gram = h @ h.conj().T
        gram = 0.5 * (gram + gram.conj().T)  # exact Hermitian despite rounding
        total += hermitian_logdet2(eye + gram / sigma_w2)
    return total / mats.shape[0]


def log_surrogate_prior(phi, psi, ev, params: ObjectiveParams) -> float:
    """alpha * F(M_psi(phi)), up to the (intractable) log normalizer.

    Costs exactly one counted channel evaluation.
    """
    return params.alpha * achievable_rate(ev.evaluate(phi, psi), params.sigma_w2)


def log_posterior(phi, phi_noisy, psi, sigma: float, ev, params: ObjectiveParams) -> float:
    """Log posterior density of phi given the noisy observation phi_noisy,
    up to a constant: alpha F(M_psi(phi)) - ||phi_noisy - phi||^2 / (2 sigma^2)."""
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    phi = np.asarray(phi, dtype=float)
    phi_noisy = np.asarray(phi_noisy, dtype=float)
    quad = float(np.sum((phi_noisy - phi) ** 2)) / (2.0 * sigma ** 2)
    return log_surrogate_prior(phi, psi, ev, params) - quad


def zero_order_gradient(objective, phi, m: int, eps_fd: float, rng) -> np.ndarray:
    """Sphere-smoothed two-point gradient estimate of a black-box objective.

    g_hat = (n_p / m) * sum_j [(f(phi + eps u_j) - f(phi - eps u_j)) / (2 eps)] u_j
    with u_j uniform on the unit sphere.  Unbiased for linear objectives
    because E[u u^T] = I / n_p.  Costs exactly 2m objective calls, applied in
    a fixed j order so reruns are bit-identical.

    Args:
        objective: callable mapping a configuration vector to a float.
        phi: point of estimation, shape (n_p,).
        m: number of probe directions, 1 <= m < n_p.
        eps_fd: probe radius, > 0.
        rng: RngState supplying the sphere draws.
    """
    phi = np.asarray(phi, dtype=float)
    n_p = phi.shape[0]
    m = int(m)
    if not 1 <= m < n_p:
        raise ValueError(f"need 1 <= m < n_p, got m={m}, n_p={n_p}")
    if not eps_fd > 0:
        raise ValueError("eps_fd must be > 0")
    acc = np.zeros(n_p)
    for _ in range(m):
        u = sample_unit_sphere(n_p, rng)
        delta = float(objective(phi + eps_fd * u)) - float(objective(phi - eps_fd * u))
        acc += (delta / (2.0 * eps_fd)) * u
    return (n_p / m) * acc
