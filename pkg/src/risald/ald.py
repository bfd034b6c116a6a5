"""Annealed Langevin dynamics driven by a trained (or oracle) denoiser.

The sampler never touches a channel evaluator: the denoiser supplies the score
through the posterior-mean identity (D(phi) - phi) / sigma^2, so inference is
measurement-free.  Diagnostics that do want rates (:func:`ald_trace`) score
recorded iterates through a separate diagnostic evaluator afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, InvalidSchedule
from .objective import achievable_rate
from .numerics import sample_gaussian
from .scorenet import as_denoise_fn


@dataclass(frozen=True)
class NoiseSchedule:
    """Geometric ladder sigma_t = sigma1 * beta^(t-1) for t = 1..t_steps, with
    k_steps inner Langevin iterations per level and step size ``step``."""

    sigma1: float
    beta: float
    t_steps: int
    k_steps: int
    step: float

    def levels(self) -> np.ndarray:
        return self.sigma1 * self.beta ** np.arange(self.t_steps)

    @property
    def total_iterations(self) -> int:
        return self.t_steps * self.k_steps


def make_schedule(sigma1: float = 0.5, beta: float = 0.9, t_steps: int = 10,
                  k_steps: int = 5, step: float = 1e-2) -> NoiseSchedule:
    """Validated schedule; defaults are the standard inference settings.

    Raises:
        InvalidSchedule: sigma1 <= 0, beta outside (0, 1), t_steps/k_steps < 1,
            or step <= 0.
    """
    if not sigma1 > 0:
        raise InvalidSchedule(f"sigma1 must be > 0, got {sigma1}")
    if not 0.0 < beta < 1.0:
        raise InvalidSchedule(f"beta must lie strictly inside (0, 1), got {beta}")
    if int(t_steps) < 1 or int(k_steps) < 1:
        raise InvalidSchedule("t_steps and k_steps must be >= 1")
    if not step > 0:
        raise InvalidSchedule(f"step must be > 0, got {step}")
    return NoiseSchedule(float(sigma1), float(beta), int(t_steps), int(k_steps), float(step))


def ald_optimize(denoiser, psi, schedule: NoiseSchedule, phi0, rng, *,
                 noise: bool = True, sigma_scaled_step: bool = False,
                 _track=None) -> np.ndarray:
    """Run the annealed Langevin loop and return the final iterate.

    Update per inner iteration at level sigma_t:
        phi <- phi + eps/(2 sigma_t^2) (D(phi; psi, sigma_t) - phi) + sqrt(eps) z,
    clamped to [0, 1].  The final level's last iterate is returned; each outer
    level restarts from the previous level's last iterate.

    Args:
        denoiser: DenoiserParams or a callable (phi, psi, sigma) -> phi_hat.
        noise: test hook; False freezes z = 0.
        sigma_scaled_step: classical variant eps_t = eps (sigma_t / sigma_T)^2
            instead of a constant step.  Off by default.
        _track: internal; a list collecting a copy of every iterate.
    """
    fn = as_denoise_fn(denoiser)
    phi0 = np.asarray(phi0, dtype=float)
    if phi0.ndim != 1:
        raise DimensionMismatch(f"phi0 must be a vector, got shape {phi0.shape}")
    levels = schedule.levels()
    phi = np.clip(phi0, 0.0, 1.0)
    n_p = phi.shape[0]
    for sigma_t in levels:
        eps = schedule.step
        if sigma_scaled_step:
            eps = schedule.step * (sigma_t / levels[-1]) ** 2
        drift = eps / (2.0 * sigma_t ** 2)
        kick = np.sqrt(eps)
        for _ in range(schedule.k_steps):
            z = sample_gaussian(n_p, rng) if noise else np.zeros(n_p)
            phi = phi + drift * (fn(phi, psi, sigma_t) - phi) + kick * z
            phi = np.clip(phi, 0.0, 1.0)
            if _track is not None:
                _track.append(phi.copy())
    return phi


def ald_trace(denoiser, psi, schedule: NoiseSchedule, phi0, rng, ev,
              sigma_w2: float = 1.0, **kwargs) -> list:
    """Same trajectory as :func:`ald_optimize` (same rng draw order), plus the
    rate of every iterate.

    Rates are measured through ``ev.diagnostic_clone()``, so the optimization
    call counter of ``ev`` is untouched.

    Returns:
        list of (iteration, phi, rate) with length t_steps * k_steps + 1;
        entry 0 is the (clamped) starting point.
    """
    iterates = [np.clip(np.asarray(phi0, dtype=float), 0.0, 1.0)]
    ald_optimize(denoiser, psi, schedule, phi0, rng, _track=iterates, **kwargs)
    diag = ev.diagnostic_clone()
    return [
        (i, phi, achievable_rate(diag.evaluate(phi, psi), sigma_w2))
        for i, phi in enumerate(iterates)
    ]
