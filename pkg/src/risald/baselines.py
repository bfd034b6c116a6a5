"""Measurement-based baseline optimizers: zero-order gradient ascent, random
search, and gradient ascent on a known simulator.

Every method is charged on the evaluator it measures through; per-step rate
traces go through diagnostic clones so the optimization budget stays exact.
"""

from __future__ import annotations

import numpy as np

from .objective import achievable_rate, zero_order_gradient


def zogd_optimize(ev, psi, phi0, steps: int, m: int, eps_fd: float, lr: float, rng,
                  sigma_w2: float = 1.0, gradient_estimator=None):
    """Projected zero-order gradient ascent on the measured rate.

    phi_{s+1} = clamp(phi_s + lr * g_hat(phi_s)); costs exactly steps * 2m
    counted calls on ``ev`` (the per-step rates in the trace are scored on a
    diagnostic clone).

    Args:
        gradient_estimator: test seam; callable (objective, phi, rng) -> grad
            replacing the zero-order probe (e.g. an analytic oracle).

    Returns:
        (phi_final, trace) where trace is a list of (step, phi, rate) and
        entry 0 is the starting point.
    """
    phi = np.clip(np.asarray(phi0, dtype=float), 0.0, 1.0)
    diag = ev.diagnostic_clone()

    def measured_rate(q):
        return achievable_rate(ev.evaluate(q, psi), sigma_w2)

    trace = [(0, phi.copy(), achievable_rate(diag.evaluate(phi, psi), sigma_w2))]
    for s in range(1, int(steps) + 1):
        if gradient_estimator is not None:
            g = gradient_estimator(measured_rate, phi, rng)
        else:
            g = zero_order_gradient(measured_rate, phi, m, eps_fd, rng)
        phi = np.clip(phi + lr * g, 0.0, 1.0)
        trace.append((s, phi.copy(), achievable_rate(diag.evaluate(phi, psi), sigma_w2)))
    return phi, trace


def random_search(ev, psi, n: int, rng, sigma_w2: float = 1.0, candidates=None):
    """Best of n uniform configurations by measured rate; exactly n counted calls.

    Args:
        candidates: deterministic variant -- score exactly these configurations
            instead of drawing (n and rng are then ignored).

    Returns:
        (best_phi, best_rate).
    """
    if candidates is None:
        if int(n) < 1:
            raise ValueError("n must be >= 1")
        candidates = (rng.uniform(ev.n_p) for _ in range(int(n)))
    best_phi, best_rate = None, -np.inf
    for phi in candidates:
        phi = np.asarray(phi, dtype=float)
        rate = achievable_rate(ev.evaluate(phi, psi), sigma_w2)
        if rate > best_rate:
            best_phi, best_rate = phi.copy(), rate
    return best_phi, best_rate


def random_search_trace(ev, psi, n: int, rng, sigma_w2: float = 1.0, phi0=None):
    """Random search with a best-so-far trace.

    Row 0 holds the incumbent ``phi0`` (scored diagnostically, not charged to
    the search); rows 1..n are the best-so-far after each counted draw, so the
    rate column is non-decreasing.

    Returns:
        (best_phi, trace) with trace rows (i, best_phi_so_far, best_rate_so_far).
    """
    if int(n) < 1:
        raise ValueError("n must be >= 1")
    if phi0 is None:
        phi0 = np.full(ev.n_p, 0.5)
    phi0 = np.clip(np.asarray(phi0, dtype=float), 0.0, 1.0)
    diag = ev.diagnostic_clone()
    best_phi = phi0.copy()
    best_rate = achievable_rate(diag.evaluate(phi0, psi), sigma_w2)
    trace = [(0, best_phi.copy(), best_rate)]
    for i in range(1, int(n) + 1):
        phi = rng.uniform(ev.n_p)
        rate = achievable_rate(ev.evaluate(phi, psi), sigma_w2)
        if rate > best_rate:
            best_phi, best_rate = phi.copy(), rate
        trace.append((i, best_phi.copy(), best_rate))
    return best_phi, trace


def simulator_gradient_ascent(ev_truth, ev_model, psi, phi0, steps: int, lr: float,
                              fd_step: float = 1e-4, sigma_w2: float = 1.0,
                              backtrack: bool = False):
    """Gradient ascent on a simulator the optimizer fully knows.

    The gradient is the full-coordinate central finite difference of the model
    rate (2 n_p model calls per step); iterates are scored on ``ev_truth``,
    which is the same evaluator for perfect knowledge and a noisy-overlay one
    when the simulator only approximates the real channel.

    Args:
        backtrack: halve the step while the model rate would decrease (at most
            20 halvings; costs extra model calls).

    Returns:
        (phi_final, trace) with trace rows (step, phi, truth_rate).
    """
    phi = np.clip(np.asarray(phi0, dtype=float), 0.0, 1.0)
    n_p = phi.shape[0]

    def model_rate(q):
        return achievable_rate(ev_model.evaluate(q, psi), sigma_w2)

    def truth_rate(q):
        return achievable_rate(ev_truth.evaluate(q, psi), sigma_w2)

    trace = [(0, phi.copy(), truth_rate(phi))]
    for s in range(1, int(steps) + 1):
        grad = np.empty(n_p)
        for i in range(n_p):
            e = np.zeros(n_p)
            e[i] = fd_step
            grad[i] = (model_rate(phi + e) - model_rate(phi - e)) / (2.0 * fd_step)
        if backtrack:
            base = model_rate(phi)
            step = lr
            cand = np.clip(phi + step * grad, 0.0, 1.0)
            tries = 0
            while model_rate(cand) < base and tries < 20:
                step *= 0.5
                cand = np.clip(phi + step * grad, 0.0, 1.0)
                tries += 1
            phi = cand
        else:
            phi = np.clip(phi + lr * grad, 0.0, 1.0)
        trace.append((s, phi.copy(), truth_rate(phi)))
    return phi, trace
