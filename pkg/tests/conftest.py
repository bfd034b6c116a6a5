import os
import sys
import time

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from risald.ald import make_schedule
from risald.channel import ChannelEvaluator, desk_environment
from risald.numerics import RngState
from risald.scorenet import init_denoiser
from risald.training import TrainConfig, train

# Shared recipe for the end-to-end desk benchmark: a wide denoiser trained on
# 32 settings, then annealed with a long fine-stepped schedule.  Training this
# is minutes of work, so it lives in a session fixture and only runs when a
# test actually asks for it.

BENCH_TRAIN = TrainConfig(iterations=200, eta=5e-4, lam=1e-3, beta=0.9,
                          gamma=0.25, m=4, eps_fd=0.30, sigma_init=0.5,
                          momentum=0.98, reset_rule="text_semantics")
BENCH_HIDDEN = (2048,) * 5
BENCH_SLOTS = 32


def bench_schedule():
    return make_schedule(0.5, 0.925, 50, 1, 5e-5)


BENCH_SIGMA_SCALED = True


@pytest.fixture(scope="session")
def trained_map():
    """(theta, wall seconds, channel calls) for the desk benchmark denoiser."""
    env = desk_environment()
    settings_rng = RngState(7)
    settings = [settings_rng.derive(j).uniform(env.psi_dim) for j in range(BENCH_SLOTS)]
    theta0 = init_denoiser(env.n_p, env.psi_dim, RngState(11), hidden=BENCH_HIDDEN)
    ev = ChannelEvaluator(env)
    t0 = time.perf_counter()
    theta, _ = train(theta0, settings, ev, BENCH_TRAIN, RngState(13))
    return theta, time.perf_counter() - t0, ev.call_count
