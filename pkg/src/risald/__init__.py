"""Programmable-channel tuning with a trained denoiser driving annealed Langevin dynamics.

The package splits into: deterministic numerics (`numerics`), the counted
channel evaluators (`channel`), the rate objective and zero-order gradients
(`objective`), the denoiser network (`scorenet`), the channel-free sampler
(`ald`), active-learning training (`training`), measurement-based baselines
(`baselines`), and the command-line front end (`cli`).
"""

from .ald import NoiseSchedule, ald_optimize, ald_trace, make_schedule
from .baselines import (
    random_search,
    random_search_trace,
    simulator_gradient_ascent,
    zogd_optimize,
)
from .channel import (
    CascadedEvaluator,
    CascadedModel,
    ChannelEvaluator,
    ChannelTensor,
    Dipole,
    Environment,
    build_environment,
    cascaded_channel,
    cascaded_rate_gradient,
    desk_environment,
    evaluate_channel,
    paper_scale_environment,
    parse_scene_file,
    solve_dipole_channel,
    write_scene_file,
)
from .numerics import (
    RngState,
    hermitian_logdet2,
    sample_gaussian,
    sample_unit_sphere,
    solve_linear,
)
from .objective import (
    ObjectiveParams,
    achievable_rate,
    log_posterior,
    log_surrogate_prior,
    zero_order_gradient,
)
from .scorenet import (
    DenoiserParams,
    backward,
    denoise,
    init_denoiser,
    load_checkpoint,
    save_checkpoint,
    zero_denoiser,
)
from .training import (
    TrainConfig,
    TrainLogRow,
    TrainSample,
    loss_output_gradient,
    map_loss,
    train,
)

__version__ = "0.1.0"
