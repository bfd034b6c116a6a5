"""Command-line experiment harness.

Subcommands: ``train`` (fit the denoiser against the counted channel),
``optimize`` (single-shot configuration search), ``sweep-snr`` (rate vs noise
power per method), ``trace`` (per-iteration rate curves), ``latency``
(channel-call accounting table), ``heatmap`` (spatial rate maps for a probe
receiver).  Every output file starts with a config-hash + seed-list comment
and contains no timestamps, so a rerun with the same config and seeds is
byte-identical.

Exit codes: 0 success, 2 bad config/scene/checkpoint, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import hashlib
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .ald import NoiseSchedule, ald_optimize, ald_trace, make_schedule
from .baselines import (
    random_search,
    random_search_trace,
    simulator_gradient_ascent,
    zogd_optimize,
)
from .channel import ChannelEvaluator, ChannelTensor, Environment, parse_scene_file
from .errors import (
    CheckpointError,
    ConfigError,
    DegenerateScene,
    InvalidScene,
    InvalidSchedule,
    NonFiniteLoss,
    NotPositiveDefinite,
    SingularMatrix,
)
from .kvformat import kv_to_dict, parse_floats, read_kv_file, take_scalar
from .numerics import RngState
from .objective import achievable_rate
from .scorenet import DenoiserParams, denoise, init_denoiser, load_checkpoint, save_checkpoint
from .training import TrainConfig, train

METHODS = ("ald", "zogd", "random", "sim_perfect", "sim_imperfect")

CONFIG_EXIT = 2
NUMERIC_EXIT = 3

_CONFIG_ERRORS = (ConfigError, InvalidScene, InvalidSchedule, CheckpointError,
                  FileNotFoundError, IsADirectoryError, PermissionError)
_NUMERIC_ERRORS = (SingularMatrix, NotPositiveDefinite, DegenerateScene,
                   NonFiniteLoss, FloatingPointError)


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a batch run needs; built from a flat key-value file plus
    command-line overrides.  ``config_hash`` fingerprints the resolved state
    (including the scene file bytes) and is stamped into every output."""

    scene_path: str
    methods: tuple[str, ...]
    seeds: tuple[int, ...]
    snrs: tuple[float, ...]
    budget: int
    out_dir: str
    train: TrainConfig
    train_slots: int
    train_hidden: tuple[int, ...]
    schedule: NoiseSchedule
    sigma_scaled: bool
    zogd_lr: float
    zogd_m: int
    zogd_eps_fd: float
    sim_lr: float
    sim_backtrack: bool
    sim_overlay: float
    heatmap_res: int
    workers: int
    seed: int
    config_hash: str


def _parse_seeds(value: str) -> tuple[int, ...]:
    value = value.strip()
    if ".." in value:
        lo, hi = value.split("..", 1)
        return tuple(range(int(lo), int(hi) + 1))
    return tuple(int(p) for p in value.split(",") if p.strip())


def _parse_hidden(value: str) -> tuple[int, ...]:
    # "1024x5" is five layers of 1024; "64,64,32" is explicit per-layer widths
    if "x" in value:
        width, depth = value.split("x", 1)
        return (int(width),) * int(depth)
    return tuple(int(p) for p in value.split(",") if p.strip())


def load_experiment_config(path=None, *, scene=None, out=None, seed=None) -> ExperimentConfig:
    """Read the flat config file (all keys optional) and apply CLI overrides.

    Raises:
        ConfigError: unreadable file, unknown key, or malformed value.
    """
    grouped = kv_to_dict(read_kv_file(path)) if path is not None else {}

    def scalar(key, conv, default):
        val = take_scalar(grouped, key, conv, path=path)
        return default if val is None else val

    scene_path = scalar("scene", str, None)
    methods = scalar("methods", lambda v: tuple(p.strip() for p in v.split(",") if p.strip()),
                     ("ald", "zogd", "random", "sim_perfect"))
    seeds = scalar("seeds", _parse_seeds, tuple(range(20)))
    snrs = scalar("snr", parse_floats, (1.0,))
    budget = scalar("budget", int, 50)
    out_dir = scalar("out", str, "out")
    base_seed = scalar("seed", int, 0)

    tc_kwargs = {}
    for key, conv, field in (
        ("train_iterations", int, "iterations"),
        ("train_eta", float, "eta"),
        ("train_lam", float, "lam"),
        ("train_beta", float, "beta"),
        ("train_gamma", float, "gamma"),
        ("train_m", int, "m"),
        ("train_eps_fd", float, "eps_fd"),
        ("train_sigma_init", float, "sigma_init"),
        ("train_sigma_w2", float, "sigma_w2"),
        ("train_batch", int, "batch_size"),
        ("train_reset_rule", str, "reset_rule"),
        ("train_momentum", float, "momentum"),
    ):
        val = take_scalar(grouped, key, conv, path=path)
        if val is not None:
            tc_kwargs[field] = val
    try:
        train_cfg = TrainConfig(**tc_kwargs)
    except ValueError as exc:
        raise ConfigError(str(exc), path=path)
    train_slots = scalar("train_slots", int, 8)
    train_hidden = scalar("train_hidden", _parse_hidden, (64,) * 5)

    schedule = make_schedule(
        scalar("sched_sigma1", float, 0.5),
        scalar("sched_beta", float, 0.9),
        scalar("sched_t", int, 10),
        scalar("sched_k", int, 5),
        scalar("sched_step", float, 1e-2),
    )
    sigma_scaled = bool(scalar("sched_sigma_scaled", int, 0))

    zogd_lr = scalar("zogd_lr", float, 0.03)
    zogd_m = scalar("zogd_m", int, 4)
    zogd_eps_fd = scalar("zogd_eps_fd", float, 1e-2)
    sim_lr = scalar("sim_lr", float, 0.1)
    sim_backtrack = bool(scalar("sim_backtrack", int, 1))
    sim_overlay = scalar("sim_overlay", float, 0.01)
    heatmap_res = scalar("heatmap_res", int, 40)
    workers = scalar("workers", int, 1)

    if grouped:
        key = next(iter(grouped))
        line = grouped[key][0][0]
        raise ConfigError(f"unknown config key {key!r}", path=path, line=line)

    if scene is not None:
        scene_path = scene
    if out is not None:
        out_dir = out
    if seed is not None:
        base_seed = seed
        seeds = (seed,)
    if scene_path is None:
        raise ConfigError("no scene file: pass --scene or set 'scene' in the config", path=path)
    if not methods:
        raise ConfigError("method set is empty", path=path)
    for m in methods:
        if m not in METHODS:
            raise ConfigError(f"unknown method {m!r} (choose from {', '.join(METHODS)})", path=path)
    if not seeds:
        raise ConfigError("seed list is empty", path=path)
    if any(s <= 0 for s in snrs):
        raise ConfigError("snr values must be > 0", path=path)
    if budget < 1:
        raise ConfigError("budget must be >= 1", path=path)

    cfg = ExperimentConfig(
        scene_path=scene_path, methods=methods, seeds=seeds, snrs=snrs,
        budget=budget, out_dir=out_dir, train=train_cfg, train_slots=train_slots,
        train_hidden=train_hidden, schedule=schedule, sigma_scaled=sigma_scaled,
        zogd_lr=zogd_lr, zogd_m=zogd_m, zogd_eps_fd=zogd_eps_fd, sim_lr=sim_lr,
        sim_backtrack=sim_backtrack, sim_overlay=sim_overlay,
        heatmap_res=heatmap_res, workers=workers, seed=base_seed, config_hash="")
    return dataclasses.replace(cfg, config_hash=_hash_config(cfg))


def _hash_config(cfg: ExperimentConfig) -> str:
    h = hashlib.sha256()
    for field in sorted(f.name for f in dataclasses.fields(cfg)):
        if field == "config_hash":
            continue
        h.update(f"{field}={getattr(cfg, field)!r}\n".encode())
    try:
        with open(cfg.scene_path, "rb") as fh:
            h.update(fh.read())
    except OSError:
        pass  # missing scene surfaces as ConfigError later, with a better message
    return h.hexdigest()[:16]


def _header(cfg: ExperimentConfig, extra: str | None = None) -> str:
    lines = [f"# config-hash: {cfg.config_hash}",
             f"# seeds: {','.join(str(s) for s in cfg.seeds)}"]
    if extra:
        lines.append(f"# {extra}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# per-seed streams
#
# base = RngState(seed); derive(0) -> environment setting psi, derive(1) ->
# starting configuration phi0, derive(2) -> ald, derive(3) -> random search,
# derive(4) -> zogd.  Methods never share a stream, so adding one to the
# method set cannot move another's draws.


def _setting(env: Environment, seed: int) -> np.ndarray:
    return RngState(seed).derive(0).uniform(env.psi_dim)


def _start(env: Environment, seed: int) -> np.ndarray:
    return RngState(seed).derive(1).uniform(env.n_p)


def run_method(method: str, env: Environment, theta, cfg: ExperimentConfig,
               seed: int, snr: float, want_trace: bool = False):
    """Run one (method, seed, snr) cell; returns (final_rate, calls, trace).

    ``calls`` counts optimization-time channel evaluations only; trace rows
    are (iteration, rate) starting at iteration 0 and are scored on a
    diagnostic clone.
    """
    sigma_w2 = 1.0 / snr
    psi = _setting(env, seed)
    phi0 = _start(env, seed)
    b = RngState(seed)
    ev = ChannelEvaluator(env)
    diag = ev.diagnostic_clone()

    if method == "ald":
        if theta is None:
            raise ConfigError("method 'ald' needs a trained checkpoint (--checkpoint)")
        if want_trace:
            rows = ald_trace(theta, psi, cfg.schedule, phi0, b.derive(2), ev,
                             sigma_w2=sigma_w2, sigma_scaled_step=cfg.sigma_scaled)
            trace = [(i, r) for i, _, r in rows]
            return trace[-1][1], ev.call_count, trace
        phi = ald_optimize(theta, psi, cfg.schedule, phi0, b.derive(2),
                           sigma_scaled_step=cfg.sigma_scaled)
        rate = achievable_rate(diag.evaluate(phi, psi), sigma_w2)
        return rate, ev.call_count, [(cfg.schedule.total_iterations, rate)]
    if method == "zogd":
        _, tr = zogd_optimize(ev, psi, phi0, steps=cfg.budget, m=cfg.zogd_m,
                              eps_fd=cfg.zogd_eps_fd, lr=cfg.zogd_lr,
                              rng=b.derive(4), sigma_w2=sigma_w2)
        return tr[-1][2], ev.call_count, [(s, r) for s, _, r in tr]
    if method == "random":
        _, tr = random_search_trace(ev, psi, cfg.budget, b.derive(3),
                                    sigma_w2=sigma_w2, phi0=phi0)
        return tr[-1][2], ev.call_count, [(s, r) for s, _, r in tr]
    if method in ("sim_perfect", "sim_imperfect"):
        # the optimizer always believes the clean simulator; imperfect
        # knowledge means reality carries a noise overlay the model lacks
        overlay = 0.0 if method == "sim_perfect" else cfg.sim_overlay
        model = ChannelEvaluator(env, noise_overlay=0.0, seed=seed)
        truth = ChannelEvaluator(env, noise_overlay=overlay, seed=seed)
        _, tr = simulator_gradient_ascent(truth, model, psi, phi0, steps=cfg.budget,
                                          lr=cfg.sim_lr, sigma_w2=sigma_w2,
                                          backtrack=cfg.sim_backtrack)
        return tr[-1][2], model.call_count, [(s, r) for s, _, r in tr]
    raise ConfigError(f"unknown method {method!r}")


def _run_cell(args):
    # module-level trampoline so the worker pool can pickle it
    return args[:3] + run_method(*args[3:])


def _fan_out(tasks, workers: int):
    """Run (key..., run_method args) tasks, serially or on a process pool;
    results come back in task order either way."""
    if workers <= 1 or len(tasks) <= 1:
        return [_run_cell(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_run_cell, tasks))


# ---------------------------------------------------------------------------
# subcommands


def cmd_train(cfg: ExperimentConfig) -> int:
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    base = RngState(cfg.seed)
    theta0 = init_denoiser(env.n_p, env.psi_dim, base.derive(0), hidden=cfg.train_hidden)
    settings_rng = base.derive(1)
    settings = [settings_rng.derive(j).uniform(env.psi_dim) for j in range(cfg.train_slots)]
    ev = ChannelEvaluator(env)
    theta, log = train(theta0, settings, ev, cfg.train, base.derive(2))

    os.makedirs(cfg.out_dir, exist_ok=True)
    ckpt = os.path.join(cfg.out_dir, "checkpoint.bin")
    save_checkpoint(theta, ckpt)
    log_path = os.path.join(cfg.out_dir, "train_log.csv")
    with open(log_path, "w", encoding="utf-8") as fh:
        fh.write(_header(cfg, "schema: train-log v1"))
        fh.write("iter,loss,mean_rate,sigma_min,sigma_max,reset,channel_calls\n")
        for row in log:
            fh.write(f"{row.iteration},{row.loss!r},{row.mean_rate!r},"
                     f"{row.sigma_min!r},{row.sigma_max!r},{int(row.reset)},"
                     f"{row.channel_calls}\n")

    # held-out score: denoise a fresh configuration for settings never seen in
    # training, at a fixed mid-schedule noise level
    diag = ev.diagnostic_clone()
    held = base.derive(3)
    rates = []
    for j in range(16):
        s = held.derive(j)
        psi = s.uniform(env.psi_dim)
        phi_hat = np.clip(denoise(theta, s.uniform(env.n_p), psi, 0.1)[0], 0.0, 1.0)
        rates.append(achievable_rate(diag.evaluate(phi_hat, psi), cfg.train.sigma_w2))
    print(f"checkpoint: {ckpt}")
    print(f"log: {log_path} ({len(log)} rows, {ev.call_count} channel calls)")
    print(f"held-out mean rate: {np.mean(rates):.4f}")
    return 0


def _load_theta(cfg: ExperimentConfig, checkpoint, env: Environment) -> DenoiserParams | None:
    if checkpoint is None:
        return None
    return load_checkpoint(checkpoint, n_p=env.n_p, psi_dim=env.psi_dim)


def cmd_optimize(cfg: ExperimentConfig, checkpoint) -> int:
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    theta = _load_theta(cfg, checkpoint, env)
    method = cfg.methods[0]
    if method == "ald" and theta is None:
        raise ConfigError("method 'ald' needs a trained checkpoint (--checkpoint)")
    phi, calls, psi = _optimize_phi(method, env, theta, cfg, cfg.seed, cfg.snrs[0])
    diag = ChannelEvaluator(env).diagnostic_clone()
    rate = achievable_rate(diag.evaluate(phi, psi), 1.0 / cfg.snrs[0])
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = os.path.join(cfg.out_dir, "phi_opt.txt")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_header(cfg, f"method: {method}"))
        for v in np.clip(phi, 0.0, 1.0):
            fh.write(f"{float(v)!r}\n")
    print(f"phi: {out}")
    print(f"method={method} seed={cfg.seed} rate={rate:.4f} calls={calls}")
    return 0


def _optimize_phi(method: str, env, theta, cfg, seed, snr):
    """Like run_method but returns the final configuration itself."""
    sigma_w2 = 1.0 / snr
    psi = _setting(env, seed)
    phi0 = _start(env, seed)
    b = RngState(seed)
    ev = ChannelEvaluator(env)
    if method == "ald":
        phi = ald_optimize(theta, psi, cfg.schedule, phi0, b.derive(2),
                           sigma_scaled_step=cfg.sigma_scaled)
        return np.clip(phi, 0.0, 1.0), 0, psi
    if method == "zogd":
        phi, _ = zogd_optimize(ev, psi, phi0, steps=cfg.budget, m=cfg.zogd_m,
                               eps_fd=cfg.zogd_eps_fd, lr=cfg.zogd_lr,
                               rng=b.derive(4), sigma_w2=sigma_w2)
        return phi, ev.call_count, psi
    if method == "random":
        phi, _ = random_search(ev, psi, cfg.budget, b.derive(3), sigma_w2=sigma_w2)
        return phi, ev.call_count, psi
    overlay = 0.0 if method == "sim_perfect" else cfg.sim_overlay
    model = ChannelEvaluator(env, noise_overlay=0.0, seed=seed)
    truth = ChannelEvaluator(env, noise_overlay=overlay, seed=seed)
    phi, _ = simulator_gradient_ascent(truth, model, psi, phi0,
                                       steps=cfg.budget, lr=cfg.sim_lr,
                                       sigma_w2=sigma_w2, backtrack=cfg.sim_backtrack)
    return phi, model.call_count, psi


def cmd_sweep_snr(cfg: ExperimentConfig, checkpoint) -> int:
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    theta = _load_theta(cfg, checkpoint, env)
    if "ald" in cfg.methods and theta is None:
        raise ConfigError("sweep includes 'ald': a --checkpoint is required")
    tasks = [(m, snr, seed, m, env, theta, cfg, seed, snr)
             for m in cfg.methods for snr in cfg.snrs for seed in cfg.seeds]
    results = _fan_out(tasks, cfg.workers)
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = os.path.join(cfg.out_dir, "sweep_snr.csv")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_header(cfg, "schema: sweep-snr v1"))
        fh.write("method,snr,seed,rate,calls\n")
        for method, snr, seed, rate, calls, _ in results:
            fh.write(f"{method},{snr!r},{seed},{float(rate)!r},{calls}\n")
    print(f"sweep: {out} ({len(results)} rows)")
    return 0


def cmd_trace(cfg: ExperimentConfig, checkpoint) -> int:
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    theta = _load_theta(cfg, checkpoint, env)
    if "ald" in cfg.methods and theta is None:
        raise ConfigError("trace includes 'ald': a --checkpoint is required")
    snr = cfg.snrs[0]
    tasks = [(m, snr, seed, m, env, theta, cfg, seed, snr, True)
             for m in cfg.methods for seed in cfg.seeds]
    results = _fan_out(tasks, cfg.workers)
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = os.path.join(cfg.out_dir, "trace.csv")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_header(cfg, "schema: trace v1"))
        fh.write("method,iter,seed,rate\n")
        for method, _snr, seed, _rate, _calls, trace in results:
            for it, rate in trace:
                fh.write(f"{method},{it},{seed},{float(rate)!r}\n")
    print(f"trace: {out}")
    return 0


def cmd_latency(cfg: ExperimentConfig, checkpoint) -> int:
    # batch of 8 settings: the per-method cost of re-optimizing when the
    # environment changes 8 times
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    theta = _load_theta(cfg, checkpoint, env)
    if "ald" in cfg.methods and theta is None:
        raise ConfigError("latency includes 'ald': a --checkpoint is required")
    seeds = (cfg.seeds * 8)[:8] if len(cfg.seeds) < 8 else cfg.seeds[:8]
    os.makedirs(cfg.out_dir, exist_ok=True)
    out = os.path.join(cfg.out_dir, "latency.csv")
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(_header(cfg, "schema: latency v1 (seconds informational)"))
        fh.write("method,calls,seconds,mean_rate\n")
        for method in cfg.methods:
            t0 = time.perf_counter()
            rates, calls = [], 0
            for seed in seeds:
                rate, c, _ = run_method(method, env, theta, cfg, seed, cfg.snrs[0])
                rates.append(rate)
                calls += c
            dt = time.perf_counter() - t0
            fh.write(f"{method},{calls},{dt:.3f},{float(np.mean(rates))!r}\n")
    print(f"latency: {out}")
    return 0


def _probe_env(env: Environment, x: float, y: float) -> Environment:
    """Scene with one extra probe dipole at (x, y); the true receivers stay in
    place (they are part of the resonant system the configuration was tuned
    with), and the probe is nudged off any dipole it would otherwise sit on.
    The probe is appended last, so it is the last receive row of the solve."""
    for d in env.dipoles:
        if abs(d.x - x) < 0.03 and abs(d.y - y) < 0.03:
            x, y = x + 0.035, y + 0.035
            break
    probe = dataclasses.replace(env.dipoles[env.rx_indices[0]], x=x, y=y)
    return dataclasses.replace(env, dipoles=env.dipoles + (probe,))


def probe_rate(env: Environment, x: float, y: float, phi, psi, sigma_w2: float) -> float:
    """Rate a receiver at (x, y) would see: the probe's channel row alone."""
    tensor = ChannelEvaluator(_probe_env(env, x, y)).evaluate(phi, psi)
    probe_only = ChannelTensor(matrices=tensor.matrices[:, -1:, :],
                               freqs_ghz=tensor.freqs_ghz)
    return achievable_rate(probe_only, sigma_w2)


def _write_matrix(path, grid: np.ndarray, header: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(header)
        for row in grid:
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def _write_pgm(path, grid: np.ndarray, symmetric: bool = False) -> None:
    """P2 portable graymap; ``symmetric`` maps 0 to mid-gray (for difference
    maps), otherwise min..max spans 0..255."""
    if symmetric:
        span = float(np.abs(grid).max()) or 1.0
        pix = np.round(127.5 + 127.5 * grid / span).astype(int)
    else:
        lo, hi = float(grid.min()), float(grid.max())
        span = (hi - lo) or 1.0
        pix = np.round(255.0 * (grid - lo) / span).astype(int)
    pix = np.clip(pix, 0, 255)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"P2\n{grid.shape[1]} {grid.shape[0]}\n255\n")
        for row in pix:
            fh.write(" ".join(str(v) for v in row) + "\n")


def heatmap_grids(env: Environment, phi_ref, phi_opt, psi, res: int,
                  sigma_w2: float = 1.0):
    """Rate of a probe receiver swept over the scene's heatmap region, for a
    reference and an optimized configuration.  Returns (xs, ys, ref, opt)."""
    if env.heatmap_region is None:
        raise InvalidScene("scene has no heatmap_region")
    if res < 2:
        raise ConfigError("heatmap resolution must be >= 2 per axis")
    x0, y0, x1, y1 = env.heatmap_region
    xs = np.linspace(x0, x1, res)
    ys = np.linspace(y0, y1, res)
    ref = np.zeros((res, res))
    opt = np.zeros((res, res))
    for i, y in enumerate(ys):
        for j, x in enumerate(xs):
            ref[i, j] = probe_rate(env, x, y, phi_ref, psi, sigma_w2)
            opt[i, j] = probe_rate(env, x, y, phi_opt, psi, sigma_w2)
    return xs, ys, ref, opt


def cmd_heatmap(cfg: ExperimentConfig, checkpoint, phi_path) -> int:
    env = parse_scene_file(cfg.scene_path)
    env.validate(require_ris=True)
    psi = _setting(env, cfg.seed)
    if phi_path is not None:
        phi_opt = np.loadtxt(phi_path, ndmin=1)
        if phi_opt.shape != (env.n_p,):
            raise ConfigError(f"{phi_path}: expected {env.n_p} values, got {phi_opt.shape}")
    else:
        theta = _load_theta(cfg, checkpoint, env)
        if theta is None:
            raise ConfigError("heatmap needs --checkpoint or --phi")
        phi_opt = np.clip(
            ald_optimize(theta, psi, cfg.schedule, _start(env, cfg.seed),
                         RngState(cfg.seed).derive(2), sigma_scaled_step=cfg.sigma_scaled),
            0.0, 1.0)
    phi_ref = np.full(env.n_p, 0.5)
    _, _, ref, opt = heatmap_grids(env, phi_ref, phi_opt, psi, cfg.heatmap_res,
                                   sigma_w2=1.0 / cfg.snrs[0])
    diff = opt - ref
    if not (np.isfinite(ref).all() and np.isfinite(opt).all()):
        raise FloatingPointError("heatmap produced non-finite rates")
    os.makedirs(cfg.out_dir, exist_ok=True)
    for name, grid, sym in (("ref", ref, False), ("opt", opt, False), ("diff", diff, True)):
        base = os.path.join(cfg.out_dir, f"heatmap_{name}")
        _write_matrix(base + ".txt", grid, _header(cfg, f"heatmap {name}, row-major, y up"))
        _write_pgm(base + ".pgm", grid, symmetric=sym)
    print(f"heatmap: {cfg.out_dir}/heatmap_{{ref,opt,diff}}.{{txt,pgm}} "
          f"({cfg.heatmap_res}x{cfg.heatmap_res})")
    print(f"mean rate gain over region: {diff.mean():.4f}")
    return 0


# ---------------------------------------------------------------------------
# entry point


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="risald",
                                description="Programmable-channel tuning experiments.")
    sub = p.add_subparsers(dest="command", required=True)
    for name, needs_ckpt in (("train", False), ("optimize", True), ("sweep-snr", True),
                             ("trace", True), ("latency", True), ("heatmap", True)):
        q = sub.add_parser(name)
        q.add_argument("--config", default=None, help="flat key=value experiment file")
        q.add_argument("--scene", default=None, help="scene file (overrides config)")
        q.add_argument("--seed", type=int, default=None,
                       help="base seed; replaces the config seed list")
        q.add_argument("--out", default=None, help="output directory (overrides config)")
        if needs_ckpt:
            q.add_argument("--checkpoint", default=None, help="trained denoiser weights")
        if name == "heatmap":
            q.add_argument("--phi", default=None,
                           help="text file with one configuration value per line "
                                "(skips the checkpoint)")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_experiment_config(args.config, scene=args.scene,
                                     out=args.out, seed=args.seed)
        if args.command == "train":
            return cmd_train(cfg)
        if args.command == "optimize":
            return cmd_optimize(cfg, args.checkpoint)
        if args.command == "sweep-snr":
            return cmd_sweep_snr(cfg, args.checkpoint)
        if args.command == "trace":
            return cmd_trace(cfg, args.checkpoint)
        if args.command == "latency":
            return cmd_latency(cfg, args.checkpoint)
        if args.command == "heatmap":
            return cmd_heatmap(cfg, args.checkpoint, args.phi)
        raise ConfigError(f"unknown command {args.command!r}")
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return NUMERIC_EXIT
    except _CONFIG_ERRORS as exc:
        print(f"error: {exc}", file=sys.stderr)
        return CONFIG_EXIT


def main_entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    main_entry()
