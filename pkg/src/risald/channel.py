"""Programmable-channel evaluators.

Two backends sit behind one counting call interface:

* a coupled-dipole scattering simulator -- transmitters, receivers, tunable
  surface elements and passive scatterers interact through the 3-D scalar
  Green's function, and the surface's per-element resonances are steered by
  the configuration vector ``phi`` in [0, 1]^n_p;
* a closed-form cascaded model ``H2 diag(e^{2j pi phi}) H1`` whose rate
  gradient is available analytically, used as a differentiable oracle in
  tests and demos.

Every evaluation is counted, so optimizers are charged exactly for what they
measure.  Diagnostics (tracing, final scoring) go through a separate clone of
the evaluator so they never pollute the optimization budget.
"""

from __future__ import annotations

import hashlib
import logging
import threading
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    ConfigError,
    DegenerateScene,
    DimensionMismatch,
    InvalidScene,
    SingularMatrix,
)
from .kvformat import kv_to_dict, parse_floats, read_kv_file, take_scalar, write_kv_file
from .numerics import RngState, solve_linear

logger = logging.getLogger(__name__)

# free-space speed of light, in metres * GHz (i.e. metres per nanosecond)
C_M_GHZ = 0.299792458

# dipoles closer than this (metres) make the interaction system meaningless
MIN_SEPARATION_M = 1e-4

KINDS = ("tx", "rx", "ris", "scatterer")


@dataclass(frozen=True)
class Dipole:
    """One point dipole.  RIS entries hold a placeholder resonance; the live
    value comes from the configuration vector at evaluation time."""

    kind: str
    x: float
    y: float
    f_res_ghz: float


@dataclass(frozen=True)
class ChannelTensor:
    """Per-subband MIMO matrices: matrices[b] is N_rx x N_tx complex."""

    matrices: np.ndarray  # (B, N_rx, N_tx) complex128
    freqs_ghz: np.ndarray  # (B,)

    @property
    def n_bands(self) -> int:
        return int(self.matrices.shape[0])


@dataclass(frozen=True)
class Environment:
    """Immutable scene: dipole layout, material constants, band plan.

    ``tx_box`` is the rectangle (x0, y0, x1, y1) inside which the environment
    setting ``psi`` places the transmitters; the TX dipole records in
    ``dipoles`` are only defaults.
    """

    dipoles: tuple[Dipole, ...]
    f_lo_ghz: float
    f_hi_ghz: float
    n_bands: int
    ris_f_min_ghz: float
    ris_f_max_ghz: float
    tx_box: tuple[float, float, float, float]
    gamma: dict = field(default_factory=dict)      # kind -> loss rate (GHz)
    coupling: dict = field(default_factory=dict)   # kind -> polarizability scale
    noise_overlay: float = 0.0
    heatmap_region: tuple[float, float, float, float] | None = None

    def _indices(self, kind):
        return tuple(i for i, d in enumerate(self.dipoles) if d.kind == kind)

    @property
    def tx_indices(self):
        return self._indices("tx")

    @property
    def rx_indices(self):
        return self._indices("rx")

    @property
    def ris_indices(self):
        return self._indices("ris")

    @property
    def n_tx(self) -> int:
        return len(self.tx_indices)

    @property
    def n_rx(self) -> int:
        return len(self.rx_indices)

    @property
    def n_p(self) -> int:
        return len(self.ris_indices)

    @property
    def psi_dim(self) -> int:
        return 2 * self.n_tx

    @property
    def band_freqs_ghz(self) -> np.ndarray:
        return np.linspace(self.f_lo_ghz, self.f_hi_ghz, self.n_bands)

    def validate(self, require_ris: bool = False) -> None:
        """Check structural invariants; raise InvalidScene on violation."""
        if not self.dipoles:
            raise InvalidScene("scene has no dipoles")
        if self.n_tx < 1 or self.n_rx < 1:
            raise InvalidScene("scene needs at least one TX and one RX dipole")
        if require_ris and self.n_p < 1:
            raise InvalidScene("scene has an empty RIS")
        if not self.f_lo_ghz < self.f_hi_ghz:
            raise InvalidScene("band must satisfy f_lo < f_hi")
        if not self.ris_f_min_ghz < self.ris_f_max_ghz:
            raise InvalidScene("RIS tuning range must satisfy f_min < f_max")
        if self.n_bands < 1:
            raise InvalidScene("need at least one subband")
        if self.noise_overlay < 0:
            raise InvalidScene("noise_overlay must be >= 0")
        x0, y0, x1, y1 = self.tx_box
        if not (x0 < x1 and y0 < y1):
            raise InvalidScene("tx_box is empty")
        for d in self.dipoles:
            if d.kind not in KINDS:
                raise InvalidScene(f"unknown dipole kind {d.kind!r}")
            if self.gamma.get(d.kind, 0.0) <= 0.0:
                raise InvalidScene(f"gamma_{d.kind} must be > 0")
            if self.coupling.get(d.kind, 0.0) <= 0.0:
                raise InvalidScene(f"coupling_{d.kind} must be > 0")
        pos = np.array([(d.x, d.y) for d in self.dipoles])
        if len(pos) > 1:
            diff = pos[:, None, :] - pos[None, :, :]
            dist = np.sqrt((diff ** 2).sum(-1))
            np.fill_diagonal(dist, np.inf)
            if dist.min() < MIN_SEPARATION_M:
                raise InvalidScene(
                    f"coincident dipoles: min separation {dist.min():.2e} m "
                    f"< {MIN_SEPARATION_M:.0e} m"
                )


def build_environment(desc: dict) -> Environment:
    """Assemble and validate an Environment from a typed description dict.

    The dict mirrors the scene-file keys: counts (``ntx``/``nrx``/``np``),
    band plan, material constants, ``tx_box``, and a ``dipole`` list of
    (kind, x, y, f_res_ghz-or-None) tuples.
    """
    desc = dict(desc)
    f_lo = float(desc["f_lo_ghz"])
    f_hi = float(desc["f_hi_ghz"])
    default_res = 0.5 * (f_lo + f_hi)
    dipoles = []
    for entry in desc["dipole"]:
        kind, x, y = entry[0], float(entry[1]), float(entry[2])
        kind = kind.lower()
        f_res = float(entry[3]) if len(entry) > 3 and entry[3] is not None else default_res
        dipoles.append(Dipole(kind, x, y, f_res))
    gamma = {k: float(desc[f"gamma_{k}"]) for k in KINDS if f"gamma_{k}" in desc}
    coupling = {k: float(desc[f"coupling_{k}"]) for k in KINDS if f"coupling_{k}" in desc}
    env = Environment(
        dipoles=tuple(dipoles),
        f_lo_ghz=f_lo,
        f_hi_ghz=f_hi,
        n_bands=int(desc["bands"]),
        ris_f_min_ghz=float(desc["ris_f_min_ghz"]),
        ris_f_max_ghz=float(desc["ris_f_max_ghz"]),
        tx_box=tuple(float(v) for v in desc["tx_box"]),
        gamma=gamma,
        coupling=coupling,
        noise_overlay=float(desc.get("noise_overlay", 0.0)),
        heatmap_region=(
            tuple(float(v) for v in desc["heatmap_region"])
            if desc.get("heatmap_region") is not None
            else None
        ),
    )
    env.validate(require_ris=True)
    for key, count in (("ntx", env.n_tx), ("nrx", env.n_rx), ("np", env.n_p)):
        if key in desc and int(desc[key]) != count:
            raise InvalidScene(f"{key} = {desc[key]} but scene lists {count} such dipoles")
    return env


# ---------------------------------------------------------------------------
# coupled-dipole solver


def _positions(env: Environment, psi: np.ndarray) -> np.ndarray:
    """(N_d, 2) dipole coordinates with TX rows decoded from psi into tx_box."""
    pos = np.array([(d.x, d.y) for d in env.dipoles], dtype=float)
    x0, y0, x1, y1 = env.tx_box
    for j, idx in enumerate(env.tx_indices):
        pos[idx, 0] = x0 + float(psi[2 * j]) * (x1 - x0)
        pos[idx, 1] = y0 + float(psi[2 * j + 1]) * (y1 - y0)
    return pos


def _resonances(env: Environment, phi: np.ndarray) -> np.ndarray:
    """Per-dipole resonance row; RIS entries are steered by phi."""
    res = np.array([d.f_res_ghz for d in env.dipoles], dtype=float)
    lo, hi = env.ris_f_min_ghz, env.ris_f_max_ghz
    res[list(env.ris_indices)] = lo + np.asarray(phi, dtype=float) * (hi - lo)
    return res


def _pairwise_distances(env: Environment, psi: np.ndarray) -> np.ndarray:
    """(N_d, N_d) distances with the diagonal set to 1.0 (placeholder; the
    diagonal of W is overwritten anyway).  Rejects near-coincident dipoles."""
    pos = _positions(env, psi)
    diff = pos[:, None, :] - pos[None, :, :]
    r = np.sqrt((diff ** 2).sum(-1))
    np.fill_diagonal(r, np.inf)
    if r.min() < MIN_SEPARATION_M:
        raise DegenerateScene(
            f"dipoles within {r.min():.2e} m of each other after TX placement"
        )
    np.fill_diagonal(r, 1.0)
    return r


def _band_matrix(r, res, gam, amp, f_ghz: float) -> np.ndarray:
    w = -np.exp(-2j * np.pi * f_ghz * r / C_M_GHZ) / (4.0 * np.pi * r)
    np.fill_diagonal(w, (res ** 2 - f_ghz ** 2 + 1j * f_ghz * gam) / amp)
    return w


def assemble_interaction_matrix(env: Environment, phi, psi, f_ghz: float) -> np.ndarray:
    """Dense interaction matrix W at one frequency.

    Diagonal: inverse Lorentzian polarizability
    (f_res^2 - f^2 + j f Gamma) / A.  Off-diagonal: negative scalar Green's
    function -exp(-2j pi f r / c) / (4 pi r).  W is symmetric by construction
    (reciprocity).
    """
    r = _pairwise_distances(env, np.asarray(psi, dtype=float))
    res = _resonances(env, np.asarray(phi, dtype=float))
    gam = np.array([env.gamma[d.kind] for d in env.dipoles])
    amp = np.array([env.coupling[d.kind] for d in env.dipoles])
    return _band_matrix(r, res, gam, amp, f_ghz)


def solve_dipole_channel(env: Environment, phi, psi) -> ChannelTensor:
    """Noise-free coupled-dipole channel for one (phi, psi).

    Solves W X = E per subband, where E selects the TX dipoles, and reads the
    receive rows of X.

    Raises:
        DegenerateScene: geometry or materials made W unsolvable.
    """
    freqs = env.band_freqs_ghz
    n_d = len(env.dipoles)
    r = _pairwise_distances(env, np.asarray(psi, dtype=float))
    res = _resonances(env, np.asarray(phi, dtype=float))
    gam = np.array([env.gamma[d.kind] for d in env.dipoles])
    amp = np.array([env.coupling[d.kind] for d in env.dipoles])
    excitation = np.zeros((n_d, env.n_tx), dtype=np.complex128)
    for j, idx in enumerate(env.tx_indices):
        excitation[idx, j] = 1.0
    rx = list(env.rx_indices)
    out = np.empty((env.n_bands, env.n_rx, env.n_tx), dtype=np.complex128)
    for b, f in enumerate(freqs):
        w = _band_matrix(r, res, gam, amp, f)
        try:
            x = solve_linear(w, excitation)
        except SingularMatrix as exc:
            raise DegenerateScene(f"interaction matrix singular at {f:.4f} GHz") from exc
        out[b] = x[rx, :]
    return ChannelTensor(matrices=out, freqs_ghz=freqs)


def _clamped(phi: np.ndarray) -> np.ndarray:
    clipped = np.clip(phi, 0.0, 1.0)
    moved = int(np.count_nonzero(clipped != phi))
    if moved:
        logger.debug("clamped %d of %d configuration entries into [0, 1]", moved, phi.size)
    return clipped


class ChannelEvaluator:
    """Counting gate in front of the coupled-dipole simulator.

    ``noise_overlay`` (rho) > 0 multiplies every channel entry by (1 + e)
    with e ~ CN(0, rho), modelling evaluation through an imperfectly known
    channel; rho = 0 evaluations are pure functions of (phi, psi).
    """

    def __init__(self, env: Environment, noise_overlay: float | None = None, seed: int = 0):
        self.environment = env
        self.noise_overlay = env.noise_overlay if noise_overlay is None else float(noise_overlay)
        if self.noise_overlay < 0:
            raise ValueError("noise_overlay must be >= 0")
        self._seed = int(seed)
        self._rng = RngState(self._seed)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def n_p(self) -> int:
        return self.environment.n_p

    @property
    def psi_dim(self) -> int:
        return self.environment.psi_dim

    @property
    def call_count(self) -> int:
        return self._calls

    def reset_calls(self) -> None:
        with self._lock:
            self._calls = 0

    def diagnostic_clone(self) -> "ChannelEvaluator":
        """Same scene and overlay, fresh counter -- for scoring and traces."""
        return ChannelEvaluator(self.environment, self.noise_overlay, seed=self._seed + 1)

    def evaluate(self, phi, psi) -> ChannelTensor:
        phi = np.asarray(phi, dtype=float)
        psi = np.asarray(psi, dtype=float)
        if phi.shape != (self.n_p,):
            raise DimensionMismatch(f"phi has shape {phi.shape}, expected ({self.n_p},)")
        if psi.shape != (self.psi_dim,):
            raise DimensionMismatch(f"psi has shape {psi.shape}, expected ({self.psi_dim},)")
        if not (np.isfinite(phi).all() and np.isfinite(psi).all()):
            raise ValueError("phi/psi must be finite")
        with self._lock:
            self._calls += 1
        phi = _clamped(phi)
        psi = np.clip(psi, 0.0, 1.0)
        tensor = solve_dipole_channel(self.environment, phi, psi)
        if self.noise_overlay > 0.0:
            e = self._rng.complex_gaussian(tensor.matrices.shape, self.noise_overlay)
            tensor = ChannelTensor(tensor.matrices * (1.0 + e), tensor.freqs_ghz)
        return tensor


def evaluate_channel(ev, phi, psi) -> ChannelTensor:
    """Counted evaluation of the programmable channel."""
    return ev.evaluate(phi, psi)


# ---------------------------------------------------------------------------
# cascaded closed-form model (differentiable test oracle)


def _psi_entropy(psi: np.ndarray) -> list[int]:
    digest = hashlib.sha256(np.asarray(psi, dtype=np.float64).tobytes()).digest()
    return [int.from_bytes(digest[i : i + 4], "little") for i in range(0, 16, 4)]


@dataclass(frozen=True)
class CascadedModel:
    """H[b] = H2[b] diag(e^{2j pi phi}) H1[b] with psi-seeded fixed matrices."""

    n_p: int
    n_tx: int
    n_rx: int
    n_bands: int = 4
    seed: int = 0

    @property
    def psi_dim(self) -> int:
        return 2 * self.n_tx

    def matrices(self, psi) -> tuple[np.ndarray, np.ndarray]:
        """(H1, H2) with shapes (B, n_p, n_tx) and (B, n_rx, n_p); the draw is
        a pure function of (model seed, psi)."""
        rng = RngState(self.seed, _entropy=(self.seed, *_psi_entropy(psi)))
        h1 = rng.complex_gaussian((self.n_bands, self.n_p, self.n_tx), 1.0 / self.n_p)
        h2 = rng.complex_gaussian((self.n_bands, self.n_rx, self.n_p), 1.0)
        return h1, h2


def cascaded_channel(model: CascadedModel, phi, psi) -> ChannelTensor:
    """Closed-form channel; shifting any phi entry by an integer is a no-op."""
    phi = np.asarray(phi, dtype=float)
    if phi.shape != (model.n_p,):
        raise DimensionMismatch(f"phi has shape {phi.shape}, expected ({model.n_p},)")
    h1, h2 = model.matrices(psi)
    d = np.exp(2j * np.pi * phi)
    out = np.einsum("brp,p,bpt->brt", h2, d, h1)
    freqs = np.linspace(0.9, 1.1, model.n_bands)
    return ChannelTensor(matrices=out, freqs_ghz=freqs)


def cascaded_rate_gradient(model: CascadedModel, phi, psi, sigma_w2: float) -> np.ndarray:
    """Analytic d/d(phi) of the mean-over-subbands achievable rate.

    Reference gradient for the cascaded oracle:
    dR_b/dphi_n = (2 / (sigma_w2 ln 2)) Re[2j pi e^{2j pi phi_n}
                   (H1 H^H M^{-1} H2)_{nn}],  M = I + H H^H / sigma_w2.
    """
    phi = np.asarray(phi, dtype=float)
    h1, h2 = model.matrices(psi)
    d = np.exp(2j * np.pi * phi)
    grad = np.zeros(model.n_p)
    for b in range(model.n_bands):
        h = h2[b] @ np.diag(d) @ h1[b]
        m = np.eye(model.n_rx) + h @ h.conj().T / sigma_w2
        minv = np.linalg.inv(m)
        core = h1[b] @ h.conj().T @ minv @ h2[b]  # (n_p, n_p) after the chain
        grad += (2.0 / (sigma_w2 * np.log(2.0))) * np.real(
            2j * np.pi * d * np.diagonal(core)
        )
    return grad / model.n_bands


class CascadedEvaluator:
    """Counting gate in front of the cascaded oracle; same surface as
    :class:`ChannelEvaluator` so it can stand in anywhere a channel is
    measured."""

    def __init__(self, model: CascadedModel, noise_overlay: float = 0.0, seed: int = 0):
        self.model = model
        self.noise_overlay = float(noise_overlay)
        self._seed = int(seed)
        self._rng = RngState(self._seed)
        self._calls = 0
        self._lock = threading.Lock()

    @property
    def n_p(self) -> int:
        return self.model.n_p

    @property
    def psi_dim(self) -> int:
        return self.model.psi_dim

    @property
    def call_count(self) -> int:
        return self._calls

    def reset_calls(self) -> None:
        with self._lock:
            self._calls = 0

    def diagnostic_clone(self) -> "CascadedEvaluator":
        return CascadedEvaluator(self.model, self.noise_overlay, seed=self._seed + 1)

    def evaluate(self, phi, psi) -> ChannelTensor:
        phi = np.asarray(phi, dtype=float)
        with self._lock:
            self._calls += 1
        tensor = cascaded_channel(self.model, _clamped(phi), psi)
        if self.noise_overlay > 0.0:
            e = self._rng.complex_gaussian(tensor.matrices.shape, self.noise_overlay)
            tensor = ChannelTensor(tensor.matrices * (1.0 + e), tensor.freqs_ghz)
        return tensor


# ---------------------------------------------------------------------------
# scene file I/O


_SCALARS = (
    ("bands", int),
    ("f_lo_ghz", float),
    ("f_hi_ghz", float),
    ("ris_f_min_ghz", float),
    ("ris_f_max_ghz", float),
    ("noise_overlay", float),
    ("ntx", int),
    ("nrx", int),
    ("np", int),
)


def parse_scene_file(path) -> Environment:
    """Load an Environment from a flat key-value scene file."""
    grouped = kv_to_dict(read_kv_file(path))
    desc: dict = {}
    for key, conv in _SCALARS:
        val = take_scalar(grouped, key, conv, path=path)
        if val is not None:
            desc[key] = val
    for key in ("tx_box", "heatmap_region"):
        val = take_scalar(grouped, key, lambda v: parse_floats(v, 4), path=path)
        if val is not None:
            desc[key] = val
    for kind in KINDS:
        for fam in ("gamma", "coupling"):
            val = take_scalar(grouped, f"{fam}_{kind}", float, path=path)
            if val is not None:
                desc[f"{fam}_{kind}"] = val
    dipoles = []
    for line, value in grouped.pop("dipole", []):
        parts = [p.strip() for p in value.split(",")]
        if len(parts) not in (3, 4):
            raise ConfigError(f"dipole needs 'kind,x,y[,f_res]', got {value!r}",
                              path=path, line=line)
        kind = parts[0].lower()
        if kind not in KINDS:
            raise ConfigError(f"unknown dipole kind {parts[0]!r}", path=path, line=line)
        try:
            nums = [float(p) for p in parts[1:]]
        except ValueError:
            raise ConfigError(f"bad dipole coordinates in {value!r}", path=path, line=line)
        dipoles.append((kind, *nums))
    if grouped:
        key = next(iter(grouped))
        line = grouped[key][0][0]
        raise ConfigError(f"unknown scene key {key!r}", path=path, line=line)
    desc["dipole"] = dipoles
    required = ("bands", "f_lo_ghz", "f_hi_ghz", "ris_f_min_ghz", "ris_f_max_ghz", "tx_box")
    for key in required:
        if key not in desc:
            raise ConfigError(f"scene is missing required key {key!r}", path=path)
    try:
        return build_environment(desc)
    except InvalidScene as exc:
        raise ConfigError(str(exc), path=path) from exc


def write_scene_file(env: Environment, path, header: str | None = None) -> None:
    """Serialize an Environment to the scene format; round-trips through
    :func:`parse_scene_file`."""
    pairs = [
        ("ntx", str(env.n_tx)),
        ("nrx", str(env.n_rx)),
        ("np", str(env.n_p)),
        ("bands", str(env.n_bands)),
        ("f_lo_ghz", repr(env.f_lo_ghz)),
        ("f_hi_ghz", repr(env.f_hi_ghz)),
        ("ris_f_min_ghz", repr(env.ris_f_min_ghz)),
        ("ris_f_max_ghz", repr(env.ris_f_max_ghz)),
        ("noise_overlay", repr(env.noise_overlay)),
        ("tx_box", ",".join(repr(v) for v in env.tx_box)),
    ]
    if env.heatmap_region is not None:
        pairs.append(("heatmap_region", ",".join(repr(v) for v in env.heatmap_region)))
    kinds_present = sorted({d.kind for d in env.dipoles})
    for kind in kinds_present:
        pairs.append((f"gamma_{kind}", repr(env.gamma[kind])))
        pairs.append((f"coupling_{kind}", repr(env.coupling[kind])))
    for d in env.dipoles:
        pairs.append(("dipole", f"{d.kind},{d.x!r},{d.y!r},{d.f_res_ghz!r}"))
    write_kv_file(path, pairs, header=header)


# ---------------------------------------------------------------------------
# canned scenes


def desk_environment(noise_overlay: float = 0.0) -> Environment:
    """Desk-scale scene: 2x2 MIMO, a 16-element tunable surface bridging the
    gap above a dense 20-dipole scatterer wall that occludes the direct path.

    The wall spacing is deep sub-wavelength so it behaves like a screen; the
    surface elements sit half a wavelength apart so each keeps individual
    tuning authority.  Surface and scatterer linewidths are broader than the
    antennas' and the surface carries a stronger polarizability (calibrated:
    narrow linewidths make the rate landscape a field of razor-thin resonance
    spikes that no smooth map can target; the damping trades peak height for
    a landscape whose good regions survive O(0.02) configuration jitter).
    """
    dipoles = [("tx", 0.60, 0.70), ("tx", 0.90, 1.10)]
    dipoles += [("rx", 2.60, 0.85), ("rx", 2.60, 1.05)]
    dipoles += [("scatterer", 1.60, 0.68 + 0.025 * i, 0.8) for i in range(20)]
    dipoles += [("ris", 0.575 + 0.15 * i, 1.50) for i in range(16)]
    desc = {
        "ntx": 2,
        "nrx": 2,
        "np": 16,
        "bands": 4,
        "f_lo_ghz": 0.9,
        "f_hi_ghz": 1.1,
        "ris_f_min_ghz": 0.85,
        "ris_f_max_ghz": 1.15,
        "tx_box": (0.45, 0.50, 1.05, 1.30),
        "gamma_tx": 0.12,
        "gamma_rx": 0.12,
        "gamma_ris": 0.20,
        "gamma_scatterer": 0.30,
        "coupling_tx": 1.0,
        "coupling_rx": 1.0,
        "coupling_ris": 2.0,
        "coupling_scatterer": 1.0,
        "noise_overlay": noise_overlay,
        "heatmap_region": (0.1, 0.1, 3.1, 2.1),
        "dipole": dipoles,
    }
    return build_environment(desc)


def paper_scale_environment(params_per_element: int = 3) -> Environment:
    """Large scene: 3x4 MIMO and two tunable surface groups totalling 45
    elements.  Each element carries ``params_per_element`` stacked sub-dipoles
    with independently tunable resonances, so n_p = 45 * params_per_element
    (135 by default)."""
    if params_per_element < 1:
        raise InvalidScene("params_per_element must be >= 1")
    dipoles = [("tx", 0.5 + 0.25 * i, 0.8 + 0.3 * i) for i in range(3)]
    dipoles += [("rx", 4.4, 0.8 + 0.35 * i) for i in range(4)]
    dipoles += [("scatterer", 2.5, 0.1 + 0.12 * i) for i in range(24)]
    # group A along the top wall (sub-dipoles stack upward), group B along the
    # right wall (sub-dipoles stack outward)
    for i in range(23):
        for k in range(params_per_element):
            dipoles.append(("ris", 0.8 + 0.14 * i, 3.4 + 0.05 * k))
    for i in range(22):
        for k in range(params_per_element):
            dipoles.append(("ris", 4.9 + 0.05 * k, 0.5 + 0.14 * i))
    desc = {
        "ntx": 3,
        "nrx": 4,
        "np": 45 * params_per_element,
        "bands": 4,
        "f_lo_ghz": 0.9,
        "f_hi_ghz": 1.1,
        "ris_f_min_ghz": 0.85,
        "ris_f_max_ghz": 1.15,
        "tx_box": (0.3, 0.3, 1.5, 2.0),
        "gamma_tx": 0.12,
        "gamma_rx": 0.12,
        "gamma_ris": 0.06,
        "gamma_scatterer": 0.03,
        "coupling_tx": 1.0,
        "coupling_rx": 1.0,
        "coupling_ris": 1.2,
        "coupling_scatterer": 0.8,
        "dipole": dipoles,
    }
    return build_environment(desc)
