"""Conditional denoiser network: a small fully-connected net with hand-written
forward/backward passes.

Input is the concatenation (phi_noisy, psi, log10 sigma); hidden layers are
ReLU, the output layer is a sigmoid so predictions live in (0, 1)^n_p.  The
backward pass is exact for the forward as coded (ReLU'(0) = 0), which is what
the finite-difference tests pin down.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import BadMagic, DimensionMismatch, DimMismatchOnLoad, TruncatedFile

MAGIC = b"SALDC1\n"

DEFAULT_HIDDEN = (64, 64, 64, 64, 64)


@dataclass
class DenoiserParams:
    """weights[l] has shape (fan_out, fan_in); biases[l] has shape (fan_out,)."""

    weights: list
    biases: list

    @property
    def dims(self) -> tuple:
        return (self.weights[0].shape[1],) + tuple(w.shape[0] for w in self.weights)

    @property
    def n_p(self) -> int:
        return int(self.dims[-1])

    @property
    def psi_dim(self) -> int:
        return int(self.dims[0] - self.dims[-1] - 1)

    @property
    def n_layers(self) -> int:
        return len(self.weights)

    def copy(self) -> "DenoiserParams":
        return DenoiserParams([w.copy() for w in self.weights],
                              [b.copy() for b in self.biases])


@dataclass
class ForwardTrace:
    """Everything backward() needs: the input and per-layer pre/post activations."""

    x: np.ndarray
    pre: list       # z_l per weight layer, output layer last
    post: list      # ReLU activations per hidden layer
    out: np.ndarray  # sigmoid(pre[-1])


def _layer_dims(n_p: int, psi_dim: int, hidden) -> list:
    return [n_p + psi_dim + 1, *[int(h) for h in hidden], n_p]


def init_denoiser(n_p: int, psi_dim: int, rng, hidden=DEFAULT_HIDDEN) -> DenoiserParams:
    """Fresh parameters: uniform(-a, a) weights with a = sqrt(6/(fan_in+fan_out)),
    zero biases.  Default architecture is five hidden layers of 64 plus the
    output layer (six weight layers)."""
    if n_p < 1 or psi_dim < 0:
        raise ValueError("need n_p >= 1 and psi_dim >= 0")
    dims = _layer_dims(n_p, psi_dim, hidden)
    weights, biases = [], []
    for fan_in, fan_out in zip(dims[:-1], dims[1:]):
        bound = np.sqrt(6.0 / (fan_in + fan_out))
        w = rng.uniform(fan_out * fan_in, -bound, bound).reshape(fan_out, fan_in)
        weights.append(w)
        biases.append(np.zeros(fan_out))
    return DenoiserParams(weights, biases)


def zero_denoiser(n_p: int, psi_dim: int, hidden=DEFAULT_HIDDEN) -> DenoiserParams:
    """All-zero parameters; the output is sigmoid(0) = 0.5 for any input.
    Test constructor."""
    dims = _layer_dims(n_p, psi_dim, hidden)
    return DenoiserParams(
        [np.zeros((o, i)) for i, o in zip(dims[:-1], dims[1:])],
        [np.zeros(o) for o in dims[1:]],
    )


def _sigmoid(z: np.ndarray) -> np.ndarray:
    # branch on sign so exp never overflows
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def denoise(params: DenoiserParams, phi_noisy, psi, sigma: float):
    """Network prediction of the clean configuration.

    Returns:
        (phi_hat, ForwardTrace); phi_hat is in (0, 1)^n_p.
    """
    if not sigma > 0:
        raise ValueError("sigma must be > 0")
    phi_noisy = np.asarray(phi_noisy, dtype=float)
    psi = np.asarray(psi, dtype=float)
    if phi_noisy.shape != (params.n_p,):
        raise DimensionMismatch(
            f"phi has shape {phi_noisy.shape}, net expects ({params.n_p},)")
    if psi.shape != (params.psi_dim,):
        raise DimensionMismatch(
            f"psi has shape {psi.shape}, net expects ({params.psi_dim},)")
    x = np.concatenate([phi_noisy, psi, [np.log10(sigma)]])
    pre, post = [], []
    a = x
    for w, b in zip(params.weights[:-1], params.biases[:-1]):
        z = w @ a + b
        pre.append(z)
        a = np.maximum(z, 0.0)
        post.append(a)
    z = params.weights[-1] @ a + params.biases[-1]
    pre.append(z)
    out = _sigmoid(z)
    return out, ForwardTrace(x=x, pre=pre, post=post, out=out)


def backward(params: DenoiserParams, trace: ForwardTrace, g_out):
    """Exact gradients of g_out . phi_hat with respect to every weight and bias.

    Args:
        g_out: dL/d(phi_hat), shape (n_p,).

    Returns:
        (dweights, dbiases) with the same shapes as the parameters.
    """
    g_out = np.asarray(g_out, dtype=float)
    if g_out.shape != trace.out.shape:
        raise DimensionMismatch(f"g_out shape {g_out.shape} != output {trace.out.shape}")
    n = params.n_layers
    dws = [None] * n
    dbs = [None] * n
    # sigmoid output layer
    dz = g_out * trace.out * (1.0 - trace.out)
    for layer in range(n - 1, -1, -1):
        a_in = trace.post[layer - 1] if layer > 0 else trace.x
        dws[layer] = np.outer(dz, a_in)
        dbs[layer] = dz
        if layer > 0:
            da = params.weights[layer].T @ dz
            dz = da * (trace.pre[layer - 1] > 0.0)  # ReLU'(0) = 0
    return dws, dbs


def as_denoise_fn(denoiser):
    """Accept DenoiserParams or any callable (phi, psi, sigma) -> phi_hat."""
    if isinstance(denoiser, DenoiserParams):
        return lambda phi, psi, sigma: denoise(denoiser, phi, psi, sigma)[0]
    if callable(denoiser):
        return denoiser
    raise TypeError(f"denoiser must be DenoiserParams or callable, got {type(denoiser)!r}")


def sgd_step(params: DenoiserParams, dws, dbs, eta: float) -> None:
    """In-place plain gradient-descent update."""
    for w, dw in zip(params.weights, dws):
        w -= eta * dw
    for b, db in zip(params.biases, dbs):
        b -= eta * db


# ---------------------------------------------------------------------------
# checkpoint I/O
#
# layout: MAGIC, an ASCII line of layer dims, then for each weight layer the
# matrix (row-major) followed by the bias, all little-endian IEEE-754 float64.


def save_checkpoint(params: DenoiserParams, path) -> None:
    buf = io.BytesIO()
    buf.write(MAGIC)
    buf.write((" ".join(str(d) for d in params.dims) + "\n").encode("ascii"))
    for w, b in zip(params.weights, params.biases):
        buf.write(np.ascontiguousarray(w, dtype="<f8").tobytes())
        buf.write(np.ascontiguousarray(b, dtype="<f8").tobytes())
    with open(path, "wb") as fh:
        fh.write(buf.getvalue())


def load_checkpoint(path, n_p: int | None = None, psi_dim: int | None = None) -> DenoiserParams:
    """Read a checkpoint back; optional n_p/psi_dim assert what the caller expects.

    Raises:
        BadMagic: wrong leading bytes.
        DimMismatchOnLoad: malformed dims line, inconsistent sizes, or a
            mismatch with the expected n_p/psi_dim.
        TruncatedFile: fewer payload bytes than the dims declare.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if not blob.startswith(MAGIC):
        raise BadMagic(f"{path}: expected {MAGIC!r}")
    rest = blob[len(MAGIC):]
    nl = rest.find(b"\n")
    if nl < 0:
        raise TruncatedFile(f"{path}: dims line never terminated")
    try:
        dims = [int(t) for t in rest[:nl].decode("ascii").split()]
    except (UnicodeDecodeError, ValueError) as exc:
        raise DimMismatchOnLoad(f"{path}: unparseable dims line") from exc
    if len(dims) < 2 or any(d < 1 for d in dims):
        raise DimMismatchOnLoad(f"{path}: illegal dims {dims}")
    if dims[0] - dims[-1] - 1 < 0:
        raise DimMismatchOnLoad(f"{path}: input dim {dims[0]} too small for output {dims[-1]}")
    payload = rest[nl + 1:]
    counts = [(o * i, o) for i, o in zip(dims[:-1], dims[1:])]
    need = 8 * sum(wc + bc for wc, bc in counts)
    if len(payload) < need:
        raise TruncatedFile(f"{path}: payload {len(payload)} bytes, dims need {need}")
    if len(payload) > need:
        raise DimMismatchOnLoad(f"{path}: {len(payload) - need} trailing bytes")
    weights, biases = [], []
    offset = 0
    for (i, o), (wc, bc) in zip(zip(dims[:-1], dims[1:]), counts):
        w = np.frombuffer(payload, dtype="<f8", count=wc, offset=offset).reshape(o, i)
        offset += 8 * wc
        b = np.frombuffer(payload, dtype="<f8", count=bc, offset=offset)
        offset += 8 * bc
        weights.append(w.astype(np.float64))
        biases.append(b.astype(np.float64))
    params = DenoiserParams(weights, biases)
    if n_p is not None and params.n_p != n_p:
        raise DimMismatchOnLoad(f"{path}: checkpoint n_p {params.n_p}, caller expects {n_p}")
    if psi_dim is not None and params.psi_dim != psi_dim:
        raise DimMismatchOnLoad(
            f"{path}: checkpoint psi_dim {params.psi_dim}, caller expects {psi_dim}")
    return params
