"""Deterministic sampling and the complex linear-algebra kernels everything else leans on.

All randomness in the package flows through :class:`RngState`, a thin wrapper
around numpy's counter-based Philox generator, so that a run is reproducible
bit-for-bit from its seed and derived streams stay independent across workers.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import DimensionMismatch, NotPositiveDefinite, SingularMatrix

# Pivots below this are treated as exact singularity rather than left to
# produce inf/nan downstream.
PIVOT_FLOOR = 1e-300

HERMITIAN_TOL = 1e-10


class RngState:
    """Seeded random stream backed by the counter-based Philox bit generator.

    The same seed replays the same sequence on any platform.  `derive(i)`
    produces an independent child stream that depends only on the parent's
    entropy chain and `i`, never on how much the parent has already been
    consumed -- that property is what makes per-sample / per-worker draws
    reproducible regardless of scheduling.
    """

    algorithm = "philox4x64"

    def __init__(self, seed: int, _entropy=None):
        self.seed = int(seed)
        if self.seed < 0:
            raise ValueError("seed must be non-negative")
        self._entropy = tuple(_entropy) if _entropy is not None else (self.seed,)
        seq = np.random.SeedSequence(list(self._entropy))
        self._gen = np.random.Generator(np.random.Philox(seq))

    def derive(self, index: int) -> "RngState":
        """Independent child stream, deterministic in (entropy chain, index)."""
        index = int(index)
        if index < 0:
            raise ValueError("derive index must be non-negative")
        return RngState(self.seed, _entropy=self._entropy + (index,))

    def gaussian(self, dim: int) -> np.ndarray:
        return self._gen.standard_normal(int(dim))

    def uniform(self, dim: int, low: float = 0.0, high: float = 1.0) -> np.ndarray:
        return self._gen.uniform(low, high, int(dim))

    def uniform_scalar(self, low: float = 0.0, high: float = 1.0) -> float:
        return float(self._gen.uniform(low, high))

    def complex_gaussian(self, shape, variance: float) -> np.ndarray:
        """Circularly-symmetric complex normal entries with the given variance."""
        scale = np.sqrt(variance / 2.0)
        re = self._gen.standard_normal(shape)
        im = self._gen.standard_normal(shape)
        return scale * (re + 1j * im)

    def integer(self, high: int) -> int:
        return int(self._gen.integers(0, int(high)))

    def __repr__(self):
        return f"RngState({self._entropy!r}, algo={self.algorithm})"


def sample_gaussian(dim: int, rng: RngState) -> np.ndarray:
    """dim i.i.d. standard normal draws."""
    if int(dim) < 1:
        raise ValueError("dim must be >= 1")
    return rng.gaussian(dim)


def sample_unit_sphere(dim: int, rng: RngState) -> np.ndarray:
    """Uniform draw on the unit sphere in R^dim (normalized Gaussian).

    For dim == 1 this degenerates to +/-1 with equal probability.
    """
    if int(dim) < 1:
        raise ValueError("dim must be >= 1")
    v = rng.gaussian(dim)
    n = float(np.linalg.norm(v))
    while n < 1e-12:  # astronomically rare; redraw keeps the map total
        v = rng.gaussian(dim)
        n = float(np.linalg.norm(v))
    return v / n


def solve_linear(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Solve A X = B for complex square A via partially pivoted LU.

    Args:
        a: (n, n) complex matrix.
        b: (n,) or (n, k) right-hand side.

    Returns:
        X with the same trailing shape as b.

    Raises:
        DimensionMismatch: shapes are not a square system.
        SingularMatrix: a pivot magnitude falls below ``PIVOT_FLOOR``.
    """
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {a.shape}")
    if b.shape[0] != a.shape[0] or b.ndim not in (1, 2):
        raise DimensionMismatch(f"rhs shape {b.shape} incompatible with {a.shape}")
    lu, piv = lu_factor(a, check_finite=False)
    pivots = np.abs(np.diagonal(lu))
    if not np.isfinite(pivots).all() or pivots.min() < PIVOT_FLOOR:
        raise SingularMatrix(f"pivot {pivots.min():.3e} below floor {PIVOT_FLOOR:.0e}")
    return lu_solve((lu, piv), b, check_finite=False)


def hermitian_logdet2(m: np.ndarray) -> float:
    """log2 det(M) for Hermitian positive-definite M, via Cholesky.

    Computed as 2 * sum(log2 diag(L)) -- the determinant itself is never
    formed, so the result stays finite where a raw det would over/underflow.

    Raises:
        NotPositiveDefinite: the factorization hits a non-positive pivot.
        ValueError: M is not Hermitian within ``HERMITIAN_TOL`` elementwise.
    """
    m = np.asarray(m, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected square matrix, got {m.shape}")
    if np.abs(m - m.conj().T).max() > HERMITIAN_TOL:
        raise ValueError("matrix is not Hermitian within tolerance")
    try:
        chol = np.linalg.cholesky(m)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc
    diag = np.real(np.diagonal(chol))
    return float(2.0 * np.sum(np.log2(diag)))
