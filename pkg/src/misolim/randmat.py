"""Complex Gaussian sampling and covariance-model construction.

All stochastic experiments in this package draw circularly-symmetric
complex Gaussian vectors CN(0, M) for Hermitian positive-semidefinite M.
Randomness is always routed through explicitly seeded numpy Generators;
``substream`` derives independent, reproducible sub-streams from a master
seed so Monte-Carlo results are independent of how work is partitioned.
"""

from __future__ import annotations

import numpy as np

# Eigenvalues may dip below zero by at most this fraction of the spectral
# norm before a matrix is rejected as indefinite.
PSD_TOL = 1e-10


class InvalidMatrixError(ValueError):
    """Input is not a valid Hermitian positive-semidefinite covariance."""


class CovarianceMatrix:
    """Hermitian positive-semidefinite N x N complex covariance matrix.

    Construction validates Hermitian symmetry bit-exactly, a real
    nonnegative diagonal, and min eigenvalue >= -PSD_TOL * ||M||.
    The wrapped array is frozen (read-only).
    """

    def __init__(self, matrix) -> None:
        m = np.array(matrix, dtype=np.complex128)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
            raise InvalidMatrixError(f"expected a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.real)) or not np.all(np.isfinite(m.imag)):
            raise InvalidMatrixError("matrix has non-finite entries")
        if not np.array_equal(m, m.conj().T):
            raise InvalidMatrixError("matrix is not Hermitian")
        if np.any(np.diagonal(m).real < 0.0):
            raise InvalidMatrixError("diagonal has negative entries")
        eig = np.linalg.eigvalsh(m)
        norm = max(abs(eig[0]), abs(eig[-1]))
        if eig[0] < -PSD_TOL * norm:
            raise InvalidMatrixError(
                f"matrix is indefinite: min eigenvalue {eig[0]:.3e} "
                f"below -{PSD_TOL:g} * {norm:.3e}"
            )
        m.flags.writeable = False
        self._m = m
        self._eig_min = float(eig[0])
        self._eig_max = float(eig[-1])

    @classmethod
    def identity(cls, n: int) -> "CovarianceMatrix":
        if n < 1:
            raise InvalidMatrixError("dimension must be a positive integer")
        # spectrum is known, so skip the O(n^3) validation decomposition
        self = cls.__new__(cls)
        m = np.eye(int(n), dtype=np.complex128)
        m.flags.writeable = False
        self._m = m
        self._eig_min = 1.0
        self._eig_max = 1.0
        return self

    @property
    def dim(self) -> int:
        return self._m.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return self._m

    @property
    def min_eigenvalue(self) -> float:
        return self._eig_min

    @property
    def max_eigenvalue(self) -> float:
        return self._eig_max

    def trace(self) -> float:
        return float(np.trace(self._m).real)

    def diagonal(self) -> np.ndarray:
        """Real diagonal entries (the per-antenna variances)."""
        return np.diagonal(self._m).real.copy()

    def scaled(self, c: float) -> "CovarianceMatrix":
        if c < 0:
            raise InvalidMatrixError("scale factor must be nonnegative")
        return CovarianceMatrix(c * self._m)

    def __repr__(self) -> str:
        return f"CovarianceMatrix(dim={self.dim})"


def _as_cov(m) -> CovarianceMatrix:
    return m if isinstance(m, CovarianceMatrix) else CovarianceMatrix(m)


def nearly_psd(m: np.ndarray, scale: float) -> CovarianceMatrix:
    """Repair roundoff in a matrix that is PSD in exact arithmetic.

    ``scale`` is the natural magnitude of the computation that produced
    ``m`` (e.g. the spectral norm of the minuend in a subtraction); negative
    eigenvalues within -PSD_TOL * scale are clipped to zero, anything worse
    raises.
    """
    m = np.asarray(m, dtype=np.complex128)
    m = (m + m.conj().T) / 2.0
    w, v = np.linalg.eigh(m)
    if w[0] < -PSD_TOL * scale:
        raise InvalidMatrixError(
            f"matrix is indefinite beyond roundoff: min eigenvalue {w[0]:.3e}"
        )
    w = np.clip(w, 0.0, None)
    out = (v * w) @ v.conj().T
    return CovarianceMatrix((out + out.conj().T) / 2.0)


def exponential_correlation(n: int, rho: float) -> CovarianceMatrix:
    """Exponential correlation model: entry (i, j) = rho^|i-j|."""
    if n < 1:
        raise ValueError("dimension must be a positive integer")
    rho = float(rho)
    if not 0.0 <= rho < 1.0:
        raise ValueError(f"correlation coefficient must lie in [0, 1), got {rho}")
    idx = np.arange(n)
    m = rho ** np.abs(idx[:, None] - idx[None, :]).astype(np.float64)
    return CovarianceMatrix(m)


def psd_factor(m) -> np.ndarray:
    """Factor L with L @ L^H = m, valid for rank-deficient input.

    Eigen-based: negative eigenvalues within the PSD tolerance are clipped
    to zero, so singular covariances factor cleanly.
    """
    cov = _as_cov(m)
    w, v = np.linalg.eigh(cov.matrix)
    w = np.clip(w, 0.0, None)
    return v * np.sqrt(w)


def sample_cn(m, rng: np.random.Generator, size: int | None = None,
              factor: np.ndarray | None = None) -> np.ndarray:
    """Draw x ~ CN(0, m): zero mean, E{x x^H} = m, E{x x^T} = 0.

    Returns shape (n,) or (size, n). Pass a precomputed ``psd_factor`` to
    avoid refactoring in sampling loops.
    """
    if factor is None:
        factor = psd_factor(m)
    n = factor.shape[0]
    shape = (n,) if size is None else (int(size), n)
    re = rng.standard_normal(shape)
    im = rng.standard_normal(shape)
    w = (re + 1j * im) / np.sqrt(2.0)
    return w @ factor.T


def sample_scalar_cn(variance: float, rng: np.random.Generator,
                     size=None) -> complex | np.ndarray:
    """Draw zero-mean complex Gaussian scalar(s) with E{|x|^2} = variance."""
    variance = float(variance)
    if variance < 0.0 or not np.isfinite(variance):
        raise ValueError(f"variance must be nonnegative, got {variance}")
    re = rng.standard_normal(size)
    im = rng.standard_normal(size)
    x = np.sqrt(variance / 2.0) * (re + 1j * im)
    return complex(x) if size is None else x


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator derived from (seed, key) by counter-style keying.

    Identical (seed, key) gives an identical stream on every platform; the
    derivation does not depend on how many other sub-streams exist.
    """
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(seed: int, *key: int) -> int:
    """Stable 64-bit child seed for nested deterministic dispatch."""
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=tuple(int(k) for k in key))
    return int(ss.generate_state(1, np.uint64)[0])
