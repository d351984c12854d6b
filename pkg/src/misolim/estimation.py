"""Distortion-aware LMMSE uplink channel estimation.

The uplink observation is z = h (d + eta_t) + nu + eta_r, where the
distortion terms eta_t (terminal transmit) and eta_r (array receive) have
signal-power-proportional variance set by the impairment levels. Because
the distortion depends on the unknown channel, the classical MMSE results
do not apply; the best *linear* estimator and its error covariance are
computed in closed form here, together with their high-power limits
(the error floors).
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from .randmat import (
    CovarianceMatrix,
    nearly_psd,
    psd_factor,
    sample_cn,
    sample_scalar_cn,
    substream,
)

# EVM-squared levels above this are outside the usual transceiver range
# and trigger a non-fatal warning.
TYPICAL_KAPPA_MAX = 0.03


class SingularMatrixError(np.linalg.LinAlgError):
    """A matrix that must be invertible for this operation is singular."""


@dataclass(frozen=True)
class ImpairmentProfile:
    """The four distortion levels (dimensionless EVM-squared values)."""

    kappa_t_bs: float = 0.0
    kappa_r_bs: float = 0.0
    kappa_t_ut: float = 0.0
    kappa_r_ut: float = 0.0

    def __post_init__(self):
        for name in ("kappa_t_bs", "kappa_r_bs", "kappa_t_ut", "kappa_r_ut"):
            v = getattr(self, name)
            if not (v >= 0.0) or not math.isfinite(v):
                raise ValueError(f"{name} must be a nonnegative real, got {v}")
        worst = max(self.kappa_t_bs, self.kappa_r_bs, self.kappa_t_ut, self.kappa_r_ut)
        if worst > TYPICAL_KAPPA_MAX:
            warnings.warn(
                f"impairment level {worst:g} exceeds the typical range "
                f"[0, {TYPICAL_KAPPA_MAX}]",
                stacklevel=3,
            )

    @classmethod
    def uniform(cls, kappa: float) -> "ImpairmentProfile":
        return cls(kappa, kappa, kappa, kappa)


@dataclass(frozen=True)
class UplinkConfig:
    """Pilot-phase scenario: channel covariance R, noise covariance S,
    pilot power (linear scale), pilot symbol d with |d|^2 = p_ut."""

    r: CovarianceMatrix
    s: CovarianceMatrix
    p_ut: float
    imp: ImpairmentProfile = field(default_factory=ImpairmentProfile)
    d: complex | None = None

    def __post_init__(self):
        if not (self.p_ut >= 0.0) or not math.isfinite(self.p_ut):
            raise ValueError(f"pilot power must be a nonnegative real, got {self.p_ut}")
        if self.r.dim != self.s.dim:
            raise ValueError(
                f"covariance dimensions differ: R is {self.r.dim}, S is {self.s.dim}"
            )
        if self.s.min_eigenvalue <= 0.0:
            raise ValueError("noise covariance S must be positive definite")
        if self.d is None:
            object.__setattr__(self, "d", complex(math.sqrt(self.p_ut)))
        else:
            object.__setattr__(self, "d", complex(self.d))
            if abs(abs(self.d) ** 2 - self.p_ut) > 1e-12 * max(self.p_ut, 1e-300):
                raise ValueError(
                    f"|d|^2 = {abs(self.d)**2:g} does not match p_ut = {self.p_ut:g}"
                )

    @property
    def dim(self) -> int:
        return self.r.dim

    def snr(self) -> float:
        """Average uplink SNR, p_ut * tr(R) / tr(S)."""
        return self.p_ut * self.r.trace() / self.s.trace()


@dataclass(frozen=True)
class EstimationResult:
    h_hat: np.ndarray


def _system_matrix(cfg: UplinkConfig) -> np.ndarray:
    # p (1 + kappa_t_ut) R + p kappa_r_bs diag(R) + S
    r = cfg.r.matrix
    m = cfg.p_ut * (1.0 + cfg.imp.kappa_t_ut) * r + cfg.s.matrix
    m[np.diag_indices_from(m)] += cfg.p_ut * cfg.imp.kappa_r_bs * cfg.r.diagonal()
    return m


def _solve_against_r(cfg: UplinkConfig) -> np.ndarray:
    """M^{-1} R via a Hermitian positive-definite factorization of M."""
    m = _system_matrix(cfg)
    try:
        f = cho_factor(m, lower=True)
    except np.linalg.LinAlgError as exc:  # cannot occur with S > 0
        raise SingularMatrixError(
            "observation covariance is not positive definite"
        ) from exc
    return cho_solve(f, cfg.r.matrix)


def lmmse_filter(cfg: UplinkConfig) -> np.ndarray:
    """Filter A such that h_hat = A z is the LMMSE channel estimate.

    A = d* R (p (1 + kappa_t_ut) R + p kappa_r_bs diag(R) + S)^{-1}.
    """
    x = _solve_against_r(cfg)
    # R M^{-1} = (M^{-1} R)^H since both R and M are Hermitian.
    return np.conj(cfg.d) * x.conj().T


def estimate(cfg: UplinkConfig, z: np.ndarray) -> EstimationResult:
    """Apply the LMMSE filter to one uplink observation."""
    z = np.asarray(z, dtype=np.complex128)
    if z.shape != (cfg.dim,):
        raise ValueError(f"observation must have shape ({cfg.dim},), got {z.shape}")
    return EstimationResult(h_hat=lmmse_filter(cfg) @ z)


def error_covariance(cfg: UplinkConfig) -> CovarianceMatrix:
    """Covariance C of the estimation error h - h_hat.

    C = R - p R (p (1 + kappa_t_ut) R + p kappa_r_bs diag(R) + S)^{-1} R,
    which degrades continuously to C = R at zero pilot power.
    """
    if cfg.p_ut == 0.0:
        return cfg.r
    x = _solve_against_r(cfg)
    c = cfg.r.matrix - cfg.p_ut * (cfg.r.matrix @ x)
    return nearly_psd(c, scale=cfg.r.max_eigenvalue)


def mse_per_antenna(cfg: UplinkConfig) -> float:
    """tr(C) / N: mean-square estimation error per channel element."""
    return error_covariance(cfg).trace() / cfg.dim


def error_floor(cfg: UplinkConfig) -> CovarianceMatrix:
    """High-pilot-power limit of the error covariance.

    C_inf = R - R ((1 + kappa_t_ut) R + kappa_r_bs diag(R))^{-1} R.
    """
    r = cfg.r.matrix
    b = (1.0 + cfg.imp.kappa_t_ut) * r.copy()
    b[np.diag_indices_from(b)] += cfg.imp.kappa_r_bs * cfg.r.diagonal()
    try:
        f = cho_factor(b, lower=True)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(
            "high-power bracket is singular (rank-deficient R with "
            "kappa_r_bs = 0)"
        ) from exc
    c = r - r @ cho_solve(f, r)
    return nearly_psd(c, scale=cfg.r.max_eigenvalue)


def error_floor_iid(lam: float, kappa_t_ut: float, kappa_r_bs: float) -> float:
    """Per-antenna error floor for R = lam * I: lam (1 - 1/(1 + kt + kr))."""
    if not (lam > 0.0):
        raise ValueError(f"channel variance must be positive, got {lam}")
    if kappa_t_ut < 0.0 or kappa_r_bs < 0.0:
        raise ValueError("impairment levels must be nonnegative")
    return lam * (1.0 - 1.0 / (1.0 + kappa_t_ut + kappa_r_bs))


def _simulate_uplink_batch(cfg: UplinkConfig, h: np.ndarray,
                           rng: np.random.Generator,
                           s_factor: np.ndarray) -> np.ndarray:
    """Vectorized uplink draws for a (count, N) batch of channels."""
    count, n = h.shape
    eta_t = sample_scalar_cn(cfg.imp.kappa_t_ut * cfg.p_ut, rng, size=count)
    nu = sample_cn(cfg.s, rng, size=count, factor=s_factor)
    eta_r = (np.sqrt(cfg.imp.kappa_r_bs * cfg.p_ut) * np.abs(h)
             * sample_scalar_cn(1.0, rng, size=(count, n)))
    return h * (cfg.d + eta_t)[:, None] + nu + eta_r


def simulate_uplink(cfg: UplinkConfig, h: np.ndarray,
                    rng: np.random.Generator) -> np.ndarray:
    """One draw of the uplink observation z for a fixed channel h.

    z = h (d + eta_t) + nu + eta_r, with eta_t ~ CN(0, kappa_t_ut * p),
    nu ~ CN(0, S), and eta_r ~ CN(0, kappa_r_bs * p * diag(|h_i|^2)),
    all independent given h.
    """
    h = np.asarray(h, dtype=np.complex128)
    if h.shape != (cfg.dim,):
        raise ValueError(f"channel must have shape ({cfg.dim},), got {h.shape}")
    z = _simulate_uplink_batch(cfg, h[None, :], rng, psd_factor(cfg.s))
    return z[0]


_CHUNK = 2048


def empirical_mse(cfg: UplinkConfig, n_samples: int, seed: int):
    """Monte-Carlo per-antenna MSE over full channel/observation/estimate
    chains; chunked by sample index so results do not depend on how the
    work is partitioned."""
    from .capacity import MonteCarloEstimate  # avoids a module cycle

    if n_samples < 2:
        raise ValueError("need at least 2 samples")
    a = lmmse_filter(cfg)
    r_factor = psd_factor(cfg.r)
    s_factor = psd_factor(cfg.s)
    errs = []
    for j, start in enumerate(range(0, n_samples, _CHUNK)):
        count = min(_CHUNK, n_samples - start)
        rng = substream(seed, j)
        h = sample_cn(cfg.r, rng, size=count, factor=r_factor)
        z = _simulate_uplink_batch(cfg, h, rng, s_factor)
        h_hat = z @ a.T
        errs.append(np.sum(np.abs(h_hat - h) ** 2, axis=1) / cfg.dim)
    e = np.concatenate(errs)
    return MonteCarloEstimate(
        value=float(np.mean(e)),
        std_error=float(np.std(e, ddof=1) / math.sqrt(len(e))),
        n_samples=len(e),
    )
