"""Downlink capacity bounds under transceiver hardware impairments.

The downlink observation is y = h^T (w s + eta_t) + n + eta_r with
distortion variances proportional to the signal power. The closed-form
upper bound assumes perfect channel knowledge and optimal beamforming;
the Monte-Carlo lower bound uses the LMMSE channel estimate with
approximate maximum ratio transmission and only statistical channel
knowledge at the receiver. Both converge to finite ceilings set by the
terminal-side impairment levels as the array grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .estimation import (
    ImpairmentProfile,
    UplinkConfig,
    lmmse_filter,
    error_covariance,
)
from .randmat import (
    CovarianceMatrix,
    psd_factor,
    sample_cn,
    sample_scalar_cn,
    substream,
)
from .specfun import one_minus_x_ex_e1

LOG2 = math.log(2.0)

# Below this transmit-distortion level the closed-form bound switches to
# its analytic zero-impairment limit to avoid 1/kappa blowup.
_KAPPA_T_BS_SWITCH = 1e-12

_CHUNK = 2048


@dataclass(frozen=True)
class DownlinkConfig:
    """Data-phase scenario: signal power, receiver noise variance, and the
    impairment profile (only the BS transmit / UT receive levels enter)."""

    p_bs: float
    sigma2_ut: float
    imp: ImpairmentProfile = field(default_factory=ImpairmentProfile)

    def __post_init__(self):
        if not (self.p_bs > 0.0) or not math.isfinite(self.p_bs):
            raise ValueError(f"signal power must be positive, got {self.p_bs}")
        if not (self.sigma2_ut > 0.0) or not math.isfinite(self.sigma2_ut):
            raise ValueError(f"noise variance must be positive, got {self.sigma2_ut}")


@dataclass(frozen=True)
class MonteCarloEstimate:
    """A Monte-Carlo value with its standard error and sample count."""

    value: float
    std_error: float
    n_samples: int

    def __post_init__(self):
        if self.n_samples < 2:
            raise ValueError("a Monte-Carlo estimate needs at least 2 samples")
        if self.std_error < 0.0:
            raise ValueError("standard error must be nonnegative")


def simulate_downlink(dl: DownlinkConfig, h: np.ndarray, w: np.ndarray,
                      s: complex, rng: np.random.Generator) -> complex:
    """One draw of the received downlink symbol for fixed (h, w, s)."""
    h = np.asarray(h, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    if abs(np.linalg.norm(w) - 1.0) > 1e-12:
        raise ValueError("beamformer must have unit norm")
    kt, kr = dl.imp.kappa_t_bs, dl.imp.kappa_r_ut
    eta_t = (np.sqrt(kt * dl.p_bs) * np.abs(w)
             * sample_scalar_cn(1.0, rng, size=w.shape[0]))
    gain = h @ w
    n = sample_scalar_cn(dl.sigma2_ut, rng)
    eta_r = sample_scalar_cn(kr * dl.p_bs * abs(gain) ** 2, rng)
    return complex(h @ (w * s + eta_t) + n + eta_r)


def sinr_of_beamformer(h: np.ndarray, w: np.ndarray, dl: DownlinkConfig) -> float:
    """Instantaneous SINR of a given unit-norm beamformer:
    |h^T w|^2 / (kt sum |h_i w_i|^2 + kr |h^T w|^2 + sigma^2 / p)."""
    h = np.asarray(h, dtype=np.complex128)
    w = np.asarray(w, dtype=np.complex128)
    gain = abs(h @ w) ** 2
    selfint = float(np.sum(np.abs(h * w) ** 2))
    denom = (dl.imp.kappa_t_bs * selfint + dl.imp.kappa_r_ut * gain
             + dl.sigma2_ut / dl.p_bs)
    return gain / denom


def optimal_beamformer(h: np.ndarray, dl: DownlinkConfig) -> np.ndarray:
    """SINR-maximizing unit-norm beamformer under perfect channel knowledge:
    (kt diag(|h_i|^2) + (sigma^2/p) I)^{-1} h*, normalized."""
    h = np.asarray(h, dtype=np.complex128)
    norm_h = np.linalg.norm(h)
    if norm_h == 0.0:
        raise ValueError("degenerate channel: h = 0 has no beamforming direction")
    w = np.conj(h) / (dl.imp.kappa_t_bs * np.abs(h) ** 2 + dl.sigma2_ut / dl.p_bs)
    return w / np.linalg.norm(w)


def sinr_perfect_csi(h: np.ndarray, dl: DownlinkConfig) -> float:
    """Maximum instantaneous SINR over unit-norm beamformers:
    h^T (kt diag(|h_i|^2) + kr h* h^T + (sigma^2/p) I)^{-1} h*."""
    h = np.asarray(h, dtype=np.complex128)
    if np.linalg.norm(h) == 0.0:
        return 0.0
    n = h.shape[0]
    m = np.diag(dl.imp.kappa_t_bs * np.abs(h) ** 2
                + dl.sigma2_ut / dl.p_bs).astype(np.complex128)
    m += dl.imp.kappa_r_ut * np.outer(np.conj(h), h)
    x = np.linalg.solve(m, np.conj(h))
    return float((h @ x).real)


def capacity_upper_bound(r: CovarianceMatrix, dl: DownlinkConfig) -> float:
    """Closed-form capacity upper bound, log2(1 + G / (1 + kr G)), in
    bits per channel use.

    G sums one antenna term per diagonal entry of R; at kappa_t_bs = 0 it
    collapses to the analytic limit p * tr(R) / sigma^2.
    """
    diag = r.diagonal()
    if np.any(diag <= 0.0):
        raise ValueError("channel covariance has a zero diagonal entry")
    kt, kr = dl.imp.kappa_t_bs, dl.imp.kappa_r_ut
    if kt < _KAPPA_T_BS_SWITCH:
        g = dl.p_bs * float(np.sum(diag)) / dl.sigma2_ut
    else:
        x = dl.sigma2_ut / (dl.p_bs * kt * diag)
        # antennas with equal channel variance share one evaluation
        uniq, counts = np.unique(x, return_counts=True)
        g = sum(c * one_minus_x_ex_e1(xi) for xi, c in zip(uniq, counts)) / kt
    return math.log2(1.0 + g / (1.0 + kr * g))


def capacity_ideal_jensen(r: CovarianceMatrix, dl: DownlinkConfig) -> float:
    """Ideal-hardware comparison curve: log2(1 + p * tr(R) / sigma^2)."""
    return math.log2(1.0 + dl.p_bs * r.trace() / dl.sigma2_ut)


def upper_limit_high_power(n: int, kappa_t_bs: float, kappa_r_ut: float) -> float:
    """High-power ceiling of the upper bound: log2(1 + N/(kt + kr N)).

    Returns +inf when both impairment levels are zero (no ceiling).
    """
    if n < 1:
        raise ValueError("antenna count must be a positive integer")
    denom = kappa_t_bs + kappa_r_ut * n
    if denom == 0.0:
        return math.inf
    return math.log2(1.0 + n / denom)


def upper_limit_large_n(kappa_r_ut: float) -> float:
    """Large-array ceiling of the upper bound: log2(1 + 1/kappa_r_ut).

    Returns +inf at kappa_r_ut = 0 (unbounded, not an error).
    """
    if kappa_r_ut == 0.0:
        return math.inf
    return math.log2(1.0 + 1.0 / kappa_r_ut)


def lower_limit_scaled_power(kappa_t_ut: float, kappa_r_ut: float) -> float:
    """Large-array limit of the lower bound under admissible power scaling:
    log2(1 + 1/(kr + kt + kr kt)); +inf when both levels are zero."""
    denom = kappa_r_ut + kappa_t_ut + kappa_r_ut * kappa_t_ut
    if denom == 0.0:
        return math.inf
    return math.log2(1.0 + 1.0 / denom)


def lower_bound_mc(ul: UplinkConfig, dl: DownlinkConfig, n_samples: int,
                   seed: int) -> MonteCarloEstimate:
    """Monte-Carlo achievable-rate lower bound with approximate MRT.

    Each sample runs the full chain: channel draw, distorted uplink pilot,
    LMMSE estimate, beamformer v = conj(h_hat)/||h_hat||. The three
    expectations E{h^T v}, E{|h^T v|^2}, sum_i E{|h_i|^2 |v_i|^2} are
    estimated jointly from the common sample stream; the standard error of
    log2(1 + SINR) follows by the delta method.
    """
    if n_samples < 1000:
        raise ValueError("lower_bound_mc needs at least 1000 samples")
    a = lmmse_filter(ul)
    r_factor = psd_factor(ul.r)
    s_factor = psd_factor(ul.s)
    from .estimation import _simulate_uplink_batch

    chunks = []
    dropped = 0
    for j, start in enumerate(range(0, n_samples, _CHUNK)):
        count = min(_CHUNK, n_samples - start)
        rng = substream(seed, j)
        h = sample_cn(ul.r, rng, size=count, factor=r_factor)
        z = _simulate_uplink_batch(ul, h, rng, s_factor)
        h_hat = z @ a.T
        norms = np.linalg.norm(h_hat, axis=1)
        ok = norms > 0.0
        dropped += count - int(np.sum(ok))
        v = np.conj(h_hat[ok]) / norms[ok, None]
        g = np.einsum("ij,ij->i", h[ok], v)
        q = np.abs(g) ** 2
        u = np.einsum("ij,ij->i", np.abs(h[ok]) ** 2, np.abs(v) ** 2)
        chunks.append(np.column_stack([g.real, g.imag, q, u]))
    if dropped > 0.001 * n_samples:
        raise RuntimeError(
            f"{dropped} of {n_samples} draws produced a zero channel estimate"
        )
    x = np.vstack(chunks)
    n_eff = x.shape[0]
    mean = x.mean(axis=0)
    cov = np.cov(x, rowvar=False)
    a_re, a_im, q_m, u_m = mean
    sig = a_re ** 2 + a_im ** 2
    kt, kr = dl.imp.kappa_t_bs, dl.imp.kappa_r_ut
    denom = (1.0 + kr) * q_m - sig + kt * u_m + dl.sigma2_ut / dl.p_bs
    sinr = sig / denom
    value = math.log2(1.0 + sinr)
    grad_sinr = np.array([
        2.0 * a_re * (denom + sig) / denom ** 2,
        2.0 * a_im * (denom + sig) / denom ** 2,
        -sig * (1.0 + kr) / denom ** 2,
        -sig * kt / denom ** 2,
    ])
    grad = grad_sinr / (LOG2 * (1.0 + sinr))
    var = float(grad @ cov @ grad) / n_eff
    return MonteCarloEstimate(value=value, std_error=math.sqrt(max(var, 0.0)),
                              n_samples=n_eff)


def lower_bound_asymptotic(ul: UplinkConfig, dl: DownlinkConfig,
                           n_scalar_samples: int = 100_000,
                           seed: int = 0) -> float:
    """Large-array closed form of the lower bound with the O(1/sqrt(N))
    remainders dropped.

    Only two scalar expectations over the terminal transmit distortion
    eta ~ CN(0, kappa_t_ut * p_ut) remain; they are evaluated by seeded
    1-D Monte-Carlo. Psi = p_ut kappa_r_bs diag(R) + S is the
    channel-averaged covariance of the additive uplink disturbance.
    Returns +inf if the denominator vanishes (unbounded rate).
    """
    if n_scalar_samples < 2:
        raise ValueError("need at least 2 scalar samples")
    a = lmmse_filter(ul)
    c = error_covariance(ul)
    tr_rc = ul.r.trace() - c.trace()
    psi = ul.p_ut * ul.imp.kappa_r_bs * np.diag(ul.r.diagonal()) + ul.s.matrix
    t_sig = float(np.real(np.trace(a @ ul.r.matrix @ a.conj().T)))
    t_psi = float(np.real(np.trace(a @ psi @ a.conj().T)))

    rng = substream(seed, 0)
    eta = sample_scalar_cn(ul.imp.kappa_t_ut * ul.p_ut, rng, size=n_scalar_samples)
    scale = np.abs(ul.d + eta) ** 2 * t_sig + t_psi
    num_samples = (1.0 + eta / ul.d) * math.sqrt(tr_rc) / np.sqrt(scale)
    den_samples = np.abs(1.0 + eta / ul.d) ** 2 * tr_rc / scale
    num = abs(np.mean(num_samples)) ** 2
    n = ul.dim
    denom = ((1.0 + dl.imp.kappa_r_ut) * float(np.mean(den_samples)) - num
             + dl.sigma2_ut / (n * ul.p_ut * dl.p_bs))
    if denom <= 0.0:
        return math.inf
    return math.log2(1.0 + num / denom)
