"""Seeded experiment drivers emitting deterministic CSV sweep tables.

Each experiment reproduces one of the standard performance figures:

* ``estimation-error``   -- per-antenna LMMSE error vs uplink SNR
* ``capacity-vs-n``      -- capacity bounds vs array size
* ``capacity-vs-kappa``  -- capacity bounds vs base-station impairments
* ``energy-efficiency``  -- bits/Joule under 1/N^t power scaling

Output schema is fixed: experiment,n,snr_db,kappa_bs,kappa_ut,t,metric,
value,std_error. Analytic metrics leave std_error empty. Tables are
byte-identical given (config, seed), regardless of worker count: every
grid point computes from a seed derived from (seed, point index) and
output rows follow grid order, not completion order.
"""

from __future__ import annotations

import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .capacity import (
    DownlinkConfig,
    capacity_ideal_jensen,
    capacity_upper_bound,
    lower_bound_mc,
    upper_limit_large_n,
)
from .energy import EnergyConfig, ee_sweep
from .estimation import (
    ImpairmentProfile,
    UplinkConfig,
    empirical_mse,
    error_floor,
    mse_per_antenna,
)
from .randmat import CovarianceMatrix, derive_seed, exponential_correlation

EXPERIMENTS = (
    "estimation-error",
    "capacity-vs-n",
    "capacity-vs-kappa",
    "energy-efficiency",
)

CSV_COLUMNS = ("experiment", "n", "snr_db", "kappa_bs", "kappa_ut", "t",
               "metric", "value", "std_error")

# Grid defaults: EVM levels 0/5/10/15 %, power-of-two array sizes, and the
# -10..50 dB SNR axis.
KAPPA_LEVELS = (0.0, 0.05 ** 2, 0.10 ** 2, 0.15 ** 2)
N_GRID_POW2 = tuple(2 ** k for k in range(11))
SNR_DB_GRID = tuple(float(v) for v in range(-10, 55, 5))
T_GRID = (0.0, 0.25, 0.5)

EXP_CORR_RHO = 0.7
SNR_DB_FIXED = 20.0


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


@dataclass
class ExperimentConfig:
    experiment: str
    seed: int = 1
    n_samples: int | None = None  # None: 1e4 per point for N <= 256, else 1e3
    out: str | None = None
    n_grid: list[int] | None = None
    snr_db: list[float] | None = None
    kappa: list[float] | None = None
    t: list[float] | None = None
    workers: int = 1

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}"
            )
        if self.n_samples is not None and self.n_samples < 1000:
            raise ValueError("sample count must be at least 1000")
        if self.workers < 1:
            raise ValueError("worker count must be positive")
        for name in ("n_grid", "snr_db", "kappa", "t"):
            v = getattr(self, name)
            if v is not None and len(v) == 0:
                raise ValueError(f"{name} grid must be non-empty")

    def samples_for(self, n: int) -> int:
        if self.n_samples is not None:
            return self.n_samples
        return 10_000 if n <= 256 else 1_000


@dataclass
class SweepTable:
    columns: tuple[str, ...] = CSV_COLUMNS
    rows: list[tuple] = field(default_factory=list)

    def add(self, experiment: str, metric: str, value: float, *, n=None,
            snr_db=None, kappa_bs=None, kappa_ut=None, t=None, std_error=None):
        self.rows.append((experiment, n, snr_db, kappa_bs, kappa_ut, t,
                          metric, value, std_error))

    def extend(self, other: "SweepTable"):
        self.rows.extend(other.rows)

    def values(self, metric: str, **match) -> list[tuple]:
        """Rows for one metric, filtered on exact column values."""
        out = []
        for row in self.rows:
            rec = dict(zip(self.columns, row))
            if rec["metric"] != metric:
                continue
            if all(rec[k] == v for k, v in match.items()):
                out.append(row)
        return out


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, str):
        return value
    if isinstance(value, int):
        return str(value)
    return format(float(value), ".17g")


def write_csv(table: SweepTable, path) -> None:
    """UTF-8, LF endings, 17-significant-digit floats (round-trip exact)."""
    lines = [",".join(table.columns)]
    lines.extend(",".join(_fmt(v) for v in row) for row in table.rows)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def _parallel(fn, items, workers: int):
    """Map fn over items, preserving item order regardless of pool size."""
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def _progress(msg: str) -> None:
    print(msg, file=sys.stderr, flush=True)


# ---------------------------------------------------------------------------
# estimation-error: analytic + empirical per-antenna MSE and the error floor
# vs uplink SNR, for exponentially correlated R (trace N) and S = I.
# ---------------------------------------------------------------------------

def run_estimation_error(cfg: ExperimentConfig) -> SweepTable:
    n_grid = cfg.n_grid or [10, 100]
    kappas = cfg.kappa if cfg.kappa is not None else list(KAPPA_LEVELS)
    snrs = cfg.snr_db if cfg.snr_db is not None else list(SNR_DB_GRID)

    points = [(i, n, k) for i, (n, k) in
              enumerate((n, k) for n in n_grid for k in kappas)]

    def one_point(point):
        idx, n, kappa = point
        _progress(f"estimation-error: N={n} kappa={kappa:g}")
        r = exponential_correlation(n, EXP_CORR_RHO)
        s = CovarianceMatrix.identity(n)
        imp = ImpairmentProfile(kappa_t_ut=kappa, kappa_r_bs=kappa)
        sub = SweepTable()
        floor = None
        for j, snr_db in enumerate(snrs):
            p_ut = db_to_linear(snr_db) * s.trace() / r.trace()
            ul = UplinkConfig(r=r, s=s, p_ut=p_ut, imp=imp)
            if floor is None:
                floor = error_floor(ul).trace() / n
            sub.add("estimation-error", "mse_analytic", mse_per_antenna(ul),
                    n=n, snr_db=snr_db, kappa_bs=kappa, kappa_ut=kappa)
            sub.add("estimation-error", "mse_floor", floor,
                    n=n, snr_db=snr_db, kappa_bs=kappa, kappa_ut=kappa)
            est = empirical_mse(ul, cfg.samples_for(n),
                                derive_seed(cfg.seed, idx, j))
            sub.add("estimation-error", "mse_empirical", est.value,
                    n=n, snr_db=snr_db, kappa_bs=kappa, kappa_ut=kappa,
                    std_error=est.std_error)
        return sub

    table = SweepTable()
    for sub in _parallel(one_point, points, cfg.workers):
        table.extend(sub)
    return table


# ---------------------------------------------------------------------------
# capacity experiments: R = S = I, pilot and data SNR both fixed at 20 dB.
# ---------------------------------------------------------------------------

def _capacity_point(n: int, kappa_bs: float, kappa_ut: float, snr_db: float,
                    n_samples: int, seed: int, with_extras: bool) -> SweepTable:
    r = CovarianceMatrix.identity(n)
    s = CovarianceMatrix.identity(n)
    imp = ImpairmentProfile(kappa_t_bs=kappa_bs, kappa_r_bs=kappa_bs,
                            kappa_t_ut=kappa_ut, kappa_r_ut=kappa_ut)
    snr = db_to_linear(snr_db)
    p = snr * s.trace() / r.trace()
    sigma2 = s.trace() / n  # per-antenna noise level
    ul = UplinkConfig(r=r, s=s, p_ut=p, imp=imp)
    dl = DownlinkConfig(p_bs=p, sigma2_ut=sigma2, imp=imp)
    sub = SweepTable()
    kw = dict(n=n, snr_db=snr_db, kappa_bs=kappa_bs, kappa_ut=kappa_ut)
    exp = "capacity-vs-n" if with_extras else "capacity-vs-kappa"
    sub.add(exp, "capacity_upper", capacity_upper_bound(r, dl), **kw)
    est = lower_bound_mc(ul, dl, n_samples, seed)
    sub.add(exp, "capacity_lower", est.value, std_error=est.std_error, **kw)
    if with_extras:
        sub.add(exp, "capacity_ideal", capacity_ideal_jensen(r, dl), **kw)
        sub.add(exp, "ceiling_large_n", upper_limit_large_n(kappa_ut), **kw)
    return sub


def run_capacity_vs_n(cfg: ExperimentConfig) -> SweepTable:
    n_grid = cfg.n_grid or list(N_GRID_POW2)
    kappas = cfg.kappa if cfg.kappa is not None else list(KAPPA_LEVELS)
    snr_db = cfg.snr_db[0] if cfg.snr_db else SNR_DB_FIXED

    points = [(i, n, k) for i, (k, n) in
              enumerate((k, n) for k in kappas for n in n_grid)]

    def one_point(point):
        idx, n, kappa = point
        _progress(f"capacity-vs-n: N={n} kappa={kappa:g}")
        return _capacity_point(n, kappa, kappa, snr_db, cfg.samples_for(n),
                               derive_seed(cfg.seed, idx), with_extras=True)

    table = SweepTable()
    for sub in _parallel(one_point, points, cfg.workers):
        table.extend(sub)
    return table


# Fixed terminal impairment level for the BS-impairment sweep.
KAPPA_UT_FIXED = 0.05 ** 2


def run_capacity_vs_kappa(cfg: ExperimentConfig) -> SweepTable:
    n_grid = cfg.n_grid or list(N_GRID_POW2)
    kappas_bs = cfg.kappa if cfg.kappa is not None else list(KAPPA_LEVELS)
    snr_db = cfg.snr_db[0] if cfg.snr_db else SNR_DB_FIXED

    points = [(i, n, k) for i, (k, n) in
              enumerate((k, n) for k in kappas_bs for n in n_grid)]

    def one_point(point):
        idx, n, kappa_bs = point
        _progress(f"capacity-vs-kappa: N={n} kappa_bs={kappa_bs:g}")
        return _capacity_point(n, kappa_bs, KAPPA_UT_FIXED, snr_db,
                               cfg.samples_for(n), derive_seed(cfg.seed, idx),
                               with_extras=False)

    table = SweepTable()
    for sub in _parallel(one_point, points, cfg.workers):
        table.extend(sub)
    return table


# ---------------------------------------------------------------------------
# energy-efficiency: base powers 30 dBm (1 W) at N = 1, noise level chosen
# so the N = 1 average SNR is 20 dB, exponential correlation 0.7, 15 kHz.
# ---------------------------------------------------------------------------

EE_P_BASE_W = 1.0
EE_SNR_BASE_DB = 20.0
EE_KAPPA_IMPAIRED = 0.05 ** 2


def _ee_channel_model(n: int):
    r = exponential_correlation(n, EXP_CORR_RHO)
    sigma2 = EE_P_BASE_W / db_to_linear(EE_SNR_BASE_DB)
    s = CovarianceMatrix.identity(n).scaled(sigma2)
    return r, s, sigma2


def run_energy_efficiency(cfg: ExperimentConfig) -> SweepTable:
    n_grid = cfg.n_grid or list(N_GRID_POW2)
    t_grid = cfg.t if cfg.t is not None else list(T_GRID)
    kappas = cfg.kappa if cfg.kappa is not None else [0.0, EE_KAPPA_IMPAIRED]
    profiles = {("ideal" if k == 0.0 else f"impaired[{k:g}]"):
                ImpairmentProfile.uniform(k) for k in kappas}

    table = SweepTable()
    for ti, t in enumerate(t_grid):
        _progress(f"energy-efficiency: t={t:g}")
        ecfg = EnergyConfig(p_bs_base=EE_P_BASE_W, p_ut_base=EE_P_BASE_W,
                            t_bs=t, t_ut=t)
        points = ee_sweep(_ee_channel_model, ecfg, n_grid, profiles,
                          cfg.samples_for, derive_seed(cfg.seed, ti),
                          workers=cfg.workers)
        for pt in points:
            kw = dict(n=pt.n, snr_db=EE_SNR_BASE_DB - 10.0 * t * math.log10(pt.n),
                      kappa_bs=pt.imp.kappa_t_bs, kappa_ut=pt.imp.kappa_t_ut, t=t)
            table.add("energy-efficiency", "ee", pt.ee,
                      std_error=pt.ee_std_error, **kw)
            table.add("energy-efficiency", "capacity_lower", pt.capacity.value,
                      std_error=pt.capacity.std_error, **kw)
    return table


RUNNERS = {
    "estimation-error": run_estimation_error,
    "capacity-vs-n": run_capacity_vs_n,
    "capacity-vs-kappa": run_capacity_vs_kappa,
    "energy-efficiency": run_energy_efficiency,
}


def run_experiment(cfg: ExperimentConfig) -> SweepTable:
    return RUNNERS[cfg.experiment](cfg)
