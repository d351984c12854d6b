"""Estimation, capacity, and energy-efficiency limits of large-scale MISO
links with transceiver hardware impairments."""

from .randmat import (
    CovarianceMatrix,
    InvalidMatrixError,
    exponential_correlation,
    psd_factor,
    sample_cn,
    sample_scalar_cn,
    substream,
)
from .specfun import exp_integral_e1, one_minus_x_ex_e1
from .estimation import (
    EstimationResult,
    ImpairmentProfile,
    SingularMatrixError,
    UplinkConfig,
    empirical_mse,
    error_covariance,
    error_floor,
    error_floor_iid,
    estimate,
    lmmse_filter,
    mse_per_antenna,
    simulate_uplink,
)
from .capacity import (
    DownlinkConfig,
    MonteCarloEstimate,
    capacity_ideal_jensen,
    capacity_upper_bound,
    lower_bound_asymptotic,
    lower_bound_mc,
    lower_limit_scaled_power,
    optimal_beamformer,
    simulate_downlink,
    sinr_of_beamformer,
    sinr_perfect_csi,
    upper_limit_high_power,
    upper_limit_large_n,
)
from .energy import EnergyConfig, ee_sweep, energy_efficiency, scaled_power
from .experiments import ExperimentConfig, SweepTable, run_experiment, write_csv

__version__ = "0.1.0"
