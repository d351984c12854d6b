"""Energy-efficiency metric and power-scaling sweep tests."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from misolim.energy import (
    EnergyConfig,
    EnergyPoint,
    ee_sweep,
    energy_efficiency,
    scaled_power,
)
from misolim.estimation import ImpairmentProfile
from misolim.randmat import CovarianceMatrix


def identity_channel(n):
    return CovarianceMatrix.identity(n), CovarianceMatrix.identity(n), 0.01


class TestEnergyConfig:
    def test_defaults_are_valid(self):
        cfg = EnergyConfig()
        assert cfg.bandwidth_hz == 15_000.0
        assert cfg.circuit_power == 0.0

    @pytest.mark.parametrize("kwargs", [
        {"alpha1": -0.1},
        {"alpha2": -1.0},
        {"p_bs_base": 0.0},
        {"p_ut_base": -1.0},
        {"t_bs": -0.25},
        {"bandwidth_hz": 0.0},
        {"circuit_power": -0.5},
    ])
    def test_rejects_bad_fields(self, kwargs):
        with pytest.raises(ValueError):
            EnergyConfig(**kwargs)

    @pytest.mark.parametrize("t_bs,t_ut,ok", [
        (0.0, 0.25, True),
        (0.5, 0.49, True),
        (0.0, 0.0, False),      # t_ut must be strictly positive
        (0.25, 0.5, False),     # t_ut must stay below 1/2
        (0.75, 0.3, False),     # sum must stay below 1
    ])
    def test_admissibility(self, t_bs, t_ut, ok):
        cfg = EnergyConfig(t_bs=t_bs, t_ut=t_ut)
        assert cfg.exponents_admissible() is ok


class TestScaledPower:
    @pytest.mark.parametrize("p,n,t,expected", [
        (1.0, 100, 0.5, 0.1),
        (1.0, 16, 0.25, 0.5),
        (2.0, 64, 0.0, 2.0),
        (1.0, 1, 0.5, 1.0),
    ])
    def test_values(self, p, n, t, expected):
        assert scaled_power(p, n, t) == pytest.approx(expected, rel=1e-14)

    def test_rejects_bad_args(self):
        with pytest.raises(ValueError):
            scaled_power(0.0, 4, 0.5)
        with pytest.raises(ValueError):
            scaled_power(1.0, 0, 0.5)
        with pytest.raises(ValueError):
            scaled_power(1.0, 4, -0.1)

    @given(n=st.integers(1, 10_000), t=st.floats(0.0, 1.0))
    @settings(max_examples=50, deadline=None)
    def test_never_exceeds_base(self, n, t):
        assert 0.0 < scaled_power(1.0, n, t) <= 1.0


class TestEnergyEfficiency:
    def test_reference_value(self):
        # 2 bits/use * 15000 uses/s over 1 W radiated = 30000 bits/Joule
        cfg = EnergyConfig()
        assert energy_efficiency(2.0, 1.0, 1.0, cfg) == pytest.approx(30_000.0)

    def test_overheads_enter_denominator(self):
        cfg = EnergyConfig(alpha1=0.5, alpha2=1.0)
        # denominator: 1.5 * 1 + 1.0 * 2 = 3.5 W
        assert energy_efficiency(7.0, 1.0, 2.0, cfg) == pytest.approx(
            7.0 * 15_000.0 / 3.5)

    def test_circuit_power_scales_with_antennas(self):
        cfg = EnergyConfig(circuit_power=0.1)
        assert energy_efficiency(1.0, 1.0, 0.0, cfg, n=10) == pytest.approx(
            15_000.0 / 2.0)

    def test_doubling_powers_halves_efficiency(self):
        cfg = EnergyConfig(alpha1=0.2, alpha2=0.3)
        a = energy_efficiency(3.0, 1.0, 0.5, cfg)
        b = energy_efficiency(3.0, 2.0, 1.0, cfg)
        assert b == pytest.approx(a / 2.0, rel=1e-14)

    @given(c=st.floats(0.01, 20.0), scale=st.floats(0.1, 10.0))
    @settings(max_examples=50, deadline=None)
    def test_homogeneity(self, c, scale):
        cfg = EnergyConfig()
        base = energy_efficiency(c, 1.0, 1.0, cfg)
        assert energy_efficiency(c, scale, scale, cfg) == pytest.approx(
            base / scale, rel=1e-12)

    def test_rejects_negative_capacity(self):
        with pytest.raises(ValueError):
            energy_efficiency(-1.0, 1.0, 1.0, EnergyConfig())

    def test_rejects_zero_total_power(self):
        with pytest.raises(ValueError):
            energy_efficiency(1.0, 0.0, 1.0, EnergyConfig(alpha2=0.0))


class TestEeSweep:
    PROFILES = {
        "ideal": ImpairmentProfile(),
        "impaired": ImpairmentProfile.uniform(0.0025),
    }

    def test_point_layout(self):
        cfg = EnergyConfig(t_bs=0.25, t_ut=0.25)
        pts = ee_sweep(identity_channel, cfg, [1, 4], self.PROFILES,
                       n_samples=1000, seed=0)
        assert [(p.n, p.hardware) for p in pts] == [
            (1, "ideal"), (1, "impaired"), (4, "ideal"), (4, "impaired")]
        for p in pts:
            assert isinstance(p, EnergyPoint)
            assert p.p_bs == pytest.approx(p.n ** -0.25)
            assert p.ee > 0.0 and p.ee_std_error >= 0.0

    def test_efficiency_grows_under_sqrt_scaling(self):
        cfg = EnergyConfig(t_bs=0.5, t_ut=0.5)
        with pytest.warns(UserWarning):
            pts = ee_sweep(identity_channel, cfg, [4, 64],
                           {"ideal": ImpairmentProfile()},
                           n_samples=2000, seed=1)
        assert pts[1].ee > 2.0 * pts[0].ee

    def test_unscaled_power_plateaus(self):
        with pytest.warns(UserWarning):
            cfg = EnergyConfig(t_bs=0.0, t_ut=0.0)
            pts = ee_sweep(identity_channel, cfg, [64, 256],
                           {"impaired": ImpairmentProfile.uniform(0.0025)},
                           n_samples=2000, seed=2)
        # rate (hence efficiency) saturates once the array is large
        assert pts[1].ee <= 1.25 * pts[0].ee

    def test_warns_on_inadmissible_exponents(self):
        cfg = EnergyConfig(t_bs=0.5, t_ut=0.5)
        assert not cfg.exponents_admissible()
        with pytest.warns(UserWarning, match="admissible"):
            ee_sweep(identity_channel, cfg, [2], {"ideal": ImpairmentProfile()},
                     n_samples=1000, seed=0)

    def test_worker_count_does_not_change_output(self):
        cfg = EnergyConfig(t_bs=0.25, t_ut=0.25)
        a = ee_sweep(identity_channel, cfg, [2, 8], self.PROFILES,
                     n_samples=1000, seed=3, workers=1)
        b = ee_sweep(identity_channel, cfg, [2, 8], self.PROFILES,
                     n_samples=1000, seed=3, workers=4)
        assert a == b

    def test_callable_sample_count(self):
        cfg = EnergyConfig(t_bs=0.25, t_ut=0.25)
        pts = ee_sweep(identity_channel, cfg, [2, 4],
                       {"ideal": ImpairmentProfile()},
                       n_samples=lambda n: 1000 * (1 + (n > 2)), seed=4)
        assert pts[0].capacity.n_samples == 1000
        assert pts[1].capacity.n_samples == 2000

    def test_empty_grid_rejected(self):
        with pytest.raises(ValueError):
            ee_sweep(identity_channel, EnergyConfig(t_ut=0.25), [],
                     self.PROFILES, n_samples=1000, seed=0)
