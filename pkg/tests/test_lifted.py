"""
Tests for the lifted cycle-domain spectrum.
"""

import math

import numpy as np
import pytest

from qdob.analysis.lifted import MIN_CYCLES, lifted_spectrum
from qdob.sim.disturbances import DisturbanceProfile, gen_disturbance
from qdob.utils.errors import InsufficientDataError, InvalidArgumentError

T = 1e-3
L = 0.5


class TestLiftedSpectrum:
    """Test lifting and the cycle-axis transform."""

    @pytest.mark.unit
    def test_shape_and_axes(self):
        """Test spectrum shape and the tau and omega axes."""
        x = np.random.default_rng(0).normal(size=8 * 500 + 123)
        spectrum = lifted_spectrum(x, L, T)
        assert spectrum.cycles == 8
        assert spectrum.values.shape == (8, 500)
        assert spectrum.tau[1] == pytest.approx(T)
        assert spectrum.omega[0] == pytest.approx(-math.pi / L)
        assert np.all(spectrum.omega < math.pi / L)
        assert np.all(np.diff(spectrum.omega) > 0)

    @pytest.mark.unit
    def test_parseval(self):
        """Test energy conservation across the transform."""
        x = np.random.default_rng(1).normal(size=6 * 500)
        spectrum = lifted_spectrum(x, L, T)
        assert spectrum.parseval_error() < 1e-12
        assert spectrum.total_energy() == pytest.approx(float(np.sum(x**2)))

    @pytest.mark.unit
    def test_periodic_signal_sits_at_zero(self):
        """Test that an exactly periodic signal has energy only at omega = 0."""
        t = np.arange(10 * 500) * T
        x = np.sin(2 * math.pi * t / L) + 0.3 * np.cos(6 * math.pi * t / L)
        spectrum = lifted_spectrum(x, L, T, rho=0.1)
        assert spectrum.energy_above(1e-9) < 1e-20
        assert spectrum.rho == 0.1

    @pytest.mark.unit
    def test_quasiperiodic_energy_below_bandwidth(self):
        """Test that drift energy stays below the drift bandwidth."""
        profile = DisturbanceProfile(
            kind="quasiperiodic_drift",
            period=L,
            a=[0.0, 1.0],
            b=[0.0, 0.5],
            drift_depth=0.3,
            drift_bandwidth=1.0,
        )
        t = np.arange(400 * 500) * T
        spectrum = lifted_spectrum(gen_disturbance(profile, t, seed=2), L, T)
        assert spectrum.energy_above(1.0) < 0.01
        assert spectrum.energy_above(0.01) > 1e-4

    @pytest.mark.unit
    def test_white_noise_spreads_evenly(self):
        """Half the energy of white noise lies above half the cycle-frequency Nyquist."""
        x = np.random.default_rng(4).normal(size=400 * 500)
        spectrum = lifted_spectrum(x, L, T)
        assert spectrum.energy_above(math.pi / (2 * L)) == pytest.approx(0.5, abs=0.02)

    @pytest.mark.unit
    def test_zero_signal(self):
        spectrum = lifted_spectrum(np.zeros(5 * 500), L, T)
        assert spectrum.energy_above(0.1) == 0.0
        assert spectrum.parseval_error() == 0.0

    @pytest.mark.unit
    def test_too_few_cycles(self):
        """Test the minimum cycle count."""
        with pytest.raises(InsufficientDataError) as exc_info:
            lifted_spectrum(np.zeros((MIN_CYCLES - 1) * 500 + 499), L, T)
        assert exc_info.value.required == MIN_CYCLES

    @pytest.mark.unit
    def test_invalid_period(self):
        with pytest.raises(InvalidArgumentError):
            lifted_spectrum(np.zeros(100), 0.0, T)

    @pytest.mark.unit
    def test_to_dict(self):
        spectrum = lifted_spectrum(np.ones(4 * 500), L, T)
        data = spectrum.to_dict()
        assert data["cycles"] == 4
        assert data["power"].shape == (4, 500)
