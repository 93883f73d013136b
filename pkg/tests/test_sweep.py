"""
Tests for single-bin DFTs, phasor fits and the gain sweep.
"""

import logging
import math

import numpy as np
import pytest

from qdob.analysis.sweep import (
    goertzel,
    harmonic_amplitudes,
    integer_period_window,
    measure_gain_sweep,
    sinusoid_phasor,
)
from qdob.utils.errors import InsufficientDataError, InvalidArgumentError

T = 1e-3


class TestGoertzel:
    """Test the Goertzel recurrence."""

    @pytest.mark.unit
    def test_matches_fft_bin(self):
        """Test Goertzel against the FFT on a bin."""
        x = np.random.default_rng(0).normal(size=64)
        omega = 2 * math.pi * 5 / (64 * T)
        assert goertzel(x, omega, T) == pytest.approx(np.fft.fft(x)[5], abs=1e-9)

    @pytest.mark.unit
    def test_matches_direct_sum_off_bin(self):
        """Test Goertzel against a direct sum between bins."""
        x = np.random.default_rng(1).normal(size=300)
        omega = 123.4
        direct = np.sum(x * np.exp(-1j * omega * np.arange(300) * T))
        assert goertzel(x, omega, T) == pytest.approx(direct, abs=1e-9)

    @pytest.mark.unit
    def test_short_inputs(self):
        assert goertzel(np.array([]), 1.0, T) == 0j
        assert goertzel(np.array([2.5]), 1.0, T) == 2.5


class TestSinusoidPhasor:
    """Test the least-squares phasor fit."""

    @pytest.mark.unit
    def test_recovers_amplitude_and_phase(self):
        """Test amplitude and phase recovery."""
        t = np.arange(4000) * T
        x = 2.0 * np.cos(7.0 * t + 0.3)
        assert sinusoid_phasor(x, 7.0, T, detrend=False) == pytest.approx(
            2.0 * np.exp(0.3j), abs=1e-9
        )

    @pytest.mark.unit
    def test_detrend_absorbs_offset_and_ramp(self):
        """Test the detrended fit."""
        t = np.arange(4000) * T
        x = 0.5 * np.sin(9.0 * t) + 3.0 + 40.0 * t
        assert sinusoid_phasor(x, 9.0, T) == pytest.approx(-0.5j, abs=1e-9)


class TestIntegerPeriodWindow:
    """Test the DFT window selection."""

    @pytest.mark.unit
    def test_whole_periods_at_the_end(self):
        """Test the window holds whole periods at the end of the record."""
        window = integer_period_window(10001, 2 * math.pi, T, 2000)
        assert window.stop == 10001
        assert window.stop - window.start == 8000

    @pytest.mark.unit
    def test_too_short(self):
        with pytest.raises(InsufficientDataError):
            integer_period_window(3000, 2 * math.pi, T, 2000)

    @pytest.mark.unit
    def test_warns_below_recommended_periods(self, caplog):
        with caplog.at_level(logging.WARNING, logger="qdob"):
            integer_period_window(6000, 2 * math.pi, T, 1000)
        assert any("periods" in record.getMessage() for record in caplog.records)


class TestMeasureGainSweep:
    """Test the sweep against closed-form systems."""

    @pytest.mark.unit
    def test_identity_is_zero_db(self):
        """Test the identity system."""
        response = measure_gain_sweep(lambda x: x, [5.0, 20.0], 0.3, 8.0, 2.0, T)
        np.testing.assert_allclose(response.magnitude_db(), 0.0, atol=1e-9)
        np.testing.assert_allclose(response.phase_deg(), 0.0, atol=1e-7)

    @pytest.mark.unit
    def test_pure_delay(self):
        """Test the phase of a pure delay."""
        shift = 7

        def delayed(x):
            return np.concatenate((np.zeros(shift), x[:-shift]))

        response = measure_gain_sweep(delayed, [10.0, 30.0], 1.0, 10.0, 2.0, T, detrend=False)
        np.testing.assert_allclose(response.magnitude(), 1.0, atol=1e-9)
        np.testing.assert_allclose(
            response.values, np.exp(-1j * response.omega * shift * T), atol=1e-9
        )

    @pytest.mark.unit
    def test_scaled_system_and_metadata(self):
        response = measure_gain_sweep(lambda x: 0.5 * x, [20.0, 10.0], 0.3, 8.0, 2.0, T)
        np.testing.assert_allclose(response.magnitude_db(), 20 * math.log10(0.5), atol=1e-9)
        assert list(response.omega) == [10.0, 20.0]
        assert response.metadata["periods_used"]["10.0"] >= 9

    @pytest.mark.unit
    def test_invalid_amplitude(self):
        with pytest.raises(InvalidArgumentError):
            measure_gain_sweep(lambda x: x, [5.0], 0.0, 8.0, 2.0, T)

    @pytest.mark.unit
    def test_invalid_transient_cut(self):
        with pytest.raises(InvalidArgumentError):
            measure_gain_sweep(lambda x: x, [5.0], 1.0, 8.0, 8.0, T)

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "omegas",
        [[], [0.0, 5.0], [-5.0], [float("nan")], [float("inf")], [5.0, 10.0, 5.0]],
        ids=["empty", "zero", "negative", "nan", "inf", "duplicate"],
    )
    def test_invalid_frequencies(self, omegas):
        """Test rejection of empty, non-positive, non-finite and repeated frequencies."""
        calls = []
        with pytest.raises(InvalidArgumentError) as exc_info:
            measure_gain_sweep(calls.append, omegas, 1.0, 8.0, 2.0, T)
        assert exc_info.value.argument == "omegas"
        assert calls == []


class TestHarmonicAmplitudes:
    """Test per-harmonic amplitude extraction."""

    @pytest.mark.unit
    def test_amplitudes(self):
        """Test per-harmonic amplitudes of a known signal."""
        omega_0 = 2 * math.pi / 0.5
        t = np.arange(5001) * T
        x = 0.4 * np.cos(3 * omega_0 * t) + 0.3 * np.sin(5 * omega_0 * t)
        amplitudes = harmonic_amplitudes(x, omega_0, T, [3, 4, 5])
        assert amplitudes[3] == pytest.approx(0.4, abs=1e-9)
        assert amplitudes[4] == pytest.approx(0.0, abs=1e-9)
        assert amplitudes[5] == pytest.approx(0.3, abs=1e-9)

    @pytest.mark.unit
    def test_start_offset(self):
        omega_0 = 2 * math.pi / 0.5
        t = np.arange(3000) * T
        x = np.where(t < 1.0, 5.0, 1.0) * np.cos(omega_0 * t)
        assert harmonic_amplitudes(x, omega_0, T, [1], start=1000)[1] == pytest.approx(1.0, abs=1e-9)

    @pytest.mark.unit
    def test_record_shorter_than_period(self):
        with pytest.raises(InsufficientDataError):
            harmonic_amplitudes(np.zeros(100), 2 * math.pi / 0.5, T, [1])
