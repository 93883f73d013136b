"""
Sine-Sweep Gain Measurement

Steady-state single-frequency analysis of simulated responses: a Goertzel
single-bin DFT for harmonic summaries and a phasor fit on an integer number
of periods for sweep gains.
"""

import math
from typing import Callable, Dict, Optional, Sequence

import numpy as np
from scipy.signal import lfilter

from ..core.filters import rnd
from ..utils.errors import InsufficientDataError, InvalidArgumentError
from ..utils.logging import get_logger, log_sweep_point
from .transfer import FrequencyResponse

logger = get_logger(__name__)

MIN_PERIODS = 2
RECOMMENDED_PERIODS = 10

SystemClosure = Callable[[np.ndarray], np.ndarray]


def goertzel(samples: np.ndarray, omega: float, T: float) -> complex:
    """
    ``sum_k x_k exp(-j omega k T)`` by the Goertzel recurrence.

    The second-order resonator runs through ``scipy.signal.lfilter``.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if x.size == 0:
        return 0j
    if x.size == 1:
        return complex(x[0])
    w = omega * T
    s = lfilter([1.0], [1.0, -2.0 * math.cos(w), 1.0], x)
    y = s[-1] - np.exp(-1j * w) * s[-2]
    return complex(np.exp(-1j * w * (x.size - 1)) * y)


def sinusoid_phasor(
    samples: np.ndarray, omega: float, T: float, detrend: bool = True
) -> complex:
    """
    Complex amplitude ``A`` with ``x_k ~ Re(A exp(j omega k T))``.

    For a pure sinusoid on whole periods this equals ``2 X / n`` of the
    single-bin DFT. With ``detrend`` an offset and a ramp are fitted jointly,
    which absorbs the slow drift of a double-integrator output.
    """
    x = np.asarray(samples, dtype=float).ravel()
    t = np.arange(x.size) * T
    columns = [np.cos(omega * t), np.sin(omega * t)]
    if detrend:
        columns += [np.ones_like(t), t - t.mean()]
    solution, *_ = np.linalg.lstsq(np.column_stack(columns), x, rcond=None)
    return complex(solution[0], -solution[1])


def integer_period_window(
    total_samples: int, omega: float, T: float, transient_samples: int
) -> slice:
    """
    Trailing window with the largest whole number of periods after the
    transient.

    Raises:
        InsufficientDataError: Fewer than two periods remain
    """
    available = total_samples - transient_samples
    period_samples = 2.0 * math.pi / (omega * T)
    periods = int(math.floor(available / period_samples + 1e-9))
    if periods < MIN_PERIODS:
        raise InsufficientDataError(
            f"{available} samples after the transient hold {periods} periods at "
            f"{omega:.6g} rad/s, need {MIN_PERIODS}",
            available=periods,
            required=MIN_PERIODS,
        )
    if periods < RECOMMENDED_PERIODS:
        logger.warning(
            f"only {periods} periods at {omega:.6g} rad/s after the transient",
            extra={
                "structured_data": {
                    "operation": "measure_gain_sweep",
                    "omega": omega,
                    "periods": periods,
                }
            },
        )
    length = min(available, rnd(periods * period_samples))
    return slice(total_samples - length, total_samples)


def measure_gain_sweep(
    system: SystemClosure,
    omegas: Sequence[float],
    amplitude: float,
    duration: float,
    transient_cut: float,
    T: float,
    detrend: bool = True,
    label: str = "sweep",
) -> FrequencyResponse:
    """
    Complex gain ``response / injection`` at each frequency.

    Args:
        system: Maps an injection series to the response series of equal length
        omegas: Frequencies in rad/s
        amplitude: Injection amplitude
        duration: Simulated time per frequency in seconds
        transient_cut: Leading time discarded before the DFT
        T: Sampling time in seconds
        detrend: Fit an offset and ramp alongside the response sinusoid
        label: Label of the returned response

    Raises:
        InvalidArgumentError: Empty, non-positive or repeated frequencies, a
            zero amplitude or a transient cut outside ``[0, duration)``
        InsufficientDataError: Fewer than two periods after the transient
    """
    if not (amplitude != 0 and math.isfinite(amplitude)):
        raise InvalidArgumentError(
            "injection amplitude must be nonzero", argument="amplitude", value=amplitude
        )
    if not 0 <= transient_cut < duration:
        raise InvalidArgumentError(
            "transient_cut must lie in [0, duration)",
            argument="transient_cut",
            value=transient_cut,
        )
    frequencies = np.sort(np.asarray(omegas, dtype=float))
    if frequencies.size == 0 or not np.all(np.isfinite(frequencies) & (frequencies > 0)):
        raise InvalidArgumentError(
            "sweep frequencies must be finite and positive", argument="omegas", value=list(omegas)
        )
    if np.any(np.diff(frequencies) == 0):
        raise InvalidArgumentError(
            "sweep frequencies must be distinct", argument="omegas", value=list(omegas)
        )
    count = rnd(duration / T) + 1
    t = np.arange(count) * T
    skip = rnd(transient_cut / T)

    gains = np.empty(frequencies.size, dtype=complex)
    periods_used: Dict[str, int] = {}
    for i, omega in enumerate(frequencies):
        injection = amplitude * np.sin(omega * t)
        response = np.asarray(system(injection), dtype=float)
        window = integer_period_window(count, omega, T, skip)
        reference = sinusoid_phasor(injection[window], omega, T, detrend=False)
        gains[i] = sinusoid_phasor(response[window], omega, T, detrend=detrend) / reference

        periods = rnd((window.stop - window.start) * omega * T / (2.0 * math.pi))
        periods_used[repr(float(omega))] = periods
        log_sweep_point(logger, float(omega), 20.0 * math.log10(abs(gains[i]) or 1e-300), periods)

    return FrequencyResponse(
        omega=frequencies,
        values=gains,
        label=label,
        metadata={
            "amplitude": amplitude,
            "duration": duration,
            "transient_cut": transient_cut,
            "periods_used": periods_used,
        },
    )


def harmonic_amplitudes(
    samples: np.ndarray,
    omega_0: float,
    T: float,
    harmonics: Sequence[int],
    start: Optional[int] = None,
) -> Dict[int, float]:
    """
    Amplitude of each harmonic ``n omega_0`` from single-bin DFTs over the
    largest whole number of fundamental periods at the end of the record.
    """
    x = np.asarray(samples, dtype=float).ravel()
    if start:
        x = x[start:]
    period_samples = 2.0 * math.pi / (omega_0 * T)
    periods = int(math.floor(x.size / period_samples + 1e-9))
    if periods < 1:
        raise InsufficientDataError(
            f"record of {x.size} samples is shorter than one period",
            available=x.size,
            required=period_samples,
        )
    window = x[x.size - rnd(periods * period_samples) :]
    return {
        int(n): 2.0 * abs(goertzel(window, n * omega_0, T)) / window.size for n in harmonics
    }
