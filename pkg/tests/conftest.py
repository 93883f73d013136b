"""
Shared fixtures: a small QDOB configuration that plans in milliseconds and the
desk-scale configuration of the frequency-response experiment.
"""

import copy
import logging
import math

import pytest

from qdob.core.observer import QdobConfig
from qdob.experiments.schema import parse_experiment_config, starter_config


@pytest.fixture
def small_config() -> QdobConfig:
    """L = 0.5 s at T = 1 ms with rho = pi/(2L), so omega_c L = 2."""
    return QdobConfig(
        mu=1,
        stages=2,
        order_max=16,
        omega_a=50.0,
        omega_b=500.0,
        rho=math.pi / (2 * 0.5),
        period=0.5,
        mass=0.01,
        sample_time=1e-3,
    )


@pytest.fixture
def desk_config() -> QdobConfig:
    return QdobConfig(
        mu=1,
        stages=3,
        order_max=256,
        omega_a=50.0,
        omega_b=100.0,
        rho=2.0,
        period=2 * math.pi / 5,
        mass=56.13e-4,
        sample_time=1e-3,
    )


@pytest.fixture
def figure_config() -> QdobConfig:
    """omega_0 = 1 rad/s, omega_c = 2/L."""
    return QdobConfig(
        mu=1,
        stages=3,
        order_max=256,
        omega_a=10.0,
        omega_b=100.0,
        rho=0.25,
        period=2 * math.pi,
        mass=1.0,
        sample_time=1e-4,
    )


@pytest.fixture
def starter_dict():
    return copy.deepcopy(starter_config())


@pytest.fixture
def small_experiment(small_config):
    """Experiment dict around ``small_config`` with a two-harmonic disturbance."""
    data = {
        "name": "small",
        "seed": 3,
        "controller": {"kind": "qdob", "qdob": small_config.model_dump()},
        "plant": {"mass": small_config.mass, "sample_time": small_config.sample_time},
        "disturbance": {
            "kind": "fourier_periodic",
            "period": small_config.period,
            "a": [0.0, 0.02],
            "b": [0.0, 0.01],
        },
        "outer": {"kp": 4.0, "kd": 0.4, "mass_ff": 0.01, "cutoff": 200.0},
        "analysis": {
            "duration": 6.0,
            "settle_cycles": 4.0,
            "grid": {"start": 0.1, "points_per_decade": 50},
            "sweep": {"omegas": [6.0, 20.0], "duration": 8.0, "transient_cut": 4.0},
        },
    }
    return data


@pytest.fixture
def small_cfg(small_experiment):
    return parse_experiment_config(small_experiment)


@pytest.fixture(autouse=True)
def _restore_qdob_logger():
    """The CLI reconfigures the package logger; undo it after every test."""
    logger = logging.getLogger("qdob")
    handlers, level = list(logger.handlers), logger.level
    yield
    logger.handlers[:] = handlers
    logger.setLevel(level)
