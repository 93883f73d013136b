"""Plant, disturbance, outer-loop and closed-loop simulation components."""

from .disturbances import DisturbanceGenerator, DisturbanceProfile, gen_disturbance
from .outer import OuterPdController, outer_pd_step
from .plant import ModelingError, PlantDoubleIntegrator
from .simulator import SimTrace, run_closed_loop

__all__ = [
    "DisturbanceGenerator",
    "DisturbanceProfile",
    "ModelingError",
    "OuterPdController",
    "PlantDoubleIntegrator",
    "SimTrace",
    "gen_disturbance",
    "outer_pd_step",
    "run_closed_loop",
]
