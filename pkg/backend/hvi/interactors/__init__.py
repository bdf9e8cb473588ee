from .analysis import (
    ActionAngle,
    Basis,
    LimitingPhaseTrajectory,
    Portrait,
    StationaryLocus,
    StationaryPoints,
)
from .base import (
    BaseInteractor,
    InteractorException,
    InvalidRangeError,
    MissingParameterError,
)
from .boundary import EnergyJump, EnergyMap, FrequencyResponse, TransitionBoundary
from .simulation import Simulate, Sweep, SweepTask
