import enum
import math
from abc import ABC, abstractmethod
from dataclasses import dataclass, fields
from typing import Optional

# Normalized energy of the oscillator. Kept as a plain float alias so that
# numpy arrays flow through the same functions.
AveragedEnergy = float

# Energy at which the oscillation amplitude reaches the walls at |q| = 1.
XI_WALL = 0.5

# Value returned by the potential outside the walls.
WALL = math.inf


class Regime(enum.Enum):  # TODO: make StrEnum in python 3.11
    Linear = "linear"
    HVI = "hvi"


class Side(enum.Enum):
    Left = "left"
    Right = "right"


def regime(xi: AveragedEnergy) -> Regime:
    """
    Linear below the wall energy, hybrid vibro-impact from it on.
    """
    return Regime.Linear if xi < XI_WALL else Regime.HVI


class HVIException(Exception, ABC):
    @abstractmethod
    def __repr__(self) -> str:  # pragma: no cover
        ...

    def __str__(self) -> str:
        return repr(self)

    def __reduce__(self):
        # worker processes send errors back pickled, args is empty on dataclasses
        return (type(self), tuple(getattr(self, f.name) for f in fields(self)))


@dataclass(frozen=True)
class NegativeEnergyError(HVIException):
    xi: float

    def __repr__(self) -> str:
        return f"Averaged energy must be a non-negative number, got {self.xi}"


@dataclass(frozen=True)
class KinkError(HVIException):
    xi: float
    quantity: str

    def __repr__(self) -> str:
        return (
            f"{self.quantity} is not differentiable at xi={self.xi}, "
            "choose a side (left or right)"
        )


@dataclass(frozen=True)
class EnergyOutOfRangeError(HVIException):
    energy: float
    lower: float
    upper: float

    def __repr__(self) -> str:
        return (
            f"No basis parameter for E={self.energy}, "
            f"E must lie in [{self.lower}, {self.upper}]"
        )


@dataclass(frozen=True)
class MechanismNotApplicableError(HVIException):
    sigma: float
    xi_tilde: float
    value: float

    def __repr__(self) -> str:
        return (
            f"Maximum mechanism cannot reach xi={self.xi_tilde} at "
            f"sigma={self.sigma} (critical amplitude would be {self.value:.6g})"
        )


@dataclass(frozen=True)
class BranchOutOfRangeError(HVIException):
    sigma: float
    branch: str

    def __repr__(self) -> str:
        return f"sigma={self.sigma} does not lie on the {self.branch} branch"


@dataclass(frozen=True)
class BracketError(HVIException):
    what: str
    lower: float
    upper: float

    def __repr__(self) -> str:
        return f"No root of {self.what} in ({self.lower}, {self.upper}]"


@dataclass(frozen=True)
class SingularLocusError(HVIException):
    xi0: float

    def __repr__(self) -> str:
        return (
            f"Stationary locus is singular at xi0={self.xi0} "
            "(vertical asymptote)"
        )


@dataclass(frozen=True)
class LPTEscapeError(HVIException):
    xi_max: float

    def __repr__(self) -> str:
        return (
            f"Limiting phase trajectory leaves the window xi <= {self.xi_max}, "
            "enlarge xi_max"
        )


@dataclass(frozen=True)
class NonConvergenceError(HVIException):
    what: str
    expected: float
    got: float
    tolerance: float

    def __repr__(self) -> str:
        return (
            f"{self.what}: analytic value {self.expected:.6g} and numeric value "
            f"{self.got:.6g} differ by more than {self.tolerance}"
        )


@dataclass(frozen=True)
class InvalidSimConfigError(HVIException):
    field: str
    reason: str

    def __repr__(self) -> str:
        return f"Invalid simulation setting {self.field}: {self.reason}"


@dataclass(frozen=True)
class ChatterError(HVIException):
    impacts: int
    tau: float

    def __repr__(self) -> str:
        return (
            f"More than {self.impacts} impacts before tau={self.tau:.6g}, "
            "the run is chattering"
        )


@dataclass(frozen=True)
class WindowTooLongError(HVIException):
    window: float
    span: float

    def __repr__(self) -> str:
        return (
            f"Averaging window {self.window:.6g} is longer than the "
            f"trajectory span {self.span:.6g}"
        )


@dataclass(frozen=True)
class InvalidBracketError(HVIException):
    f_lo: float
    f_hi: float
    reason: str
    sigma: Optional[float] = None

    def __repr__(self) -> str:
        return (
            f"Invalid forcing bracket [{self.f_lo}, {self.f_hi}]"
            f" at sigma={self.sigma}: {self.reason}"
        )
