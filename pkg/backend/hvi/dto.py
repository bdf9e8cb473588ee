import enum
import math
from pathlib import Path
from typing import Any, Optional

import numpy as np
from pydantic import BaseModel, Field, PositiveInt, field_validator, model_validator


class Command(enum.Enum):  # TODO: make StrEnum in python 3.11
    AA = "aa"
    Basis = "basis"
    Portrait = "portrait"
    LPT = "lpt"
    Stationary = "stationary"
    Locus = "locus"
    Boundary = "boundary"
    Jump = "jump"
    FreqResp = "freqresp"
    EnergyMap = "energy-map"
    Simulate = "simulate"
    Sweep = "sweep"


class GridRange(BaseModel):
    """
    Closed range written as `lo:hi:count`. A single number is a range with
    one point.
    """

    lo: float
    hi: float
    count: PositiveInt = 1

    @model_validator(mode="after")
    def is_ordered(self) -> "GridRange":
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise ValueError("range limits must be finite")
        if self.lo > self.hi:
            raise ValueError(f"range is not ordered: {self.lo} > {self.hi}")
        if self.count == 1 and self.lo != self.hi:
            raise ValueError("a range needs at least 2 points")
        if self.count >= 2 and self.lo == self.hi:
            raise ValueError("a range with several points needs lo < hi")
        return self

    @classmethod
    def parse(cls, text: str) -> "GridRange":
        parts = str(text).strip().split(":")
        match parts:
            case [value]:
                return cls(lo=float(value), hi=float(value), count=1)
            case [lo, hi, count]:
                return cls(lo=float(lo), hi=float(hi), count=int(count))
            case _:
                raise ValueError(f"expected 'lo:hi:count' or a number, got '{text}'")

    @property
    def is_scalar(self) -> bool:
        return self.count == 1

    def values(self) -> np.ndarray:
        if self.is_scalar:
            return np.array([self.lo])
        return np.linspace(self.lo, self.hi, self.count)

    def __str__(self) -> str:
        if self.is_scalar:
            return f"{self.lo:g}"
        return f"{self.lo:g}:{self.hi:g}:{self.count}"


class RunConfig(BaseModel):
    """
    Everything a command needs, merged from flags and the config file.
    """

    command: Command
    eps: float = Field(gt=0, default=0.1)
    output_path: Optional[Path] = None
    jobs: Optional[PositiveInt] = None

    xi_crit: Optional[float] = Field(gt=0, default=None)
    sigma: Optional[GridRange] = None
    f: Optional[GridRange] = None
    xi: Optional[GridRange] = None
    tau: Optional[GridRange] = None
    beta: Optional[float] = Field(ge=0, le=math.pi / 2, default=None)
    harmonics: Optional[PositiveInt] = None

    nu_samples: Optional[int] = Field(ge=16, default=None)
    xi_max: Optional[float] = Field(gt=0, default=None)
    xi_window: Optional[float] = Field(gt=0.5, default=None)
    verify: bool = False

    horizon: Optional[float] = Field(gt=0, default=None)
    q0: float = Field(ge=-1, le=1, default=0.0)
    p0: float = 0.0
    estimator: Optional[str] = None

    @field_validator("sigma", "f", "xi", "tau", mode="before")
    @classmethod
    def parse_range(cls, value: Any) -> Any:
        if value is None or isinstance(value, GridRange):
            return value
        if isinstance(value, (int, float)):
            return GridRange(lo=value, hi=value, count=1)
        return GridRange.parse(value)

    @field_validator("estimator")
    @classmethod
    def known_estimator(cls, value: Optional[str]) -> Optional[str]:
        if value is not None and value not in ("instantaneous", "windowed"):
            raise ValueError(f"unknown estimator '{value}'")
        return value

    def provenance(self) -> str:
        """
        `key=value` pairs of the parameters that determine the result.
        """
        skip = {"command", "output_path", "jobs"}
        parts = []
        for name, value in self:
            if name in skip or value is None:
                continue
            if isinstance(value, float):
                value = f"{value:g}"
            parts.append(f"{name}={value}")
        return " ".join(parts)
