import logging
import os
from abc import ABC, abstractmethod
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Any, Callable, Iterable, TypeVar

import confuse  # type: ignore

from hvi.dto import GridRange, RunConfig

logger = logging.getLogger(__name__)

T = TypeVar("T")
R = TypeVar("R")


class BaseInteractor(ABC):
    def __init__(self, settings: confuse.Configuration) -> None:
        self.settings = settings
        self.digits = settings["output"]["digits"].get(int)

        self.xtol = settings["roots"]["xtol"].as_number()
        self.scan_step = settings["roots"]["scan_step"].as_number()
        self.xi_cap = settings["roots"]["xi_cap"].as_number()

        manifold = settings["manifold"]
        self.xi_window = manifold["xi_window"].as_number()
        self.nu_samples = manifold["nu_samples"].get(int)
        self.xi_max = manifold["xi_max"].as_number()
        self.xi_step = manifold["xi_step"].as_number()
        self.saddle_tol = manifold["saddle_tol"].as_number()

        self.crosscheck_tol = settings["bifurcation"]["crosscheck_tol"].as_number()

        simulation = settings["simulation"]
        self.horizon = simulation["horizon"].as_number()
        self.dt_out = simulation["dt_out"].as_number()
        self.estimator = simulation["estimator"].as_choice(
            ["instantaneous", "windowed"]
        )
        self.max_impacts = int(simulation["max_impacts"].as_number())
        self.graze_tol = simulation["graze_tol"].as_number()
        self.resonance_tol = simulation["resonance_tol"].as_number()

        self.sweep_bracket = settings["sweep"]["bracket"].as_number()
        self.sweep_width = settings["sweep"]["width"].as_number()

    def jobs(self, dto: RunConfig) -> int:
        if dto.jobs is not None:
            return dto.jobs
        configured = self.settings["jobs"].get()
        return int(configured) if configured else (os.cpu_count() or 1)

    def map(
        self, func: Callable[[T], R], items: Iterable[T], dto: RunConfig
    ) -> list[R]:
        """
        Applies `func` to every item, in a process pool when more than one job
        is allowed. Results keep the order of `items`.
        """
        items = list(items)
        jobs = min(self.jobs(dto), len(items))
        if jobs <= 1:
            return [func(item) for item in items]

        logger.debug("distributing %d tasks to %d workers", len(items), jobs)
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(pool.map(func, items))

    @staticmethod
    def _must_get(dto: RunConfig, name: str) -> Any:
        value = getattr(dto, name)
        if value is None:
            raise MissingParameterError(dto.command.value, name)
        return value

    def _must_get_scalar(self, dto: RunConfig, name: str) -> float:
        value: GridRange = self._must_get(dto, name)
        if not value.is_scalar:
            raise InvalidRangeError(name, str(value), "a single value is required")
        return value.lo

    def _must_get_range(self, dto: RunConfig, name: str) -> GridRange:
        value: GridRange = self._must_get(dto, name)
        if value.is_scalar:
            raise InvalidRangeError(name, str(value), "lo:hi:count with count >= 2")
        return value

    @abstractmethod
    def __call__(self, dto: RunConfig) -> Any:  # pragma: no cover
        ...


class InteractorException(Exception, ABC):
    @abstractmethod
    def __repr__(self) -> str:  # pragma: no cover
        ...

    def __str__(self) -> str:
        return repr(self)


@dataclass(frozen=True)
class MissingParameterError(InteractorException):
    command: str
    parameter: str

    def __repr__(self) -> str:
        return f"Command {self.command} requires --{self.parameter.replace('_', '-')}"


@dataclass(frozen=True)
class InvalidRangeError(InteractorException):
    parameter: str
    value: str
    reason: str

    def __repr__(self) -> str:
        return (
            f"Invalid value {self.value} for --{self.parameter.replace('_', '-')}: "
            f"{self.reason}"
        )
