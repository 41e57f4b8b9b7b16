"""
Abstract interface for named experiments.

Each scenario declares which matrices it needs, checks their dimensions
before anything is integrated, and returns a ``ScenarioOutcome`` with the
trajectory to export, the derived quantities and the
closed-form-versus-numerical residuals.
"""
from abc import ABC, abstractmethod
from typing import ClassVar, Dict, Optional, Tuple

import numpy as np
from loguru import logger

from qmexchange.errors import ConfigValidationError
from qmexchange.scenarios.types import ScenarioConfig, ScenarioOutcome

# Residuals above this are reported loudly; they should not occur at the default dt.
TOL_RESIDUAL = 1e-6


class Scenario(ABC):
    """Contract every experiment in the registry satisfies."""

    name: ClassVar[str]
    summary: ClassVar[str]
    required: ClassVar[Tuple[str, ...]] = ()
    optional: ClassVar[Tuple[str, ...]] = ()

    def __init__(self, config: ScenarioConfig):
        if config.scenario != self.name:
            raise ValueError(f"{type(self).__name__} cannot run scenario '{config.scenario}'")
        self.config = config
        self._check_matrices()
        self.check_dimensions()

    def _check_matrices(self) -> None:
        present = set(self.config.matrices)
        missing = [m for m in self.required if m not in present]
        if missing:
            logger.error(f"Scenario '{self.name}' is missing matrices {missing}")
            raise ConfigValidationError(
                f"scenario '{self.name}' requires {missing}",
                field=f"matrices.{missing[0]}",
                codes=["Missing"],
            )
        extra = sorted(present - set(self.required) - set(self.optional))
        if extra:
            raise ConfigValidationError(
                f"scenario '{self.name}' does not use {extra}",
                field=f"matrices.{extra[0]}",
                codes=["Unused"],
            )

    def expect_dim(self, name: str, dim: int) -> None:
        """Fail validation unless matrix *name* (if present) is ``dim x dim``."""
        m = self.config.matrix(name)
        if m is not None and m.shape != (dim, dim):
            raise ConfigValidationError(
                f"expected a {dim}x{dim} matrix, got {m.shape[0]}x{m.shape[1]}",
                field=f"matrices.{name}",
                codes=["Dimension"],
            )

    def check_dimensions(self) -> None:
        """Scenario-specific dimension checks; the default expects ``n x n`` everywhere."""
        for name in self.config.matrices:
            self.expect_dim(name, self.config.n)

    def matrix_or(self, name: str, default: np.ndarray) -> np.ndarray:
        m = self.config.matrix(name)
        return default if m is None else m

    @staticmethod
    def flag_residuals(residuals: Dict[str, float]) -> None:
        for key, value in residuals.items():
            if value > TOL_RESIDUAL:
                logger.warning(f"Residual '{key}' = {value:.3e} exceeds {TOL_RESIDUAL:g}")

    @abstractmethod
    def run(self) -> ScenarioOutcome:
        """Integrate the model and evaluate the closed forms.

        Returns:
            Trajectory, quantities and residuals of the run.
        """


def eta_of(delta_i: float, delta_s: float, tol: float = 1e-12) -> Optional[float]:
    """Transfer efficiency, ``None`` when the sender cost vanishes."""
    return delta_i / delta_s if delta_s > tol else None
