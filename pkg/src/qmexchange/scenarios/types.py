"""
Data contracts for scenario runs.

``ScenarioConfig`` is the validated form of a scenario file: every matrix
is decoded from its literal and checked against the invariants of its role
(states must be density matrices, Hamiltonians Hermitian, ``u`` unitary)
before anything runs.  ``RunReport`` is what a run leaves behind besides
the trajectory table; it contains no timestamps or paths so that equal
configs give byte-identical reports.
"""
from typing import Any, Dict, Literal, Optional, Type

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from qmexchange.data.matrix_literal import parse_matrix_literal, to_matrix_literal
from qmexchange.data.schemas import (
    DensityMatrix,
    HermitianObservable,
    MatrixModel,
    UnitaryMap,
)
from qmexchange.data.trajectory import Trajectory
from qmexchange.errors import (
    ConfigValidationError,
    DimensionError,
    InvalidStateError,
)

ScenarioName = Literal[
    "attractor",
    "swap-exchange",
    "optimal",
    "isoenergetic",
    "additive",
    "multiplicative",
    "neutron-spin",
]

# Role of every matrix name a scenario file may carry.
MATRIX_ROLES: Dict[str, Type[MatrixModel]] = {
    "h": HermitianObservable,
    "h_r": HermitianObservable,
    "h_s": HermitianObservable,
    "a_r": HermitianObservable,
    "b_s": HermitianObservable,
    "u": UnitaryMap,
    "rho0": DensityMatrix,
    "rho_r0": DensityMatrix,
    "rho_s0": DensityMatrix,
}


class OutputPaths(BaseModel):
    """File names written inside the run's output directory."""

    trajectory: str = Field("trajectory.csv", description="Trajectory CSV file name")
    report: str = Field("report.json", description="Run report JSON file name")


class ScenarioConfig(BaseModel):
    """One experiment: model, initial data, horizon and outputs."""

    model_config = ConfigDict(frozen=True, extra="forbid", allow_inf_nan=False)

    scenario: ScenarioName
    n: int = Field(2, ge=1, description="Dimension of each part (or of the system)")
    t_final: float = Field(20.0, gt=0, description="Horizon in units of 1/gamma")
    dt: float = Field(1e-3, gt=0, description="Fixed RK4 step")
    gamma: float = Field(1.0, ge=0, description="Measurement / coupling rate")
    record_every: int = Field(1, ge=1, description="Keep every k-th snapshot")
    matrices: Dict[str, MatrixModel] = Field(
        default_factory=dict,
        description="Named operators and states (matrix literals in files)",
    )
    outputs: OutputPaths = Field(default_factory=OutputPaths)
    out_dir: Optional[str] = Field(
        None, description="Output directory; defaults to outcomes/<scenario>"
    )

    @field_validator("matrices", mode="before")
    @classmethod
    def decode_matrices(cls, raw: Any) -> Dict[str, MatrixModel]:
        """Decode literals and validate each matrix against its role."""
        if raw is None:
            return {}
        if not isinstance(raw, dict):
            raise ValueError("matrices must be a mapping of name -> matrix literal")

        decoded: Dict[str, MatrixModel] = {}
        for name, value in raw.items():
            field = f"matrices.{name}"
            role = MATRIX_ROLES.get(name)
            if role is None:
                raise ConfigValidationError(
                    f"unknown matrix '{name}' (allowed: {sorted(MATRIX_ROLES)})",
                    field=field,
                    codes=["UnknownMatrix"],
                )
            if isinstance(value, MatrixModel):
                value = value.matrix
            elif not isinstance(value, np.ndarray):
                value = parse_matrix_literal(value, field=field)
            try:
                decoded[name] = role(matrix=value)
            except InvalidStateError as e:
                raise ConfigValidationError(str(e), field=field, codes=e.codes) from e
            except DimensionError as e:
                raise ConfigValidationError(str(e), field=field, codes=["Dimension"]) from e
        return decoded

    @model_validator(mode="after")
    def step_within_horizon(self) -> "ScenarioConfig":
        if self.dt > self.t_final:
            raise ValueError(f"dt ({self.dt}) must not exceed t_final ({self.t_final})")
        return self

    @property
    def output_dir(self) -> str:
        return self.out_dir or f"outcomes/{self.scenario}"

    def matrix(self, name: str) -> Optional[np.ndarray]:
        """Raw array of matrix *name*, or ``None`` when absent."""
        model = self.matrices.get(name)
        return None if model is None else model.matrix

    def echo(self) -> Dict[str, Any]:
        """Config as written to reports: output locations left out."""
        return {
            "scenario": self.scenario,
            "n": self.n,
            "t_final": self.t_final,
            "dt": self.dt,
            "gamma": self.gamma,
            "record_every": self.record_every,
            "matrices": {
                name: to_matrix_literal(m.matrix) for name, m in sorted(self.matrices.items())
            },
        }


class ScenarioOutcome(BaseModel):
    """In-memory result of ``Scenario.run``."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    trajectory: Trajectory
    quantities: Dict[str, Optional[float]] = Field(default_factory=dict)
    residuals: Dict[str, float] = Field(
        default_factory=dict,
        description="|closed form - numerical| for every quantity with a closed form",
    )
    details: Dict[str, Any] = Field(default_factory=dict)


class RunReport(BaseModel):
    """Deterministic summary of one scenario run."""

    scenario: ScenarioName
    config: Dict[str, Any] = Field(..., description="Echo of the validated config")
    quantities: Dict[str, Optional[float]]
    residuals: Dict[str, float]
    details: Dict[str, Any] = Field(default_factory=dict)
    status: Literal["ok"] = "ok"
    exit_code: int = 0
