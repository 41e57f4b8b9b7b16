"""
Trajectory containers produced by the integrators.

A ``Trajectory`` is a time-ordered stack of state snapshots together with
the per-sample functionals the CSV exporter writes (purity, linear and von
Neumann entropy) plus optional scenario-specific columns.  A
``PairTrajectory`` holds the coupled receiver/sender evolution of the swap
model with the subsystem entropies and energies.

Both are immutable; functionals are computed once, in batch, when the
container is built.
"""
from typing import Dict, Optional

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, model_validator

from qmexchange.core.matrix_ops import (
    hermitian_eigvals_batch,
    purity_batch,
    von_neumann_batch,
)
from qmexchange.errors import DimensionError

# Column order of the normative CSV format.
BASE_COLUMNS = ("t", "purity", "S_lin", "S_vn")


class Trajectory(BaseModel):
    """Time-ordered state snapshots with derived functionals."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    states: np.ndarray = Field(..., description="Stack of shape (K, d, d)")
    purity: np.ndarray
    linear_entropy: np.ndarray
    von_neumann_entropy: np.ndarray
    min_eigenvalue: np.ndarray = Field(
        ..., description="Smallest eigenvalue per sample (PSD monitor)"
    )
    extras: Dict[str, np.ndarray] = Field(default_factory=dict)

    @model_validator(mode="after")
    def _check_shapes(self) -> "Trajectory":
        k = len(self.times)
        if self.states.ndim != 3 or self.states.shape[0] != k:
            raise DimensionError(
                f"States stack {self.states.shape} does not match {k} time samples"
            )
        if k > 1 and np.any(np.diff(self.times) <= 0):
            raise ValueError("Trajectory times must be strictly increasing")
        for name, col in self.extras.items():
            if len(col) != k:
                raise DimensionError(f"Column '{name}' has {len(col)} samples, expected {k}")
        return self

    @classmethod
    def from_states(
        cls,
        times: np.ndarray,
        states: np.ndarray,
        extras: Optional[Dict[str, np.ndarray]] = None,
    ) -> "Trajectory":
        """Build a trajectory, computing all per-sample functionals in batch."""
        times = np.asarray(times, dtype=float)
        states = np.asarray(states, dtype=complex)
        eigvals = hermitian_eigvals_batch(states)
        pur = purity_batch(states)

        return cls(
            times=times,
            states=states,
            purity=pur,
            linear_entropy=1.0 - pur,
            von_neumann_entropy=von_neumann_batch(states, eigvals),
            min_eigenvalue=(
                eigvals[:, 0] if len(states) else np.empty(0)
            ),
            extras=dict(extras or {}),
        )

    def __len__(self) -> int:
        return len(self.times)

    @property
    def dim(self) -> int:
        return int(self.states.shape[-1])

    def to_frame(self) -> pd.DataFrame:
        """Tabular view: ``t, purity, S_lin, S_vn`` then the extra columns."""
        data = {
            "t": self.times,
            "purity": self.purity,
            "S_lin": self.linear_entropy,
            "S_vn": self.von_neumann_entropy,
        }
        for name, col in self.extras.items():
            data[name] = np.real(col)
        return pd.DataFrame(data, columns=list(data.keys()))


class PairTrajectory(BaseModel):
    """Coupled receiver/sender evolution of the swap-measurement model."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    times: np.ndarray
    rho_r: np.ndarray
    rho_s: np.ndarray
    entropy_r: np.ndarray
    entropy_s: np.ndarray
    energy_r: np.ndarray
    energy_s: np.ndarray

    @classmethod
    def from_states(
        cls,
        times: np.ndarray,
        rho_r: np.ndarray,
        rho_s: np.ndarray,
        h_r: np.ndarray,
        h_s: np.ndarray,
    ) -> "PairTrajectory":
        """Build the pair, recording ``S_R, S_S, E_R = tr(rho_R H_R), E_S``."""
        return cls(
            times=np.asarray(times, dtype=float),
            rho_r=rho_r,
            rho_s=rho_s,
            entropy_r=1.0 - purity_batch(rho_r),
            entropy_s=1.0 - purity_batch(rho_s),
            energy_r=np.real(np.einsum("kij,ji->k", rho_r, h_r)),
            energy_s=np.real(np.einsum("kij,ji->k", rho_s, h_s)),
        )

    def __len__(self) -> int:
        return len(self.times)

    @property
    def info_gain(self) -> np.ndarray:
        """Running ``dI(t) = S_R(0) - S_R(t)``."""
        return self.entropy_r[0] - self.entropy_r

    def to_trajectory(self) -> Trajectory:
        """Receiver-centred ``Trajectory`` with the composite CSV columns."""
        return Trajectory.from_states(
            self.times,
            self.rho_r,
            extras={
                "E_R": self.energy_r,
                "E_S": self.energy_s,
                "S_R": self.entropy_r,
                "S_S": self.entropy_s,
                "dI": self.info_gain,
            },
        )
