"""
Information exchange between the receiver R and the sender S.

Information is counted in linear entropy.  Over the swap measurement the
receiver gains

    dI = tr(rho_R(inf)²) - tr(rho_R(0)²)
       = -3/4 tr(rho_R²) + 1/4 tr(rho_S²) + 1/2 tr(rho_R U† rho_S U)

which is a concave quadratic in ``rho_R(0)``.  Two regimes are solved in
closed form by Lagrange multipliers:

  - unconstrained (only ``tr rho_R = 1``):
        rho_R* = U† rho_S U / 3 + 2/(3N) 1,  dI* = (P_S - 1/N)/3
  - isoenergetic (additionally ``tr(rho_R H_R) = tr(rho_S H_S)``, with the
    energy reference chosen so that ``tr H_R = 0``):
        rho_R* gains ``2/3 (E_S / tr H_R²) H_R``,
        dI* = (P_S - 1/N - E_S²/tr H_R²)/3

In both regimes the sender pays ``5/3`` of what the receiver gains, so the
transfer efficiency ``eta = dI/dS`` is 3/5 regardless of the sender state.
"""
from typing import Dict, Literal, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from qmexchange.core.composite import (
    CompositeSystem,
    asymptotic_states,
    traceless_shift,
)
from qmexchange.core.matrix_ops import (
    MatrixLike,
    as_array,
    purity,
    von_neumann_entropy,
)
from qmexchange.data.matrix_literal import to_matrix_literal
from qmexchange.data.schemas import TOL_PSD, DensityMatrix, ReducedPair
from qmexchange.errors import (
    DimensionError,
    EnergyReferenceError,
    InfeasibleRegimeError,
    PropertyViolated,
    Violation,
)

Regime = Literal["unconstrained", "isoenergetic"]

# Agreement demanded between the closed forms and their definitions.
TOL_IDENTITY = 1e-12
# |tr H_R| accepted as a zero energy reference.
TOL_REFERENCE = 1e-10
# Sender increments below this leave eta undefined.
TOL_DEGENERATE = 1e-12


def _sender(sys: CompositeSystem, rho_s0: MatrixLike) -> np.ndarray:
    m = as_array(DensityMatrix(matrix=as_array(rho_s0)))
    if m.shape[0] != sys.n:
        raise DimensionError(f"Sender state has dim {m.shape[0]}, system has n={sys.n}")
    return m


def _pulled_back(sys: CompositeSystem, rho_s: np.ndarray) -> np.ndarray:
    u = sys.u.matrix
    return u.conj().T @ rho_s @ u


def _cross_check(tag: str, closed: float, reference: float) -> None:
    residual = abs(closed - reference)
    if residual > TOL_IDENTITY:
        logger.error(f"{tag}: closed form {closed:.15g} vs definition {reference:.15g}")
        raise PropertyViolated(tag, residual)


# ---------------------------------------------------------------------------
# General functionals
# ---------------------------------------------------------------------------

def info_gain(sys: CompositeSystem, pair0: ReducedPair) -> float:
    """Receiver information gain ``tr(rho_R(inf)²) - tr(rho_R(0)²)``.

    Evaluated from the initial states and verified against the asymptotic
    pair.

    Raises:
        DimensionError: If the pair does not match the system.
        PropertyViolated: If the two evaluations disagree beyond 1e-12.
    """
    if pair0.dim != sys.n:
        raise DimensionError(f"Pair has dim {pair0.dim}, system has n={sys.n}")
    rho_r, rho_s = pair0.rho_r.matrix, pair0.rho_s.matrix
    overlap = float(np.real(np.trace(rho_r @ _pulled_back(sys, rho_s))))
    gain = -0.75 * purity(rho_r) + 0.25 * purity(rho_s) + 0.5 * overlap

    limit = asymptotic_states(sys, pair0)
    _cross_check("info_gain", gain, purity(limit.rho_r) - purity(rho_r))
    return gain


def sender_entropy_change(sys: CompositeSystem, pair0: ReducedPair) -> float:
    """Sender linear-entropy increment ``tr(rho_S(0)²) - tr(rho_S(inf)²)`` for any pair."""
    if pair0.dim != sys.n:
        raise DimensionError(f"Pair has dim {pair0.dim}, system has n={sys.n}")
    rho_r, rho_s = pair0.rho_r.matrix, pair0.rho_s.matrix
    u = sys.u.matrix
    overlap = float(np.real(np.trace(rho_s @ u @ rho_r @ u.conj().T)))
    return 0.75 * purity(rho_s) - 0.25 * purity(rho_r) - 0.5 * overlap


def energy_flow(
    e_r0: float,
    e_s0: float,
    t: float,
    rate: float = 1.0,
) -> Tuple[float, float]:
    """Subsystem energies at time *t*; both relax to the mean as ``exp(-2 rate t)``.

    Raises:
        ValueError: If ``t < 0``.
    """
    if t < 0:
        raise ValueError(f"t must be non-negative, got {t}")
    mean = 0.5 * (e_r0 + e_s0)
    decay = np.exp(-2.0 * rate * t)
    return mean + (e_r0 - mean) * decay, mean + (e_s0 - mean) * decay


# ---------------------------------------------------------------------------
# Unconstrained regime
# ---------------------------------------------------------------------------

def optimal_receiver_state(sys: CompositeSystem, rho_s0: MatrixLike) -> DensityMatrix:
    """Receiver state maximising the information gain for a fixed sender."""
    rho_s = _sender(sys, rho_s0)
    opt = _pulled_back(sys, rho_s) / 3 + (2.0 / (3 * sys.n)) * np.eye(sys.n)
    return DensityMatrix(matrix=(opt + opt.conj().T) / 2)


def max_info(sys: CompositeSystem, rho_s0: MatrixLike) -> float:
    """Largest information gain available from *rho_s0*: ``(P_S - 1/N)/3``."""
    rho_s = _sender(sys, rho_s0)
    return (purity(rho_s) - 1.0 / sys.n) / 3


def sender_entropy_increment(sys: CompositeSystem, rho_s0: MatrixLike) -> float:
    """Sender cost of the optimal exchange: ``5/9 (P_S - 1/N)``.

    Raises:
        PropertyViolated: If the closed form disagrees with the direct
            evaluation at the optimal receiver state.
    """
    rho_s = _sender(sys, rho_s0)
    closed = 5.0 * (purity(rho_s) - 1.0 / sys.n) / 9
    pair = ReducedPair(
        rho_r=optimal_receiver_state(sys, rho_s),
        rho_s=DensityMatrix(matrix=rho_s),
    )
    _cross_check("sender_entropy_increment", closed, sender_entropy_change(sys, pair))
    return closed


# ---------------------------------------------------------------------------
# Isoenergetic regime
# ---------------------------------------------------------------------------

def _energy_terms(sys: CompositeSystem, rho_s: np.ndarray) -> Tuple[float, float]:
    """Sender energy ``E_S`` and ``E_S²/tr(H_R²)`` (zero when ``H_R = 0``)."""
    trace_h = float(np.real(np.trace(sys.h_r.matrix)))
    if abs(trace_h) > TOL_REFERENCE:
        logger.error(f"Isoenergetic regime needs tr(H_R) = 0, got {trace_h:.3e}")
        raise EnergyReferenceError(
            f"tr(H_R) = {trace_h:.6g}; shift the energy reference first "
            f"(see traceless_shift)"
        )
    e_s = float(np.real(np.trace(rho_s @ sys.h_s.matrix)))
    h2 = float(np.real(np.trace(sys.h_r.matrix @ sys.h_r.matrix)))
    return e_s, (e_s * e_s / h2 if h2 > 0 else 0.0)


def isoenergetic_optimal_state(sys: CompositeSystem, rho_s0: MatrixLike) -> DensityMatrix:
    """Optimal receiver state when no energy may flow between the parts.

    Raises:
        EnergyReferenceError: If ``tr(H_R) != 0``.
        InfeasibleRegimeError: If the stationary point is not a valid state
            (the energy term pushes an eigenvalue below ``-TOL_PSD``).
        PropertyViolated: If a constraint is missed by more than 1e-12.
    """
    rho_s = _sender(sys, rho_s0)
    e_s, _ = _energy_terms(sys, rho_s)
    h_r = sys.h_r.matrix
    h2 = float(np.real(np.trace(h_r @ h_r)))

    opt = _pulled_back(sys, rho_s) / 3 + (2.0 / (3 * sys.n)) * np.eye(sys.n)
    if h2 > 0:
        opt = opt + (2.0 / 3) * (e_s / h2) * h_r
    opt = (opt + opt.conj().T) / 2

    lowest = float(np.linalg.eigvalsh(opt)[0])
    if lowest < -TOL_PSD:
        logger.error(
            f"Isoenergetic optimum leaves the state space (eigenvalue {lowest:.3e}); "
            f"sender energy {e_s:.6g} too large for this regime"
        )
        raise InfeasibleRegimeError(
            [Violation(code="NotPositive", magnitude=lowest)],
            what="isoenergetic optimal state",
        )

    _cross_check("isoenergetic_trace", float(np.real(np.trace(opt))), 1.0)
    _cross_check("isoenergetic_energy", float(np.real(np.trace(opt @ h_r))), e_s)
    return DensityMatrix(matrix=opt)


def isoenergetic_max_info(sys: CompositeSystem, rho_s0: MatrixLike) -> float:
    """``(P_S - 1/N - E_S²/tr H_R²)/3``; needs ``tr H_R = 0``."""
    rho_s = _sender(sys, rho_s0)
    _, energy_term = _energy_terms(sys, rho_s)
    return (purity(rho_s) - 1.0 / sys.n - energy_term) / 3


def isoenergetic_entropy_increment(sys: CompositeSystem, rho_s0: MatrixLike) -> float:
    """``5/9 (P_S - 1/N - E_S²/tr H_R²)``; needs ``tr H_R = 0``."""
    rho_s = _sender(sys, rho_s0)
    _, energy_term = _energy_terms(sys, rho_s)
    return 5.0 * (purity(rho_s) - 1.0 / sys.n - energy_term) / 9


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

class ExchangeReport(BaseModel):
    """Optimal exchange for one sender state in one regime."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    regime: Regime
    n: int = Field(..., ge=1)
    delta_i: float = Field(..., description="Receiver information gain (linear entropy)")
    delta_s: float = Field(..., description="Sender entropy increment (linear entropy)")
    eta: Optional[float] = Field(
        None, description="delta_i / delta_s; None when delta_s vanishes"
    )
    optimal_rho_r0: DensityMatrix
    purity_s0: float
    energy_s0: float = Field(..., description="tr(rho_S H_S) in the report's energy reference")
    energy_shift: float = Field(
        0.0, description="tr(H_R)/N removed from both Hamiltonians"
    )
    delta_i_vn: float = Field(..., description="Receiver von Neumann entropy decrease")
    delta_s_vn: float = Field(..., description="Sender von Neumann entropy increase")

    def to_document(self) -> Dict[str, object]:
        """Flat key/value form; ``eta`` is omitted when undefined."""
        doc: Dict[str, object] = {
            "regime": self.regime,
            "N": self.n,
            "delta_i": self.delta_i,
            "delta_s": self.delta_s,
        }
        if self.eta is not None:
            doc["eta"] = self.eta
        doc.update(
            {
                "purity_s0": self.purity_s0,
                "energy_s0": self.energy_s0,
                "energy_shift": self.energy_shift,
                "delta_i_vn": self.delta_i_vn,
                "delta_s_vn": self.delta_s_vn,
                "optimal_rho_r0": to_matrix_literal(self.optimal_rho_r0.matrix),
            }
        )
        return doc


def exchange_report(
    sys: CompositeSystem,
    rho_s0: MatrixLike,
    regime: Regime = "unconstrained",
) -> ExchangeReport:
    """Optimal receiver state, gain, cost and efficiency for *regime*.

    The isoenergetic regime first moves the energy reference so that
    ``tr(H_R) = 0``; the removed shift is recorded in the report.
    """
    rho_s = _sender(sys, rho_s0)
    shift = 0.0

    if regime == "unconstrained":
        rho_opt = optimal_receiver_state(sys, rho_s)
        delta_i = max_info(sys, rho_s)
        delta_s = sender_entropy_increment(sys, rho_s)
    elif regime == "isoenergetic":
        sys, shift = traceless_shift(sys)
        rho_opt = isoenergetic_optimal_state(sys, rho_s)
        delta_i = isoenergetic_max_info(sys, rho_s)
        delta_s = isoenergetic_entropy_increment(sys, rho_s)
    else:
        raise ValueError(f"Unknown regime: {regime}")

    pair = ReducedPair(rho_r=rho_opt, rho_s=DensityMatrix(matrix=rho_s))
    _cross_check("delta_i", delta_i, info_gain(sys, pair))
    _cross_check("delta_s", delta_s, sender_entropy_change(sys, pair))

    eta: Optional[float] = None
    if delta_s > TOL_DEGENERATE:
        eta = delta_i / delta_s
    else:
        logger.warning(f"Sender entropy increment {delta_s:.3e} ~ 0; eta undefined")

    limit = asymptotic_states(sys, pair)
    report = ExchangeReport(
        regime=regime,
        n=sys.n,
        delta_i=delta_i,
        delta_s=delta_s,
        eta=eta,
        optimal_rho_r0=rho_opt,
        purity_s0=purity(rho_s),
        energy_s0=float(np.real(np.trace(rho_s @ sys.h_s.matrix))),
        energy_shift=shift,
        delta_i_vn=von_neumann_entropy(rho_opt) - von_neumann_entropy(limit.rho_r),
        delta_s_vn=von_neumann_entropy(limit.rho_s) - von_neumann_entropy(rho_s),
    )
    logger.info(
        f"Exchange [{regime}] N={sys.n}: dI={delta_i:.6g} dS={delta_s:.6g} "
        f"eta={'n/a' if eta is None else f'{eta:.6g}'}"
    )
    return report
