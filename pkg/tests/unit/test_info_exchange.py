"""
test_info_exchange.py
Information gain, sender cost, optimal receiver states and the efficiency
of the exchange in both regimes.
"""
import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qmexchange.core.composite import CompositeSystem, evolve_reduced
from qmexchange.core.info_exchange import (
    energy_flow,
    exchange_report,
    info_gain,
    isoenergetic_entropy_increment,
    isoenergetic_max_info,
    isoenergetic_optimal_state,
    max_info,
    optimal_receiver_state,
    sender_entropy_change,
    sender_entropy_increment,
)
from qmexchange.core.matrix_ops import purity
from qmexchange.data.schemas import DensityMatrix, ReducedPair
from qmexchange.errors import EnergyReferenceError, InfeasibleRegimeError
from qmexchange.utils.sampling import (
    perturbation_direction,
    random_density_matrix,
    random_hermitian,
    random_pure_state,
    random_unitary,
)

KET0 = np.diag([1.0, 0.0]).astype(complex)
PLUS = np.full((2, 2), 0.5, dtype=complex)
SIGMA_Z = np.diag([1.0, -1.0]).astype(complex)


def _pair(rho_r: np.ndarray, rho_s: np.ndarray) -> ReducedPair:
    return ReducedPair(rho_r=DensityMatrix(matrix=rho_r), rho_s=DensityMatrix(matrix=rho_s))


def _qubit_system(delta: float = 1.0) -> CompositeSystem:
    return CompositeSystem.from_hamiltonian(delta * SIGMA_Z, np.eye(2))


def _random_system(n: int, rng: np.random.Generator, scale: float = 1.0) -> CompositeSystem:
    h = random_hermitian(n, rng, scale)
    h -= np.trace(h) / n * np.eye(n)
    return CompositeSystem.from_hamiltonian(h, random_unitary(n, rng))


# ---------------------------------------------------------------------------
# General functionals
# ---------------------------------------------------------------------------

def test_info_gain_example():
    assert info_gain(_qubit_system(), _pair(np.eye(2) / 2, KET0)) == pytest.approx(1 / 8)


def test_info_gain_vanishes_at_fixed_point(rng):
    sys = _random_system(3, rng)
    rho_s = random_density_matrix(3, rng)
    u = sys.u.matrix
    assert info_gain(sys, _pair(u.conj().T @ rho_s @ u, rho_s)) == pytest.approx(0.0, abs=1e-14)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_closed_forms_match_long_runs(seed, n):
    rng = np.random.default_rng(seed)
    sys = _random_system(n, rng)
    pair = _pair(random_density_matrix(n, rng), random_density_matrix(n, rng))
    traj = evolve_reduced(sys, pair, 25.0, 1e-3, record_every=5000)

    assert info_gain(sys, pair) == pytest.approx(float(traj.info_gain[-1]), abs=1e-6)
    cost = float(traj.entropy_s[-1] - traj.entropy_s[0])
    assert sender_entropy_change(sys, pair) == pytest.approx(cost, abs=1e-6)


def test_energy_flow():
    e_r, e_s = energy_flow(1.0, -1.0, 0.0)
    assert (e_r, e_s) == (1.0, -1.0)
    e_r, e_s = energy_flow(1.0, -1.0, 0.5)
    assert e_r == pytest.approx(np.exp(-1.0))
    assert e_s == pytest.approx(-np.exp(-1.0))
    assert energy_flow(0.3, 0.3, 7.0) == pytest.approx((0.3, 0.3))
    with pytest.raises(ValueError):
        energy_flow(1.0, 0.0, -1.0)


# ---------------------------------------------------------------------------
# Unconstrained regime
# ---------------------------------------------------------------------------

def test_optimal_receiver_examples():
    sys = _qubit_system()
    assert np.allclose(optimal_receiver_state(sys, np.eye(2) / 2).matrix, np.eye(2) / 2)
    assert np.allclose(optimal_receiver_state(sys, KET0).matrix, np.diag([2 / 3, 1 / 3]))


def test_pure_qubit_sender():
    sys = _qubit_system()
    assert max_info(sys, KET0) == pytest.approx(1 / 6)
    assert sender_entropy_increment(sys, KET0) == pytest.approx(5 / 18)
    assert max_info(sys, np.eye(2) / 2) == pytest.approx(0.0, abs=1e-15)
    assert max_info(sys, np.diag([0.75, 0.25])) == pytest.approx(1 / 24)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_pure_sender_saturates_global_bound(n, rng):
    sys = _random_system(n, rng)
    assert max_info(sys, random_pure_state(n, rng)) == pytest.approx((1 - 1 / n) / 3, abs=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4])
@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_efficiency_is_three_fifths(n, seed):
    rng = np.random.default_rng(seed)
    sys = _random_system(n, rng)
    rho_s = random_density_matrix(n, rng)
    assume(purity(rho_s) - 1 / n > 1e-6)

    report = exchange_report(sys, rho_s)
    assert report.eta == pytest.approx(0.6, abs=1e-9)
    assert report.delta_s - report.delta_i >= -1e-9
    assert report.delta_i <= (1 - 1 / n) / 3 + 1e-12


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_optimum_is_a_local_maximum(seed, n):
    rng = np.random.default_rng(seed)
    sys = _random_system(n, rng)
    rho_s = random_density_matrix(n, rng)
    best = optimal_receiver_state(sys, rho_s).matrix
    peak = info_gain(sys, _pair(best, rho_s))

    for _ in range(200):
        delta = perturbation_direction(n, rng)
        assert info_gain(sys, _pair(best + 1e-3 * delta, rho_s)) <= peak + 1e-9


# ---------------------------------------------------------------------------
# Isoenergetic regime
# ---------------------------------------------------------------------------

def test_plus_state_qubit_sender():
    sys = _qubit_system()
    assert isoenergetic_max_info(sys, PLUS) == pytest.approx(1 / 6)
    assert isoenergetic_entropy_increment(sys, PLUS) == pytest.approx(5 / 18)


@settings(max_examples=100, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), delta=st.floats(0.1, 5.0))
def test_qubit_gain_is_two_thirds_of_coherence(seed, delta):
    rng = np.random.default_rng(seed)
    rho_s = random_density_matrix(2, rng)
    sys = _qubit_system(delta)
    expected = 2 / 3 * abs(rho_s[0, 1]) ** 2
    assert isoenergetic_max_info(sys, rho_s) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_qubit_isoenergetic_optimum_keeps_populations(seed):
    rng = np.random.default_rng(seed)
    rho_s = random_density_matrix(2, rng)
    opt = isoenergetic_optimal_state(_qubit_system(), rho_s).matrix
    assert np.allclose(np.diag(opt), np.diag(rho_s))
    assert opt[0, 1] == pytest.approx(rho_s[0, 1] / 3)


@pytest.mark.parametrize("n", [2, 3, 4])
@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_isoenergetic_efficiency_is_three_fifths(n, seed):
    rng = np.random.default_rng(seed)
    sys = _random_system(n, rng)
    rho_s = random_density_matrix(n, rng)
    gain = isoenergetic_max_info(sys, rho_s)
    cost = isoenergetic_entropy_increment(sys, rho_s)
    assume(cost > 1e-6)
    assert gain / cost == pytest.approx(0.6, abs=1e-9)
    assert cost - gain >= -1e-9


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 3))
def test_isoenergetic_optimum_is_a_constrained_maximum(seed, n):
    rng = np.random.default_rng(seed)
    sys = _random_system(n, rng, scale=0.3)
    rho_s = random_density_matrix(n, rng)
    try:
        best = isoenergetic_optimal_state(sys, rho_s).matrix
    except InfeasibleRegimeError:
        assume(False)
    assume(np.linalg.eigvalsh(best)[0] > 1e-2)

    h_r = sys.h_r.matrix
    assert np.real(np.trace(best @ h_r)) == pytest.approx(np.real(np.trace(rho_s @ sys.h_s.matrix)))
    peak = info_gain(sys, _pair(best, rho_s))
    for _ in range(200):
        delta = perturbation_direction(n, rng, constraint=h_r)
        assert abs(np.trace(delta @ h_r)) < 1e-12
        assert info_gain(sys, _pair(best + 1e-3 * delta, rho_s)) <= peak + 1e-9


def test_isoenergetic_needs_traceless_reference():
    sys = CompositeSystem.from_hamiltonian(SIGMA_Z + np.eye(2), np.eye(2))
    with pytest.raises(EnergyReferenceError):
        isoenergetic_max_info(sys, KET0)


def test_isoenergetic_infeasible_sender():
    sys = CompositeSystem.from_hamiltonian(np.diag([1.0, -1.0, 0.0]), np.eye(3))
    ket0 = np.diag([1.0, 0.0, 0.0]).astype(complex)
    with pytest.raises(InfeasibleRegimeError) as exc:
        isoenergetic_optimal_state(sys, ket0)
    assert exc.value.codes == ["NotPositive"]
    assert exc.value.exit_code == 4
    with pytest.raises(InfeasibleRegimeError):
        exchange_report(sys, ket0, regime="isoenergetic")


def test_zero_hamiltonian_drops_energy_term():
    sys = CompositeSystem.from_hamiltonian(np.zeros((2, 2)), np.eye(2))
    assert isoenergetic_max_info(sys, KET0) == pytest.approx(max_info(sys, KET0))


# ---------------------------------------------------------------------------
# Report
# ---------------------------------------------------------------------------

def test_unconstrained_report():
    report = exchange_report(_qubit_system(0.5), KET0)
    assert report.delta_i == pytest.approx(1 / 6)
    assert report.delta_s == pytest.approx(5 / 18)
    assert report.eta == pytest.approx(0.6)
    assert report.delta_i_vn > 0
    doc = report.to_document()
    assert list(doc)[:5] == ["regime", "N", "delta_i", "delta_s", "eta"]
    assert doc["optimal_rho_r0"][0][0] == pytest.approx([2 / 3, 0.0])


def test_isoenergetic_report_without_coherence_has_no_efficiency():
    report = exchange_report(_qubit_system(), KET0, regime="isoenergetic")
    assert report.delta_i == pytest.approx(0.0, abs=1e-12)
    assert report.delta_s == pytest.approx(0.0, abs=1e-12)
    assert report.eta is None
    assert "eta" not in report.to_document()


def test_isoenergetic_report_records_shift():
    sys = CompositeSystem.from_hamiltonian(SIGMA_Z + 2 * np.eye(2), np.eye(2))
    report = exchange_report(sys, PLUS, regime="isoenergetic")
    assert report.energy_shift == pytest.approx(2.0)
    assert report.energy_s0 == pytest.approx(0.0, abs=1e-12)
    assert report.delta_i == pytest.approx(1 / 6)


def test_unknown_regime():
    with pytest.raises(ValueError):
        exchange_report(_qubit_system(), KET0, regime="adiabatic")
