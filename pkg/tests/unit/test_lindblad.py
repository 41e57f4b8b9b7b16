"""
test_lindblad.py
Master-equation right-hand sides, the entropy-rate identity and the CBS bound.
"""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qmexchange.core.lindblad import (
    LindbladGenerator,
    MeasurementGenerator,
    attractor_generator,
    attractor_jump,
    cbs_check,
    entropy_rate,
    ground_state,
    lindblad_rhs,
    measurement_rhs,
)
from qmexchange.data.schemas import HermitianObservable
from qmexchange.errors import DimensionError, NotCommuting
from qmexchange.utils.sampling import (
    random_density_matrix,
    random_hermitian,
    random_normal_operator,
)


def _measurement(o: np.ndarray, rate: float = 1.0) -> MeasurementGenerator:
    return MeasurementGenerator(observable=HermitianObservable(matrix=o), rate=rate)


def test_measurement_rhs_of_sigma_z_on_plus_state(pauli):
    plus = np.full((2, 2), 0.5)
    out = measurement_rhs(_measurement(pauli["z"]), plus)
    assert np.allclose(out, [[0, -1], [-1, 0]])


def test_measurement_rhs_vanishes_on_eigenstates(pauli):
    ket0 = np.diag([1.0, 0.0])
    assert np.allclose(measurement_rhs(_measurement(pauli["z"]), ket0), 0)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_measurement_keeps_populations_in_observable_basis(seed, n):
    rng = np.random.default_rng(seed)
    o = random_hermitian(n, rng)
    _, vecs = np.linalg.eigh(o)
    out = measurement_rhs(_measurement(o), random_density_matrix(n, rng))
    assert np.allclose(np.diag(vecs.conj().T @ out @ vecs), 0, atol=1e-12)


def test_unitary_part_only(pauli):
    gen = LindbladGenerator(
        hamiltonian=HermitianObservable(matrix=pauli["z"]), jump=np.zeros((2, 2)), rate=1.0
    )
    plus = np.full((2, 2), 0.5)
    assert np.allclose(lindblad_rhs(gen, plus), -1j * (pauli["z"] @ plus - plus @ pauli["z"]))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_measurement_form_equals_lindblad_form(seed, n):
    rng = np.random.default_rng(seed)
    gen = _measurement(random_hermitian(n, rng), rate=0.7)
    rho = random_density_matrix(n, rng)
    assert np.allclose(measurement_rhs(gen, rho), lindblad_rhs(gen.as_lindblad(), rho), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 4))
def test_rhs_is_traceless_and_hermitian(seed, n):
    rng = np.random.default_rng(seed)
    gen = LindbladGenerator(
        hamiltonian=HermitianObservable(matrix=random_hermitian(n, rng)),
        jump=rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
    )
    out = lindblad_rhs(gen, random_density_matrix(n, rng))
    assert abs(np.trace(out)) < 1e-12
    assert np.allclose(out, out.conj().T, atol=1e-12)


def test_liouvillian_reproduces_rhs(rng):
    gen = attractor_generator(3, rate=0.5, hamiltonian=HermitianObservable(matrix=random_hermitian(3, rng)))
    rho = random_density_matrix(3, rng)
    vec = gen.liouvillian() @ rho.ravel()
    assert np.allclose(vec.reshape(3, 3), gen.rhs(rho))


def test_dimension_mismatches(pauli):
    with pytest.raises(DimensionError):
        LindbladGenerator(hamiltonian=HermitianObservable(matrix=pauli["z"]), jump=np.eye(3))
    with pytest.raises(DimensionError):
        measurement_rhs(_measurement(pauli["z"]), np.eye(3) / 3)


# ---------------------------------------------------------------------------
# Entropy rate
# ---------------------------------------------------------------------------

def test_entropy_rate_matches_derivative_of_purity(rng):
    n = 3
    gen = LindbladGenerator(
        hamiltonian=HermitianObservable(matrix=random_hermitian(n, rng)),
        jump=rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)),
        rate=0.8,
    )
    rho = random_density_matrix(n, rng)
    expected = -2.0 * np.real(np.trace(rho @ lindblad_rhs(gen, rho)))
    assert entropy_rate(gen, rho) == pytest.approx(expected, abs=1e-12)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5))
def test_entropy_rate_non_negative_for_normal_jumps(seed, n):
    rng = np.random.default_rng(seed)
    gen = LindbladGenerator(
        hamiltonian=HermitianObservable(matrix=random_hermitian(n, rng)),
        jump=random_normal_operator(n, rng),
    )
    assert entropy_rate(gen, random_density_matrix(n, rng)) >= -1e-12


def test_attractor_can_lower_entropy():
    gen = attractor_generator(2)
    assert entropy_rate(gen, np.diag([0.7, 0.3])) < 0
    assert entropy_rate(gen, np.diag([0.3, 0.7])) > 0
    assert np.allclose(gen.rhs(ground_state(2)), 0)


def test_attractor_jump_is_lowering():
    r = attractor_jump(3)
    assert np.allclose(r @ np.array([0, 1, 0]), [1, 0, 0])
    assert np.allclose(r @ np.array([1, 0, 0]), 0)
    with pytest.raises(ValueError):
        attractor_jump(0)


# ---------------------------------------------------------------------------
# Cauchy-Bunyakovsky-Schwarz
# ---------------------------------------------------------------------------

def test_cbs_equality_for_identity_jump(rng):
    rho = random_density_matrix(3, rng)
    report = cbs_check(np.eye(3), rho)
    assert report.holds
    assert report.lhs == pytest.approx(report.rhs)


@settings(max_examples=50, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(2, 5))
def test_cbs_holds_for_normal_jumps(seed, n):
    rng = np.random.default_rng(seed)
    report = cbs_check(random_normal_operator(n, rng), random_density_matrix(n, rng))
    assert report.holds


def test_cbs_rejects_non_normal_jump():
    with pytest.raises(NotCommuting):
        cbs_check(attractor_jump(2), np.eye(2) / 2)
