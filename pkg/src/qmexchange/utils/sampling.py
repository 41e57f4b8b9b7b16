"""
Random states and operators for property checks.

Density matrices come from the Ginibre construction ``G G† / tr(G G†)``
(Hilbert-Schmidt measure, full rank almost surely unless *rank* is given),
unitaries from the Haar measure via ``scipy.stats.unitary_group``.  Every
sampler takes a ``numpy.random.Generator`` so draws are reproducible.
"""
from typing import Optional

import numpy as np
from scipy.stats import unitary_group


def _ginibre(n: int, m: int, rng: np.random.Generator) -> np.ndarray:
    return rng.standard_normal((n, m)) + 1j * rng.standard_normal((n, m))


def random_density_matrix(
    n: int,
    rng: np.random.Generator,
    rank: Optional[int] = None,
) -> np.ndarray:
    """Random ``n x n`` state of the given rank (default: full)."""
    g = _ginibre(n, rank or n, rng)
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return rho / np.real(np.trace(rho))


def random_pure_state(n: int, rng: np.random.Generator) -> np.ndarray:
    """Random projector ``|psi><psi|``."""
    return random_density_matrix(n, rng, rank=1)


def random_hermitian(n: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = _ginibre(n, n, rng)
    return scale * (g + g.conj().T) / 2


def random_unitary(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-random unitary."""
    if n == 1:
        return np.exp(1j * rng.uniform(0, 2 * np.pi)) * np.ones((1, 1))
    return unitary_group.rvs(n, random_state=rng)


def random_normal_operator(n: int, rng: np.random.Generator) -> np.ndarray:
    """``V diag(z) V†`` with complex eigenvalues ``z``: normal, generally not Hermitian."""
    v = random_unitary(n, rng)
    z = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return v @ np.diag(z) @ v.conj().T


def random_correlated_state(
    n_r: int,
    n_s: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Generic composite state; not a product ``rho_R ⊗ rho_S``."""
    return random_density_matrix(n_r * n_s, rng)


def perturbation_direction(
    n: int,
    rng: np.random.Generator,
    constraint: Optional[np.ndarray] = None,
) -> np.ndarray:
    """Random traceless Hermitian direction of unit Frobenius norm.

    With *constraint* ``C`` (Hermitian) the direction also satisfies
    ``tr(delta C) = 0``; the projection is done against the traceless part
    of ``C``.
    """
    delta = random_hermitian(n, rng)
    delta -= np.trace(delta) / n * np.eye(n)
    if constraint is not None:
        c = constraint - np.trace(constraint) / n * np.eye(n)
        norm2 = np.real(np.trace(c @ c))
        if norm2 > 0:
            delta -= np.real(np.trace(delta @ c)) / norm2 * c
    return delta / np.linalg.norm(delta)
