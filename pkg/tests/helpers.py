"""Shared random-object generators for the test suite (all seeded)."""

import numpy as np

from qiw import DensityMatrix, PureState, partial_transpose


def random_matrix(rng, n: int) -> np.ndarray:
    return rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))


def random_hermitian(rng, n: int) -> np.ndarray:
    g = random_matrix(rng, n)
    return (g + g.conj().T) / 2


def random_pure(rng, n: int) -> PureState:
    v = rng.standard_normal(n) + 1j * rng.standard_normal(n)
    return PureState(v / np.linalg.norm(v))


def random_density(rng, dim_a: int, dim_b: int = 1) -> DensityMatrix:
    n = dim_a * dim_b
    g = random_matrix(rng, n)
    m = g @ g.conj().T
    return DensityMatrix(m / np.trace(m).real, dim_a, dim_b)


def min_pt_eigenvalue(rho: DensityMatrix) -> float:
    pt = partial_transpose(rho.matrix, rho.dim_a, rho.dim_b, subsystem="B")
    return float(np.linalg.eigvalsh(pt)[0])
