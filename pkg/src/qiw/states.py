"""States, operators and input ensembles for quantum-input scenarios.

Provides the standard entangled states (singlet, |Phi_d^+>), the Werner
family, the flip operator, and the symmetric informationally complete (SIC)
input ensembles used to build witnesses: the qubit tetrahedron, an analytic
qutrit fiducial, and a seeded numerical fiducial search for 4 <= d <= 8.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
from scipy.optimize import minimize

from .linalg import DEFAULT_TOL, DimensionMismatchError, is_psd, require_hermitian

NORM_TOL = 1e-10
SIC_OVERLAP_TOL = 1e-8

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

# Bloch vectors of the regular tetrahedron used for the qubit input ensemble.
TETRAHEDRON_BLOCH = np.array(
    [[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]], dtype=float
) / np.sqrt(3)


class FiducialSearchError(RuntimeError):
    """The numerical SIC fiducial search did not reach its target residual."""


def _frozen(a: np.ndarray) -> np.ndarray:
    out = np.array(a)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class PureState:
    """Normalized state vector; amplitudes are complex, norm 1 within 1e-10."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if not np.all(np.isfinite(a)):
            raise ValueError("state vector contains non-finite entries")
        norm = float(np.linalg.norm(a))
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state vector norm {norm!r} deviates from 1 by more than {NORM_TOL}")
        object.__setattr__(self, "amplitudes", _frozen(a))

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def projector(self) -> np.ndarray:
        """Rank-1 projector |psi><psi|."""
        return np.outer(self.amplitudes, self.amplitudes.conj())

    def overlap(self, other: "PureState") -> complex:
        """Inner product <self|other>."""
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True)
class DensityMatrix:
    """Unit-trace PSD Hermitian matrix on a (possibly bipartite) Hilbert space.

    ``dim_b`` is 1 for a single system; otherwise the matrix lives on the
    product basis with index i*dim_b + k.
    """

    matrix: np.ndarray
    dim_a: int
    dim_b: int = 1

    def __post_init__(self):
        n = self.dim_a * self.dim_b
        m = np.asarray(self.matrix, dtype=complex)
        if m.shape != (n, n):
            raise DimensionMismatchError(f"expected {n}x{n} matrix for dims {self.dim_a}x{self.dim_b}, got {m.shape}")
        m = require_hermitian(m, DEFAULT_TOL)
        tr = float(np.trace(m).real)
        if abs(tr - 1.0) > DEFAULT_TOL:
            raise ValueError(f"trace {tr!r} deviates from 1 by more than {DEFAULT_TOL}")
        if not is_psd(m, DEFAULT_TOL):
            raise ValueError("matrix is not positive semidefinite within tolerance")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def dim(self) -> int:
        return self.dim_a * self.dim_b


@dataclass(frozen=True)
class InputEnsemble:
    """Ordered set of pure input states with cached rank-1 projectors.

    Labels are 1-based: state s covers s = 1..n in formulas and file headers,
    while ``states[s-1]`` is the corresponding entry.
    """

    states: tuple[PureState, ...]
    projectors: tuple[np.ndarray, ...] = field(init=False, repr=False)

    def __post_init__(self):
        if not self.states:
            raise ValueError("ensemble needs at least one state")
        d = self.states[0].dim
        if any(s.dim != d for s in self.states):
            raise DimensionMismatchError("all ensemble states must share one dimension")
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "projectors", tuple(_frozen(s.projector()) for s in self.states))

    @property
    def dim(self) -> int:
        return self.states[0].dim

    @property
    def n(self) -> int:
        return len(self.states)

    @property
    def labels(self) -> range:
        return range(1, len(self.states) + 1)

    def state_matrix(self) -> np.ndarray:
        """Stack of state vectors, shape (n, dim)."""
        return np.array([s.amplitudes for s in self.states])

    def projector_stack(self) -> np.ndarray:
        """Stack of projectors, shape (n, dim, dim)."""
        return np.array(self.projectors)


class EnsembleDiagnostics(NamedTuple):
    informationally_complete: bool
    usd_possible: bool


def max_entangled(d: int) -> PureState:
    """|Phi_d^+> = sum_k |kk> / sqrt(d) on a d x d system."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    amps = np.zeros(d * d, dtype=complex)
    amps[np.arange(d) * d + np.arange(d)] = 1.0 / np.sqrt(d)
    return PureState(amps)


def singlet() -> PureState:
    """Two-qubit singlet (|01> - |10>) / sqrt(2)."""
    return PureState(np.array([0, 1, -1, 0], dtype=complex) / np.sqrt(2))


def flip_operator(d: int) -> np.ndarray:
    """Swap of the two tensor factors, F = sum_ij |ij><ji|; F^2 = 1."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    f = np.zeros((d * d, d * d), dtype=complex)
    i, j = np.divmod(np.arange(d * d), d)
    f[i * d + j, j * d + i] = 1.0
    return f


def werner_visibility_range(d: int) -> tuple[float, float]:
    """Valid visibility interval [-(d-1)/(d+1), 1]."""
    return (-(d - 1) / (d + 1), 1.0)


def werner_state(d: int, v: float) -> DensityMatrix:
    """Werner state v * (1 - F) / (d(d-1)) + (1 - v) * 1 / d^2.

    For d=2 this equals the singlet mixture v |Psi-><Psi-| + (1-v) 1/4,
    since (1 - F)/2 is exactly the singlet projector. Entangled (NPT under
    partial transposition) iff v > 1/(d+1).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    lo, hi = werner_visibility_range(d)
    if not (lo - 1e-12 <= v <= hi + 1e-12):
        raise ValueError(f"visibility {v} outside [{lo}, {hi}] for d={d}")
    eye = np.eye(d * d, dtype=complex)
    m = v * (eye - flip_operator(d)) / (d * (d - 1)) + (1 - v) * eye / d**2
    return DensityMatrix(m, d, d)


def _state_from_bloch(vec: np.ndarray) -> PureState:
    x, y, z = vec
    if z < -1 + 1e-12:
        return PureState(np.array([0, 1], dtype=complex))
    a0 = np.sqrt((1 + z) / 2)
    a1 = (x + 1j * y) / (2 * a0)
    return PureState(np.array([a0, a1]))


def bloch_projector(vec) -> np.ndarray:
    """Qubit projector (1 + v . sigma) / 2 for a unit Bloch vector v."""
    x, y, z = np.asarray(vec, dtype=float)
    return (np.eye(2, dtype=complex) + x * PAULI_X + y * PAULI_Y + z * PAULI_Z) / 2


def tetrahedron_ensemble() -> InputEnsemble:
    """Four qubit states whose Bloch vectors form a regular tetrahedron.

    Cross overlaps |<phi_s|phi_t>|^2 = 1/3 for s != t; the projectors sum
    to 2 * identity. This is the d=2 SIC ensemble.
    """
    return InputEnsemble(tuple(_state_from_bloch(v) for v in TETRAHEDRON_BLOCH))


def basis_ensemble(d: int) -> InputEnsemble:
    """Computational-basis ensemble {|0>, ..., |d-1>}.

    Orthogonal inputs are perfectly distinguishable, so a scenario built on
    this ensemble degenerates to an ordinary classical-input one. Not
    informationally complete (d projectors cannot span d^2 dimensions).
    """
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    eye = np.eye(d, dtype=complex)
    return InputEnsemble(tuple(PureState(eye[k]) for k in range(d)))


def weyl_heisenberg_orbit(fiducial: np.ndarray) -> np.ndarray:
    """All d^2 states X^p Z^q |f>, ordered s = p*d + q (0-based).

    Conventions: shift X|k> = |k+1 mod d>, clock Z|k> = w^k |k> with
    w = exp(2 pi i / d).
    """
    f = np.asarray(fiducial, dtype=complex).reshape(-1)
    d = f.shape[0]
    omega = np.exp(2j * np.pi / d)
    k = np.arange(d)
    return np.array([np.roll(f * omega ** ((q * k) % d), p) for p in range(d) for q in range(d)])


QUTRIT_FIDUCIAL = np.array([0, 1, -1], dtype=complex) / np.sqrt(2)


def _fiducial_from_params(params: np.ndarray, d: int) -> np.ndarray:
    # 2d-2 reals: d-1 hyperspherical magnitude angles + d-1 phases
    # (component 0 is kept real, fixing the global phase).
    angles, phases = params[: d - 1], params[d - 1 :]
    mags = np.empty(d)
    s = 1.0
    for i in range(d - 1):
        mags[i] = s * np.cos(angles[i])
        s *= np.sin(angles[i])
    mags[d - 1] = s
    return mags * np.exp(1j * np.concatenate([[0.0], phases]))


def _sic_deviation(states: np.ndarray, d: int) -> float:
    """Sum over s != t of (|<phi_s|phi_t>|^2 - 1/(d+1))^2."""
    target = 1.0 / (d + 1)
    overlaps = np.abs(states.conj() @ states.T) ** 2
    np.fill_diagonal(overlaps, target)
    return float(np.sum((overlaps - target) ** 2))


def _search_fiducial(d: int, seed: int, restarts: int, threshold: float) -> np.ndarray:
    """Seeded random-restart Nelder-Mead search for a SIC fiducial.

    Each restart draws a random parameter vector and runs a simplex descent,
    re-polished from its own optimum until the pairwise-overlap residual
    drops below ``threshold``.
    """
    rng = np.random.default_rng([seed, d])
    nparams = 2 * d - 2
    options = dict(maxiter=4000 * nparams, maxfev=4000 * nparams, xatol=1e-13, fatol=1e-17, adaptive=True)

    def objective(params):
        return _sic_deviation(weyl_heisenberg_orbit(_fiducial_from_params(params, d)), d)

    best = np.inf
    for _ in range(restarts):
        x = rng.uniform(0.0, 2 * np.pi, nparams)
        fun = np.inf
        for _ in range(12):
            res = minimize(objective, x, method="Nelder-Mead", options=options)
            x, fun = res.x, float(res.fun)
            if fun <= threshold:
                return _fiducial_from_params(x, d)
        best = min(best, fun)
    raise FiducialSearchError(
        f"no SIC fiducial for d={d} within {restarts} restarts (best residual {best:.3e} > {threshold:.1e})"
    )


def sic_ensemble(d: int, seed: int = 0, restarts: int = 40) -> InputEnsemble:
    """Symmetric informationally complete ensemble of d^2 states.

    Pairwise overlaps satisfy |<phi_s'|phi_s>|^2 = (d*delta + 1)/(d+1)
    within 1e-8. d=2 returns the tetrahedron; d=3 uses the analytic
    fiducial (0, 1, -1)/sqrt(2) under the Weyl-Heisenberg orbit; 4 <= d <= 8
    runs the seeded numerical fiducial search.
    """
    if not 2 <= d <= 8:
        raise ValueError(f"SIC ensembles supported for 2 <= d <= 8, got {d}")
    if d == 2:
        return tetrahedron_ensemble()
    if d == 3:
        fiducial = QUTRIT_FIDUCIAL
    else:
        # threshold 1e-16 on the summed squared deviation keeps every
        # individual overlap within the 1e-8 ensemble tolerance
        fiducial = _search_fiducial(d, seed, restarts, threshold=1e-16)
    states = weyl_heisenberg_orbit(fiducial)
    ensemble = InputEnsemble(tuple(PureState(s) for s in states))
    residual = _sic_deviation(states, d)
    if residual > (SIC_OVERLAP_TOL**2):
        raise FiducialSearchError(f"generated ensemble misses the overlap condition (residual {residual:.3e})")
    return ensemble


def ensemble_diagnostics(ensemble: InputEnsemble, tol: float = DEFAULT_TOL) -> EnsembleDiagnostics:
    """Report whether the projectors span operator space and whether
    unambiguous state discrimination is possible.

    The projectors are informationally complete iff, vectorized, they have
    rank dim^2. USD is possible iff the state vectors are linearly
    independent, which fails for every informationally complete set of
    dim^2 rank-1 projectors.
    """
    d, n = ensemble.dim, ensemble.n
    proj_rows = ensemble.projector_stack().reshape(n, d * d)
    complete = int(np.linalg.matrix_rank(proj_rows, tol=tol)) == d * d
    state_rows = ensemble.state_matrix()
    usd = int(np.linalg.matrix_rank(state_rows, tol=tol)) == n
    return EnsembleDiagnostics(informationally_complete=complete, usd_possible=usd)
