"""Construction and evaluation of quantum-input entanglement witnesses.

For an NPT state (or any state detected by a user-supplied positive map
Lambda), 1 (x) Lambda(rho) has an eigenstate |xi> with negative eigenvalue
lambda. Decomposing 1 (x) Lambda*(|xi><xi|) over the transposed input
projectors of two informationally complete ensembles yields real
coefficients beta_st such that

    I(P) = sum_st beta_st P(1,1 | phi_s, psi_t) >= 0

for every separable (hence every LOCC) measurement strategy, while the
canonical quantum scenario reaches I = lambda / (dA * dB) < 0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import (
    DEFAULT_TOL,
    DimensionMismatchError,
    as_complex_matrix,
    eig_hermitian,
    kron,
    partial_transpose,
    require_hermitian,
    solve_linear,
)
from .scenario import CorrelationTable
from .states import DensityMatrix, InputEnsemble, PureState, ensemble_diagnostics

NEGATIVITY_TOL = 1e-10
RECONSTRUCTION_TOL = 1e-8


class NoNegativeEigenvalueError(ValueError):
    """The chosen positive map does not detect the state.

    For the transposition map this means the state has a positive partial
    transpose (PPT), so no witness of this form exists for it.
    """


class NotInformationallyCompleteError(ValueError):
    """Ensemble projectors do not span the local operator space."""


@dataclass(frozen=True)
class PositiveMapSpec:
    """A positive map given either as transposition or by its Choi matrix.

    Choi convention: C = sum_ij |i><j| (x) map(|i><j|), acting on
    dim_in (x) dim_out. Block positivity of user-supplied Choi matrices is
    trusted, not verified; Hermiticity is checked.
    """

    kind: str
    dim_in: int
    dim_out: int
    choi: np.ndarray | None = None

    def __post_init__(self):
        if self.kind == "transposition":
            if self.dim_in != self.dim_out:
                raise DimensionMismatchError("transposition requires dim_in == dim_out")
            if self.choi is not None:
                raise ValueError("transposition kind carries no Choi matrix")
        elif self.kind == "choi":
            if self.choi is None:
                raise ValueError("choi kind requires a Choi matrix")
            n = self.dim_in * self.dim_out
            c = as_complex_matrix(self.choi)
            if c.shape != (n, n):
                raise DimensionMismatchError(f"Choi matrix must be {n}x{n}, got {c.shape}")
            c = require_hermitian(c, DEFAULT_TOL)
            c.setflags(write=False)
            object.__setattr__(self, "choi", c)
        else:
            raise ValueError(f"unknown map kind {self.kind!r}")


def transposition_map(d: int) -> PositiveMapSpec:
    """The transposition map on a d-dimensional system (self-dual)."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    return PositiveMapSpec("transposition", d, d)


def choi_map(choi, dim_in: int, dim_out: int) -> PositiveMapSpec:
    """A map defined by its Choi matrix; the caller asserts positivity."""
    return PositiveMapSpec("choi", dim_in, dim_out, as_complex_matrix(choi))


def apply_map(map_spec: PositiveMapSpec, x, dual: bool = False) -> np.ndarray:
    """Apply the map (or its trace dual, tr[M map*(N)] = tr[map(M) N]) to x."""
    xm = as_complex_matrix(x)
    if map_spec.kind == "transposition":
        if xm.shape != (map_spec.dim_in, map_spec.dim_in):
            raise DimensionMismatchError(f"expected {map_spec.dim_in}x{map_spec.dim_in}, got {xm.shape}")
        return xm.T.copy()
    din, dout = map_spec.dim_in, map_spec.dim_out
    c4 = map_spec.choi.reshape(din, dout, din, dout)
    if dual:
        if xm.shape != (dout, dout):
            raise DimensionMismatchError(f"dual map expects {dout}x{dout}, got {xm.shape}")
        return np.einsum("om,jmio->ij", xm, c4)
    if xm.shape != (din, din):
        raise DimensionMismatchError(f"map expects {din}x{din}, got {xm.shape}")
    return np.einsum("ki,koip->op", xm, c4)


def _apply_map_to_b_blocks(map_spec: PositiveMapSpec, m: np.ndarray, dim_a: int, dual: bool) -> np.ndarray:
    """1 (x) map acting on a bipartite operator, blockwise over subsystem A."""
    d_from = map_spec.dim_out if dual else map_spec.dim_in
    d_to = map_spec.dim_in if dual else map_spec.dim_out
    if map_spec.kind == "transposition":
        return partial_transpose(m, dim_a, d_from, subsystem="B")
    t = m.reshape(dim_a, d_from, dim_a, d_from)
    c4 = map_spec.choi.reshape(map_spec.dim_in, map_spec.dim_out, map_spec.dim_in, map_spec.dim_out)
    if dual:
        out = np.einsum("iojp,wpuo->iujw", t, c4)
    else:
        out = np.einsum("ikjm,komp->iojp", t, c4)
    return out.reshape(dim_a * d_to, dim_a * d_to)


@dataclass(frozen=True)
class WitnessCoefficients:
    """Real inequality coefficients plus the data they were built from.

    ``lambda_`` is the negative eigenvalue of 1 (x) map(rho) when recorded
    (None for coefficients rebuilt from a file without it).
    """

    beta: np.ndarray
    xi: PureState
    map: PositiveMapSpec
    ensemble_a: InputEnsemble
    ensemble_b: InputEnsemble
    lambda_: float | None = None

    def __post_init__(self):
        b = np.asarray(self.beta, dtype=float)
        expected = (self.ensemble_a.n, self.ensemble_b.n)
        if b.shape != expected:
            raise DimensionMismatchError(f"beta shape {b.shape} does not match ensemble sizes {expected}")
        if self.lambda_ is not None and not self.lambda_ < 0:
            raise ValueError(f"recorded eigenvalue must be negative, got {self.lambda_}")
        b = b.copy()
        b.setflags(write=False)
        object.__setattr__(self, "beta", b)

    @property
    def dim_a(self) -> int:
        return self.ensemble_a.dim

    @property
    def dim_b(self) -> int:
        return self.ensemble_b.dim


def negative_eigenstate(rho: DensityMatrix, map_spec: PositiveMapSpec) -> tuple[float, PureState]:
    """Most negative eigenvalue of 1 (x) map(rho) and its eigenstate.

    Raises NoNegativeEigenvalueError when the spectrum stays above
    -1e-10, i.e. the map does not detect rho. Degenerate minima are
    resolved deterministically: each candidate eigenvector is phase-fixed
    so its first nonzero amplitude is real positive, then the
    lexicographically largest one wins.
    """
    if rho.dim_b == 1:
        raise DimensionMismatchError("state must be bipartite")
    if map_spec.dim_in != rho.dim_b:
        raise DimensionMismatchError(f"map input dimension {map_spec.dim_in} != state dim_b {rho.dim_b}")
    w = _apply_map_to_b_blocks(map_spec, rho.matrix, rho.dim_a, dual=False)
    eigenvalues, eigenvectors = eig_hermitian(w, tol=DEFAULT_TOL)
    lam = float(eigenvalues[0])
    if lam >= -NEGATIVITY_TOL:
        raise NoNegativeEigenvalueError(
            f"1 (x) map(rho) has no negative eigenvalue (min {lam:.3e}); "
            "the map does not detect this state (positive partial transpose for the transposition map)"
        )
    candidates = [eigenvectors[:, i] for i in range(len(eigenvalues)) if eigenvalues[i] <= lam + NEGATIVITY_TOL]
    fixed = [_phase_fix(v) for v in candidates]
    best = max(fixed, key=lambda v: tuple(np.column_stack([v.real, v.imag]).ravel()))
    return lam, PureState(best)


def _phase_fix(v: np.ndarray) -> np.ndarray:
    idx = np.flatnonzero(np.abs(v) > 1e-12)
    if idx.size == 0:
        return v
    lead = v[idx[0]]
    return v * (lead.conjugate() / abs(lead))


def _hermitian_to_realvec(h: np.ndarray) -> np.ndarray:
    n = h.shape[0]
    iu = np.triu_indices(n, 1)
    return np.concatenate([np.diag(h).real, h[iu].real, h[iu].imag])


def build_coefficients(
    xi: PureState,
    map_spec: PositiveMapSpec,
    ensemble_a: InputEnsemble,
    ensemble_b: InputEnsemble,
    lambda_: float | None = None,
) -> WitnessCoefficients:
    """Solve for real beta_st with
    1 (x) map*(|xi><xi|) = sum_st beta_st |phi_s><phi_s|^T (x) |psi_t><psi_t|^T.

    The operator equation is vectorized over a real basis of Hermitian
    matrices, giving one dense (dA^2 dB^2)-dimensional real system; both
    ensembles must be informationally complete for it to be solvable.
    ``lambda_`` may record the negative eigenvalue the eigenstate came from.
    """
    if not ensemble_diagnostics(ensemble_a).informationally_complete:
        raise NotInformationallyCompleteError("ensemble A projectors do not span the operator space")
    if not ensemble_diagnostics(ensemble_b).informationally_complete:
        raise NotInformationallyCompleteError("ensemble B projectors do not span the operator space")
    dim_a, dim_b = ensemble_a.dim, ensemble_b.dim
    if xi.dim != dim_a * map_spec.dim_out:
        raise DimensionMismatchError(
            f"eigenstate dimension {xi.dim} != dim_a * map output dim = {dim_a * map_spec.dim_out}"
        )
    if map_spec.dim_in != dim_b:
        raise DimensionMismatchError(f"map input dimension {map_spec.dim_in} != ensemble B dimension {dim_b}")

    target = _apply_map_to_b_blocks(map_spec, xi.projector(), dim_a, dual=True)
    basis = [
        kron(pa.T, pb.T)
        for pa in ensemble_a.projectors
        for pb in ensemble_b.projectors
    ]
    system = np.array([_hermitian_to_realvec(m) for m in basis]).T
    beta = solve_linear(system, _hermitian_to_realvec(target)).real
    beta = beta.reshape(ensemble_a.n, ensemble_b.n)

    reconstruction = np.einsum("st,stij->ij", beta, np.array(basis).reshape(ensemble_a.n, ensemble_b.n, *target.shape))
    defect = float(np.max(np.abs(reconstruction - target)))
    if defect > RECONSTRUCTION_TOL:
        raise NotInformationallyCompleteError(f"decomposition residual {defect:.3e} exceeds {RECONSTRUCTION_TOL}")
    return WitnessCoefficients(
        beta=beta, xi=xi, map=map_spec, ensemble_a=ensemble_a, ensemble_b=ensemble_b, lambda_=lambda_
    )


def build_witness(
    rho: DensityMatrix,
    ensemble_a: InputEnsemble,
    ensemble_b: InputEnsemble,
    map_spec: PositiveMapSpec | None = None,
) -> WitnessCoefficients:
    """Full pipeline: find the negative eigenstate of 1 (x) map(rho), then
    decompose its dual image over the ensemble projectors.

    Defaults to transposition on subsystem B, which detects every NPT state.
    """
    if map_spec is None:
        map_spec = transposition_map(rho.dim_b)
    lam, xi = negative_eigenstate(rho, map_spec)
    return build_coefficients(xi, map_spec, ensemble_a, ensemble_b, lambda_=lam)


def evaluate_inequality(witness: WitnessCoefficients, table: CorrelationTable | np.ndarray) -> float:
    """I = sum_st beta_st P(1,1 | s,t), unclipped.

    ``table`` is either a full CorrelationTable or a bare (nS, nT) matrix of
    (1,1)-outcome probabilities.
    """
    p11 = table.p11() if isinstance(table, CorrelationTable) else np.asarray(table, dtype=float)
    if p11.shape != witness.beta.shape:
        raise DimensionMismatchError(f"table shape {p11.shape} does not match beta shape {witness.beta.shape}")
    return float(np.sum(witness.beta * p11))


def predicted_quantum_value(witness: WitnessCoefficients, dim_a: int, dim_b: int) -> float:
    """The canonical-scenario value lambda / (dA * dB)."""
    if witness.lambda_ is None:
        raise ValueError("witness carries no recorded eigenvalue")
    return witness.lambda_ / (dim_a * dim_b)


def werner_beta_closed_form(d: int) -> np.ndarray:
    """Coefficients for the d x d Werner witness with SIC inputs,
    beta_st = (d (d+1) delta_st - 1) / d^3, as a d^2 x d^2 matrix."""
    if d < 2:
        raise ValueError(f"dimension must be >= 2, got {d}")
    n = d * d
    return (d * (d + 1) * np.eye(n) - np.ones((n, n))) / d**3
