"""Quantum-input scenarios and their correlation tables.

A scenario bundles a shared bipartite state rho^AB, one input ensemble per
party, and binary joint POVMs: Alice measures her input (slot A') together
with her share of rho (slot A), Bob measures his share (slot B) together
with his input (slot B'). The canonical scenario projects onto the
maximally entangled state, which makes outcome 1 equivalent to measuring
the transposed input projector over the local dimension.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import DEFAULT_TOL, DimensionMismatchError, as_complex_matrix, is_psd, kron
from .states import DensityMatrix, InputEnsemble, PureState, max_entangled, werner_visibility_range

PROB_FLOOR = -1e-12


def _validate_povm(elements, dim: int, name: str) -> tuple[np.ndarray, ...]:
    if len(elements) != 2:
        raise ValueError(f"{name}: expected binary POVM with 2 elements, got {len(elements)}")
    out = []
    total = np.zeros((dim, dim), dtype=complex)
    for k, e in enumerate(elements):
        m = as_complex_matrix(e)
        if m.shape != (dim, dim):
            raise DimensionMismatchError(f"{name}[{k}]: expected {dim}x{dim}, got {m.shape}")
        if not is_psd(m, DEFAULT_TOL):
            raise ValueError(f"{name}[{k}] is not positive semidefinite within tolerance")
        total += m
        frozen = m.copy()
        frozen.setflags(write=False)
        out.append(frozen)
    if np.max(np.abs(total - np.eye(dim))) > DEFAULT_TOL:
        raise ValueError(f"{name} elements do not sum to the identity within tolerance")
    return tuple(out)


@dataclass(frozen=True)
class QIScenario:
    """Shared state, input ensembles and binary joint measurements.

    ``povm_a`` acts on A'A (dimension dim_a^2), ``povm_b`` on BB'
    (dimension dim_b^2); element index is the outcome, 0 or 1.
    """

    rho: DensityMatrix
    ensemble_a: InputEnsemble
    ensemble_b: InputEnsemble
    povm_a: tuple[np.ndarray, np.ndarray]
    povm_b: tuple[np.ndarray, np.ndarray]

    def __post_init__(self):
        if self.rho.dim_b == 1:
            raise DimensionMismatchError("scenario state must be bipartite")
        if self.ensemble_a.dim != self.rho.dim_a:
            raise DimensionMismatchError(
                f"ensemble A dimension {self.ensemble_a.dim} != state dim_a {self.rho.dim_a}"
            )
        if self.ensemble_b.dim != self.rho.dim_b:
            raise DimensionMismatchError(
                f"ensemble B dimension {self.ensemble_b.dim} != state dim_b {self.rho.dim_b}"
            )
        object.__setattr__(self, "povm_a", _validate_povm(self.povm_a, self.rho.dim_a**2, "povm_a"))
        object.__setattr__(self, "povm_b", _validate_povm(self.povm_b, self.rho.dim_b**2, "povm_b"))


@dataclass(frozen=True)
class CorrelationTable:
    """Joint outcome probabilities P[a, b, s, t] with binary a, b.

    s, t are 0-based ensemble indices here; formulas and file formats use
    the 1-based labels s+1, t+1.
    """

    probabilities: np.ndarray

    def __post_init__(self):
        p = np.asarray(self.probabilities, dtype=float)
        if p.ndim != 4 or p.shape[:2] != (2, 2):
            raise ValueError(f"expected probabilities of shape (2, 2, nS, nT), got {p.shape}")
        if np.min(p) < PROB_FLOOR:
            raise ValueError(f"negative probability {np.min(p)!r} below floor {PROB_FLOOR}")
        totals = p.sum(axis=(0, 1))
        if np.max(np.abs(totals - 1.0)) > DEFAULT_TOL:
            raise ValueError("outcome probabilities do not sum to 1 within tolerance")
        p = p.copy()
        p.setflags(write=False)
        object.__setattr__(self, "probabilities", p)

    @property
    def n_s(self) -> int:
        return self.probabilities.shape[2]

    @property
    def n_t(self) -> int:
        return self.probabilities.shape[3]

    def p(self, a: int, b: int, s: int, t: int) -> float:
        """P(a, b | s, t) with 1-based ensemble labels s, t."""
        return float(self.probabilities[a, b, s - 1, t - 1])

    def p11(self) -> np.ndarray:
        """The (1,1)-outcome block as an (nS, nT) matrix."""
        return np.array(self.probabilities[1, 1])


def canonical_scenario(rho: DensityMatrix, ensemble_a: InputEnsemble, ensemble_b: InputEnsemble) -> QIScenario:
    """Scenario where outcome 1 projects onto the maximally entangled state.

    Alice's element for outcome 1 is |Phi+_{dA}><Phi+_{dA}| on A'A, Bob's the
    analogue on BB'; outcome 0 is the complement.
    """
    proj_a = max_entangled(rho.dim_a).projector()
    proj_b = max_entangled(rho.dim_b).projector()
    return QIScenario(
        rho=rho,
        ensemble_a=ensemble_a,
        ensemble_b=ensemble_b,
        povm_a=(np.eye(rho.dim_a**2) - proj_a, proj_a),
        povm_b=(np.eye(rho.dim_b**2) - proj_b, proj_b),
    )


def effective_povm(element, input_state: PureState, side: str) -> np.ndarray:
    """Contract a joint POVM element with an input state.

    For side "A" the input occupies the first tensor slot and the result is
    <phi| (x) 1 . E . |phi> (x) 1; for side "B" the input occupies the second
    slot. For the canonical outcome-1 element this gives the transposed input
    projector divided by the local dimension.
    """
    e = as_complex_matrix(element)
    d_in = input_state.dim
    if e.shape[0] != e.shape[1] or e.shape[0] % d_in != 0:
        raise DimensionMismatchError(f"element of shape {e.shape} does not factor over input dim {d_in}")
    d_loc = e.shape[0] // d_in
    phi = input_state.amplitudes
    if side == "A":
        t = e.reshape(d_in, d_loc, d_in, d_loc)
        return np.einsum("i,ijkl,k->jl", phi.conj(), t, phi)
    if side == "B":
        t = e.reshape(d_loc, d_in, d_loc, d_in)
        return np.einsum("j,ijkl,l->ik", phi.conj(), t, phi)
    raise ValueError(f"side must be 'A' or 'B', got {side!r}")


def correlations(scenario: QIScenario) -> CorrelationTable:
    """P(a, b | s, t) = tr[(A_{a|phi_s} (x) B_{b|psi_t}) rho] for all indices.

    Evaluates through the effective single-system POVMs; identical (as the
    tests verify) to tracing the joint elements against the full
    input (x) state (x) input operator.
    """
    rho4 = scenario.rho.matrix.reshape(scenario.rho.dim_a, scenario.rho.dim_b, scenario.rho.dim_a, scenario.rho.dim_b)
    eff_a = np.array(
        [[effective_povm(e, s, "A") for s in scenario.ensemble_a.states] for e in scenario.povm_a]
    )
    eff_b = np.array(
        [[effective_povm(e, t, "B") for t in scenario.ensemble_b.states] for e in scenario.povm_b]
    )
    # tr[(M (x) N) rho] = sum_{ijkl} M_ij N_kl rho[(j,l),(i,k)]
    p = np.einsum("asij,btkl,jlik->abst", eff_a, eff_b, rho4).real
    return CorrelationTable(p)


def correlations_joint(scenario: QIScenario) -> CorrelationTable:
    """Same table evaluated without effective POVMs.

    Traces each joint element pair against
    |phi_s><phi_s| (x) rho (x) |psi_t><psi_t| on the full A'ABB' space.
    Kept as the independent cross-check path for ``correlations``.
    """
    n_s, n_t = scenario.ensemble_a.n, scenario.ensemble_b.n
    p = np.empty((2, 2, n_s, n_t))
    for a in range(2):
        for b in range(2):
            joint = kron(scenario.povm_a[a], scenario.povm_b[b])
            for s, proj_s in enumerate(scenario.ensemble_a.projectors):
                for t, proj_t in enumerate(scenario.ensemble_b.projectors):
                    state = kron(proj_s, kron(scenario.rho.matrix, proj_t))
                    p[a, b, s, t] = np.sum(joint * state.T).real
    return CorrelationTable(p)


def _check_indices(a: int, b: int, s: int, t: int, n: int):
    if a not in (0, 1) or b not in (0, 1):
        raise ValueError(f"outcomes must be 0 or 1, got a={a}, b={b}")
    if not (1 <= s <= n and 1 <= t <= n):
        raise ValueError(f"labels s={s}, t={t} outside 1..{n}")


def _singlet_probability(a: int, b: int, s: int, t: int) -> float:
    if s == t:
        return (2 - (a + b)) / 4
    return (7 - 5 * a - 5 * b + 4 * a * b) / 12


def _noise_probability(a: int, b: int) -> float:
    return (3 - 2 * a) * (3 - 2 * b) / 16


def closed_form_correlations(kind: str, a: int, b: int, s: int, t: int, *, d: int | None = None, v: float | None = None) -> float:
    """Analytic correlation values for the canonical SIC-input scenarios.

    kind "singlet": two-qubit singlet with tetrahedron inputs,
        P = (2-(a+b))/4 on s=t and (7-5a-5b+4ab)/12 otherwise.
    kind "werner2" (needs v): the qubit Werner mixture,
        P = v * P_singlet + (1-v) * (3-2a)(3-2b)/16.
    kind "wernerD" (needs d, v): the d x d Werner state with SIC inputs,
        P = [(d^2-1)^(3-a-b) + (-1)^(a+b) (1 - d^2 delta_st) v] / [d^4 (d^2-1)].
    """
    if kind == "singlet":
        _check_indices(a, b, s, t, 4)
        return _singlet_probability(a, b, s, t)
    if kind == "werner2":
        if v is None:
            raise ValueError("werner2 needs the visibility v")
        lo, hi = werner_visibility_range(2)
        if not (lo <= v <= hi):
            raise ValueError(f"visibility {v} outside [{lo}, {hi}]")
        _check_indices(a, b, s, t, 4)
        return v * _singlet_probability(a, b, s, t) + (1 - v) * _noise_probability(a, b)
    if kind == "wernerD":
        if d is None or v is None:
            raise ValueError("wernerD needs the dimension d and the visibility v")
        lo, hi = werner_visibility_range(d)
        if not (lo <= v <= hi):
            raise ValueError(f"visibility {v} outside [{lo}, {hi}] for d={d}")
        _check_indices(a, b, s, t, d * d)
        delta = 1.0 if s == t else 0.0
        num = (d * d - 1) ** (3 - a - b) + (-1) ** (a + b) * (1 - d * d * delta) * v
        return num / (d**4 * (d * d - 1))
    raise ValueError(f"unknown kind {kind!r}")


def closed_form_table(kind: str, *, d: int | None = None, v: float | None = None) -> CorrelationTable:
    """Full closed-form table for one of the kinds above."""
    n = (d * d) if (kind == "wernerD" and d is not None) else 4
    p = np.empty((2, 2, n, n))
    for a in range(2):
        for b in range(2):
            for s in range(n):
                for t in range(n):
                    p[a, b, s, t] = closed_form_correlations(kind, a, b, s + 1, t + 1, d=d, v=v)
    return CorrelationTable(p)
