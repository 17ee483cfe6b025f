"""Classical-side verification: separable strategies can never violate a witness.

LOCC protocols of any length are contained in the separable measurements,
whose (1,1)-outcome element decomposes as Pi_11 = sum_k M_k (x) N_k with
positive M_k, N_k. This module evaluates such strategies against a witness,
samples them at scale, and runs a seeded coordinate-descent optimizer that
tries (and, for a correct witness, fails) to push I below zero.
"""

from __future__ import annotations

import hashlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .linalg import DEFAULT_TOL, DimensionMismatchError, as_complex_matrix, is_psd, kron
from .states import InputEnsemble
from .witness import WitnessCoefficients, evaluate_inequality

# stream tags keep the sample and optimizer RNG families disjoint
_SAMPLE_STREAM = 0
_OPTIMIZER_STREAM = 1

_CONTRACTION_TOL = 1e-9


@dataclass(frozen=True)
class SeparableStrategy:
    """Pi_11 = sum_k M_k (x) N_k with every factor PSD and the sum <= 1."""

    terms: tuple[tuple[np.ndarray, np.ndarray], ...]

    def __post_init__(self):
        frozen = []
        total = None
        for k, (m, n) in enumerate(self.terms):
            mm, nn = as_complex_matrix(m), as_complex_matrix(n)
            if not is_psd(mm, DEFAULT_TOL):
                raise ValueError(f"term {k}: Alice factor is not PSD within tolerance")
            if not is_psd(nn, DEFAULT_TOL):
                raise ValueError(f"term {k}: Bob factor is not PSD within tolerance")
            prod = kron(mm, nn)
            total = prod if total is None else total + prod
            mm, nn = mm.copy(), nn.copy()
            mm.setflags(write=False)
            nn.setflags(write=False)
            frozen.append((mm, nn))
        if total is not None:
            gap = np.linalg.eigvalsh((total + total.conj().T) / 2)[-1] - 1.0
            if gap > _CONTRACTION_TOL:
                raise ValueError(f"sum of terms exceeds the identity by {gap:.3e}")
        object.__setattr__(self, "terms", tuple(frozen))

    def pi11(self, dim_a: int, dim_b: int) -> np.ndarray:
        out = np.zeros((dim_a * dim_b, dim_a * dim_b), dtype=complex)
        for m, n in self.terms:
            out += kron(m, n)
        return out


@dataclass(frozen=True)
class GuessStrategy:
    """Label-guessing sub-family of separable strategies.

    Each party applies a local discrimination POVM whose outcomes are
    ensemble-label guesses (1-based ints) or None for inconclusive, then a
    joint deterministic rule decides whether the (1,1) event is claimed.
    Conservative strategies return 0 whenever a guess is None.
    """

    povm_a: tuple[np.ndarray, ...]
    labels_a: tuple[int | None, ...]
    povm_b: tuple[np.ndarray, ...]
    labels_b: tuple[int | None, ...]
    output_rule: Callable[[int | None, int | None], int]

    def __post_init__(self):
        for name, povm, labels in (("A", self.povm_a, self.labels_a), ("B", self.povm_b, self.labels_b)):
            if len(povm) != len(labels):
                raise ValueError(f"side {name}: {len(povm)} POVM elements but {len(labels)} labels")
            elems = tuple(as_complex_matrix(e) for e in povm)
            dim = elems[0].shape[0]
            total = np.zeros((dim, dim), dtype=complex)
            for k, e in enumerate(elems):
                if e.shape != (dim, dim):
                    raise DimensionMismatchError(f"side {name}, element {k}: shape {e.shape} != ({dim}, {dim})")
                if not is_psd(e, DEFAULT_TOL):
                    raise ValueError(f"side {name}, element {k} is not PSD within tolerance")
                total += e
            if np.max(np.abs(total - np.eye(dim))) > DEFAULT_TOL:
                raise ValueError(f"side {name}: POVM does not sum to the identity within tolerance")
        object.__setattr__(self, "povm_a", tuple(as_complex_matrix(e) for e in self.povm_a))
        object.__setattr__(self, "povm_b", tuple(as_complex_matrix(e) for e in self.povm_b))
        object.__setattr__(self, "labels_a", tuple(self.labels_a))
        object.__setattr__(self, "labels_b", tuple(self.labels_b))

    def to_separable(self) -> SeparableStrategy:
        """Collect the POVM element pairs mapped to joint output 1."""
        terms = [
            (ea, eb)
            for ea, ga in zip(self.povm_a, self.labels_a)
            for eb, gb in zip(self.povm_b, self.labels_b)
            if self.output_rule(ga, gb)
        ]
        return SeparableStrategy(tuple(terms))


def _diag_values(matrix: np.ndarray, states: np.ndarray) -> np.ndarray:
    """<phi_s| M |phi_s> for every row of the (n, d) state stack."""
    return np.einsum("sd,de,se->s", states.conj(), matrix, states).real


def separable_correlation(strategy: SeparableStrategy, ensemble_a: InputEnsemble, ensemble_b: InputEnsemble) -> np.ndarray:
    """P(1,1 | s,t) = sum_k <phi_s|M_k|phi_s> <psi_t|N_k|psi_t> as an (nS, nT) matrix."""
    sa, sb = ensemble_a.state_matrix(), ensemble_b.state_matrix()
    out = np.zeros((ensemble_a.n, ensemble_b.n))
    for m, n in strategy.terms:
        if m.shape != (ensemble_a.dim, ensemble_a.dim) or n.shape != (ensemble_b.dim, ensemble_b.dim):
            raise DimensionMismatchError("strategy factor dimensions do not match the ensembles")
        out += np.outer(_diag_values(m, sa), _diag_values(n, sb))
    return out


def guess_strategy_correlation(strategy: GuessStrategy, ensemble_a: InputEnsemble, ensemble_b: InputEnsemble) -> np.ndarray:
    """P(1,1 | s,t) for a guessing strategy; agrees with converting it to a
    SeparableStrategy and calling separable_correlation."""
    if strategy.povm_a[0].shape[0] != ensemble_a.dim or strategy.povm_b[0].shape[0] != ensemble_b.dim:
        raise DimensionMismatchError("discrimination POVM dimensions do not match the ensembles")
    sa, sb = ensemble_a.state_matrix(), ensemble_b.state_matrix()
    vals_a = [_diag_values(e, sa) for e in strategy.povm_a]
    vals_b = [_diag_values(e, sb) for e in strategy.povm_b]
    out = np.zeros((ensemble_a.n, ensemble_b.n))
    for va, ga in zip(vals_a, strategy.labels_a):
        for vb, gb in zip(vals_b, strategy.labels_b):
            if strategy.output_rule(ga, gb):
                out += np.outer(va, vb)
    return out


def pgm_povm(ensemble: InputEnsemble) -> tuple[np.ndarray, ...]:
    """Pretty good measurement for the uniform-prior ensemble.

    E_s = S^{-1/2} (|phi_s><phi_s| / n) S^{-1/2} with S the average state.
    When S is rank deficient the kernel projector is appended as an extra
    (inconclusive) element so the POVM is complete.
    """
    n = ensemble.n
    avg = sum(ensemble.projectors) / n
    vals, vecs = np.linalg.eigh(avg)
    support = vals > 1e-12
    inv_sqrt = (vecs[:, support] / np.sqrt(vals[support])) @ vecs[:, support].conj().T
    elements = [inv_sqrt @ (p / n) @ inv_sqrt for p in ensemble.projectors]
    if not np.all(support):
        kernel = vecs[:, ~support] @ vecs[:, ~support].conj().T
        elements.append(kernel)
    return tuple(elements)


def sample_strategy(dim_a: int, dim_b: int, rng: np.random.Generator) -> SeparableStrategy:
    """One random single-term strategy M (x) N.

    Each factor is G^dag G for a complex Ginibre G, normalized to spectral
    norm 1 and scaled by an independent uniform factor in [0, 1]. The draw
    order (G_A, u_A, G_B, u_B) is fixed so a given generator state always
    produces the same strategy.
    """

    def factor(d: int) -> np.ndarray:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        gram = g.conj().T @ g
        gram /= np.linalg.eigvalsh(gram)[-1]
        return gram * rng.uniform()

    m = factor(dim_a)
    n = factor(dim_b)
    return SeparableStrategy(((m, n),))


class MinimizeResult(NamedTuple):
    min_value: float
    strategy: SeparableStrategy


def _best_contraction(objective: np.ndarray) -> np.ndarray:
    """argmin of tr(M C) over PSD contractions 0 <= M <= 1: the projector
    onto the negative eigenspace of C."""
    vals, vecs = np.linalg.eigh((objective + objective.conj().T) / 2)
    neg = vecs[:, vals < 0.0]
    return neg @ neg.conj().T


def _descend(witness: WitnessCoefficients, restart_index: int, seed: int, sweeps: int = 60) -> tuple[float, np.ndarray, np.ndarray]:
    """One seeded restart of alternating M/N coordinate descent."""
    ea, eb = witness.ensemble_a, witness.ensemble_b
    proj_a, proj_b = ea.projector_stack(), eb.projector_stack()
    sa, sb = ea.state_matrix(), eb.state_matrix()
    rng = np.random.default_rng([seed, _OPTIMIZER_STREAM, restart_index])
    start = sample_strategy(ea.dim, eb.dim, rng)
    m, n = start.terms[0]
    beta = witness.beta

    value = np.inf
    for _ in range(sweeps):
        weights_s = beta @ _diag_values(n, sb)
        m = _best_contraction(np.einsum("s,sij->ij", weights_s, proj_a))
        weights_t = _diag_values(m, sa) @ beta
        n = _best_contraction(np.einsum("t,tij->ij", weights_t, proj_b))
        new_value = float(_diag_values(m, sa) @ beta @ _diag_values(n, sb))
        if abs(new_value - value) < 1e-14:
            value = new_value
            break
        value = new_value
    return value, m, n


def minimize_inequality(
    witness: WitnessCoefficients,
    ensemble_a: InputEnsemble | None = None,
    ensemble_b: InputEnsemble | None = None,
    budget: int = 200,
    seed: int = 42,
    workers: int = 1,
) -> MinimizeResult:
    """Random-restart coordinate descent over single-term strategies.

    ``budget`` counts restarts; each restart alternates closed-form updates
    of M and N (projector onto the negative eigenspace of the effective
    linear objective). Multi-term strategies cannot beat the single-term
    infimum since I is linear in Pi_11. Deterministic for fixed seed and
    budget, independent of ``workers``.
    """
    if budget < 1:
        raise ValueError(f"budget must be >= 1, got {budget}")
    ensemble_a = witness.ensemble_a if ensemble_a is None else ensemble_a
    ensemble_b = witness.ensemble_b if ensemble_b is None else ensemble_b
    if ensemble_a is not witness.ensemble_a or ensemble_b is not witness.ensemble_b:
        w = WitnessCoefficients(
            beta=witness.beta, xi=witness.xi, map=witness.map,
            ensemble_a=ensemble_a, ensemble_b=ensemble_b, lambda_=witness.lambda_,
        )
    else:
        w = witness

    results = _run_indexed(lambda i: _descend(w, i, seed), budget, workers)
    best_index = min(range(budget), key=lambda i: (results[i][0], i))
    value, m, n = results[best_index]
    return MinimizeResult(min_value=value, strategy=SeparableStrategy(((m, n),)))


def _run_indexed(task: Callable[[int], object], count: int, workers: int) -> list:
    """Evaluate task(0..count-1), optionally across threads.

    Results are collected by index, so the outcome does not depend on the
    worker count or scheduling order.
    """
    if workers <= 1:
        return [task(i) for i in range(count)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(task, range(count)))


def witness_id(witness: WitnessCoefficients) -> str:
    """Short content hash identifying a witness (beta, eigenstate, map kind)."""
    h = hashlib.sha256()
    h.update(np.ascontiguousarray(witness.beta).tobytes())
    h.update(np.ascontiguousarray(witness.xi.amplitudes).tobytes())
    h.update(witness.map.kind.encode())
    if witness.lambda_ is not None:
        h.update(np.float64(witness.lambda_).tobytes())
    return h.hexdigest()[:12]


class AttackReport(NamedTuple):
    witness_id: str
    samples: int
    min_i_samples: float | None
    min_i_optimizer: float
    min_i: float
    seed: int
    budget: int


def run_attack(
    witness: WitnessCoefficients,
    samples: int = 10_000,
    budget: int = 200,
    seed: int = 42,
    workers: int = 1,
) -> AttackReport:
    """Sample separable strategies and run the optimizer against a witness.

    Every sample index has its own derived RNG, so reports are bit-identical
    for a fixed seed regardless of worker count.
    """
    ea, eb = witness.ensemble_a, witness.ensemble_b

    def sample_value(j: int) -> float:
        rng = np.random.default_rng([seed, _SAMPLE_STREAM, j])
        strat = sample_strategy(ea.dim, eb.dim, rng)
        return evaluate_inequality(witness, separable_correlation(strat, ea, eb))

    min_samples = None
    if samples > 0:
        values = _run_indexed(sample_value, samples, workers)
        min_samples = float(min(values))
    optimum = minimize_inequality(witness, budget=budget, seed=seed, workers=workers)
    candidates = [optimum.min_value] if min_samples is None else [min_samples, optimum.min_value]
    return AttackReport(
        witness_id=witness_id(witness),
        samples=samples,
        min_i_samples=min_samples,
        min_i_optimizer=optimum.min_value,
        min_i=float(min(candidates)),
        seed=seed,
        budget=budget,
    )
