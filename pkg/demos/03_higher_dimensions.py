"""Witnesses beyond qubits: SIC input ensembles for d = 3 and d = 4.

In dimension d the input ensemble consists of d^2 states with all pairwise
overlaps |<phi_s|phi_t>|^2 = 1/(d+1). For d=3 an analytic fiducial vector
is known; for d >= 4 a seeded simplex search finds one numerically. With
these inputs the Werner witness coefficients take the closed form
(d(d+1) delta_st - 1)/d^3 and the violation is (1 - v(d+1))/d^4.
"""

import numpy as np

from qiw import (
    build_witness,
    canonical_scenario,
    correlations,
    evaluate_inequality,
    sic_ensemble,
    werner_beta_closed_form,
    werner_state,
)

for d in (3, 4):
    ens = sic_ensemble(d, seed=0)
    gram = np.abs(ens.state_matrix().conj() @ ens.state_matrix().T) ** 2
    off = gram[~np.eye(d * d, dtype=bool)]
    print(f"d={d}: {ens.n} states, off-diagonal overlaps in "
          f"[{off.min():.12f}, {off.max():.12f}] (target {1 / (d + 1):.12f})")

    witness = build_witness(werner_state(d, 1.0), ens, ens)
    beta_err = np.max(np.abs(witness.beta - werner_beta_closed_form(d)))
    print(f"      beta matches (d(d+1)delta-1)/d^3 to {beta_err:.2e}")

    table = correlations(canonical_scenario(werner_state(d, 1.0), ens, ens))
    value = evaluate_inequality(witness, table)
    print(f"      violation at v=1: {value:.10f}  (closed form {(1 - (d + 1)) / d**4:.10f})")
    print(f"      entanglement threshold: v > 1/{d + 1}")
    print()
