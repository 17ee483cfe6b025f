"""Acceptance suite: one test per release criterion, one PASS/FAIL line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute. Tolerances and runtime limits are fixed here, not
configurable.
"""

import contextlib
import io
import json
import time

import numpy as np

from qiw import (
    DensityMatrix,
    WitnessCoefficients,
    basis_ensemble,
    build_witness,
    canonical_scenario,
    closed_form_table,
    correlations,
    correlations_joint,
    ensemble_diagnostics,
    evaluate_inequality,
    flip_operator,
    kron,
    minimize_inequality,
    run_attack,
    sic_ensemble,
    singlet,
    tetrahedron_ensemble,
    werner_beta_closed_form,
    werner_state,
)
from qiw.cli import main as cli_main
from helpers import min_pt_eigenvalue, random_density, random_matrix, random_pure


def _report(number: int, ok: bool, elapsed: float, detail: str):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number}: {status} ({detail}; {elapsed:.2f}s)")
    assert ok, f"criterion {number} failed: {detail}"


def test_criterion_1_singlet_correlations():
    start = time.perf_counter()
    tet = tetrahedron_ensemble()
    rho = DensityMatrix(singlet().projector(), 2, 2)
    table = correlations(canonical_scenario(rho, tet, tet))
    worst = 0.0
    for s in range(1, 5):
        for t in range(1, 5):
            same = s == t
            worst = max(worst, abs(table.p(1, 1, s, t) - (0.0 if same else 1 / 12)))
            worst = max(worst, abs(table.p(0, 0, s, t) - (1 / 2 if same else 7 / 12)))
    elapsed = time.perf_counter() - start
    _report(1, worst <= 1e-10 and elapsed < 1.0, elapsed, f"max deviation {worst:.2e}")


def test_criterion_2_qubit_werner_witness():
    start = time.perf_counter()
    tet = tetrahedron_ensemble()
    witness = build_witness(werner_state(2, 1.0), tet, tet)
    beta_err = float(np.max(np.abs(witness.beta - (6 * np.eye(4) - 1) / 8)))

    value_err = 0.0
    for v in np.arange(0.0, 1.0 + 1e-12, 0.1):
        table = correlations(canonical_scenario(werner_state(2, v), tet, tet))
        value_err = max(value_err, abs(evaluate_inequality(witness, table) - (1 - 3 * v) / 16))

    below = evaluate_inequality(witness, correlations(canonical_scenario(werner_state(2, 1 / 3 - 1e-6), tet, tet)))
    above = evaluate_inequality(witness, correlations(canonical_scenario(werner_state(2, 1 / 3 + 1e-6), tet, tet)))
    bracketed = below > 0.0 > above

    elapsed = time.perf_counter() - start
    ok = beta_err <= 1e-8 and value_err <= 1e-9 and bracketed and elapsed < 1.0
    _report(2, ok, elapsed, f"beta err {beta_err:.2e}, value err {value_err:.2e}, sign change {bracketed}")


def test_criterion_3_qutrit_werner_witness():
    start = time.perf_counter()
    s3 = sic_ensemble(3)
    witness = build_witness(werner_state(3, 1.0), s3, s3)
    beta_err = float(np.max(np.abs(witness.beta - werner_beta_closed_form(3))))

    value_err = 0.0
    table_err = 0.0
    for v in np.arange(0.0, 1.0 + 1e-12, 0.1):
        table = correlations(canonical_scenario(werner_state(3, v), s3, s3))
        value_err = max(value_err, abs(evaluate_inequality(witness, table) - (1 - 4 * v) / 81))
        analytic = closed_form_table("wernerD", d=3, v=v)
        table_err = max(table_err, float(np.max(np.abs(table.probabilities - analytic.probabilities))))

    elapsed = time.perf_counter() - start
    ok = beta_err <= 1e-8 and value_err <= 1e-9 and table_err <= 1e-9 and elapsed < 10.0
    _report(3, ok, elapsed, f"beta err {beta_err:.2e}, value err {value_err:.2e}, table err {table_err:.2e}")


def test_criterion_4_violation_equals_scaled_eigenvalue():
    start = time.perf_counter()
    rng = np.random.default_rng(2024)
    tet = tetrahedron_ensemble()
    worst = 0.0
    checked = 0
    want_pure = True
    while checked < 50:
        if want_pure:
            rho = DensityMatrix(random_pure(rng, 4).projector(), 2, 2)
        else:
            rho = random_density(rng, 2, 2)
        want_pure = not want_pure
        if min_pt_eigenvalue(rho) > -1e-6:
            continue
        witness = build_witness(rho, tet, tet)
        value = evaluate_inequality(witness, correlations(canonical_scenario(rho, tet, tet)))
        worst = max(worst, abs(value - witness.lambda_ / 4))
        checked += 1
    elapsed = time.perf_counter() - start
    _report(4, worst <= 1e-8 and elapsed < 30.0, elapsed, f"50 NPT states, max deviation {worst:.2e}")


def test_criterion_5_separable_bound():
    start = time.perf_counter()
    details = []
    ok = True
    for d in (2, 3):
        ens = sic_ensemble(d)
        witness = build_witness(werner_state(d, 1.0), ens, ens)
        report = run_attack(witness, samples=10_000, budget=200, seed=42)
        ok = ok and report.min_i_samples >= -1e-9 and report.min_i_optimizer >= -1e-9
        details.append(f"d={d} min sampled {report.min_i_samples:.2e}, optimized {report.min_i_optimizer:.2e}")

        flipped = WitnessCoefficients(
            beta=-witness.beta, xi=witness.xi, map=witness.map,
            ensemble_a=witness.ensemble_a, ensemble_b=witness.ensemble_b, lambda_=witness.lambda_,
        )
        control = minimize_inequality(flipped, budget=200, seed=42)
        ok = ok and control.min_value <= -0.9
        details.append(f"d={d} control {control.min_value:.3f}")
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < 120.0
    _report(5, ok, elapsed, "; ".join(details))


def test_criterion_6_evaluation_paths_and_flip_identity():
    start = time.perf_counter()
    tet = tetrahedron_ensemble()
    s3 = sic_ensemble(3)
    rng = np.random.default_rng(606)
    suite = [
        canonical_scenario(DensityMatrix(singlet().projector(), 2, 2), tet, tet),
        canonical_scenario(werner_state(2, 0.0), tet, tet),
        canonical_scenario(werner_state(2, 0.5), tet, tet),
        canonical_scenario(werner_state(2, 1.0), tet, tet),
        canonical_scenario(werner_state(3, 0.5), s3, s3),
        canonical_scenario(werner_state(3, 1.0), s3, s3),
        canonical_scenario(random_density(rng, 2, 2), tet, tet),
        canonical_scenario(random_density(rng, 2, 2), basis_ensemble(2), tet),
    ]
    path_err = 0.0
    for sc in suite:
        diff = np.abs(correlations(sc).probabilities - correlations_joint(sc).probabilities)
        path_err = max(path_err, float(np.max(diff)))

    flip_err = 0.0
    for _ in range(100):
        d = int(rng.integers(2, 5))
        a, b = random_matrix(rng, d), random_matrix(rng, d)
        flip_err = max(flip_err, abs(np.trace(flip_operator(d) @ kron(a, b)) - np.trace(a @ b)))

    elapsed = time.perf_counter() - start
    ok = path_err <= 1e-10 and flip_err <= 1e-10
    _report(6, ok, elapsed, f"path err {path_err:.2e} over {len(suite)} scenarios, flip err {flip_err:.2e}")


def test_criterion_7_ensemble_diagnostics():
    start = time.perf_counter()
    tet = ensemble_diagnostics(tetrahedron_ensemble())
    s3 = ensemble_diagnostics(sic_ensemble(3))
    ortho = ensemble_diagnostics(basis_ensemble(2))
    ok = (
        tet.informationally_complete and not tet.usd_possible
        and s3.informationally_complete and not s3.usd_possible
        and ortho.usd_possible and not ortho.informationally_complete
    )
    elapsed = time.perf_counter() - start
    _report(7, ok, elapsed, f"tetrahedron {tuple(tet)}, SIC(3) {tuple(s3)}, basis {tuple(ortho)}")


def test_criterion_8_sic_condition():
    start = time.perf_counter()
    worst = 0.0
    for d in (2, 3, 4, 5):
        ens = sic_ensemble(d, seed=0)
        gram = np.abs(ens.state_matrix().conj() @ ens.state_matrix().T) ** 2
        target = (np.eye(d * d) * d + 1) / (d + 1)
        worst = max(worst, float(np.max(np.abs(gram - target))))
    elapsed = time.perf_counter() - start
    _report(8, worst <= 1e-8, elapsed, f"d=2..5 max overlap deviation {worst:.2e}")


def test_criterion_9_attack_determinism(tmp_path):
    start = time.perf_counter()
    scenario = tmp_path / "scenario.json"
    scenario.write_text(json.dumps({
        "state": {"kind": "werner", "d": 2, "v": 1.0},
        "ensembleA": {"kind": "tetrahedron"},
        "ensembleB": {"kind": "tetrahedron"},
        "measurement": {"kind": "canonical"},
    }))
    witness = tmp_path / "witness.json"
    with contextlib.redirect_stdout(io.StringIO()):
        assert cli_main(["build", "--scenario", str(scenario), "--out", str(witness)]) == 0

    outputs = []
    for name, workers in (("a.json", "1"), ("b.json", "1"), ("c.json", "3"), ("d.json", "8")):
        out = tmp_path / name
        with contextlib.redirect_stdout(io.StringIO()):
            code = cli_main([
                "attack", "--witness", str(witness), "--samples", "500",
                "--budget", "50", "--seed", "42", "--workers", workers, "--out", str(out),
            ])
        assert code == 0
        outputs.append(out.read_bytes())
    identical = all(o == outputs[0] for o in outputs)
    elapsed = time.perf_counter() - start
    _report(9, identical, elapsed, f"4 runs, workers 1/1/3/8, identical bytes {identical}")
