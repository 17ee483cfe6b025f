import numpy as np
import pytest

from qiw import (
    DensityMatrix,
    FiducialSearchError,
    InputEnsemble,
    PureState,
    basis_ensemble,
    ensemble_diagnostics,
    flip_operator,
    is_psd,
    kron,
    max_entangled,
    partial_trace,
    partial_transpose,
    sic_ensemble,
    singlet,
    tetrahedron_ensemble,
    werner_state,
)
from qiw.states import TETRAHEDRON_BLOCH, bloch_projector
from helpers import random_pure


class TestMaxEntangled:
    def test_qubit_amplitudes(self):
        assert np.allclose(max_entangled(2).amplitudes, np.array([1, 0, 0, 1]) / np.sqrt(2))

    def test_qutrit_amplitudes(self):
        amps = max_entangled(3).amplitudes
        expected = np.zeros(9)
        expected[[0, 4, 8]] = 1 / np.sqrt(3)
        assert np.allclose(amps, expected)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_maximally_mixed_marginal(self, d):
        rho = max_entangled(d).projector()
        assert np.allclose(partial_trace(rho, d, d, keep="A"), np.eye(d) / d)

    def test_rejects_small_dimension(self):
        with pytest.raises(ValueError):
            max_entangled(1)


class TestSinglet:
    def test_amplitudes(self):
        assert np.allclose(singlet().amplitudes, np.array([0, 1, -1, 0]) / np.sqrt(2))

    def test_orthogonal_to_phi_plus(self):
        assert abs(singlet().overlap(max_entangled(2))) < 1e-15

    def test_equals_extremal_werner(self):
        assert np.allclose(werner_state(2, 1.0).matrix, singlet().projector(), atol=1e-14)


class TestFlipOperator:
    def test_qubit_permutation(self):
        f = flip_operator(2)
        expected = np.eye(4)[[0, 2, 1, 3]]
        assert np.array_equal(f, expected.astype(complex))

    def test_trace_equals_dimension(self):
        # from tr(F . A (x) B) = tr(A B) with A = B = identity
        assert abs(np.trace(flip_operator(3)) - 3) < 1e-15

    def test_swaps_product_vectors(self):
        rng = np.random.default_rng(7)
        for d in (2, 3, 4):
            a, b = random_pure(rng, d).amplitudes, random_pure(rng, d).amplitudes
            assert np.allclose(flip_operator(d) @ np.kron(a, b), np.kron(b, a))

    def test_involution(self):
        f = flip_operator(4)
        assert np.allclose(f @ f, np.eye(16))


class TestWernerState:
    def test_v_one_is_singlet(self):
        assert np.allclose(werner_state(2, 1.0).matrix, singlet().projector(), atol=1e-14)

    def test_v_zero_is_maximally_mixed(self):
        assert np.allclose(werner_state(2, 0.0).matrix, np.eye(4) / 4)

    def test_d3_partial_transpose_eigenvalue(self):
        pt = partial_transpose(werner_state(3, 0.5).matrix, 3, 3, subsystem="B")
        assert abs(np.linalg.eigvalsh(pt)[0] - (1 - 0.5 * 4) / 9) < 1e-12

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_visibility_range_enforced(self, d):
        lo = -(d - 1) / (d + 1)
        werner_state(d, lo)  # boundary values are valid
        werner_state(d, 1.0)
        with pytest.raises(ValueError):
            werner_state(d, lo - 1e-6)
        with pytest.raises(ValueError):
            werner_state(d, 1.0 + 1e-6)

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_npt_iff_visibility_above_threshold(self, d):
        for v in np.arange(0.0, 1.0 + 1e-12, 0.05):
            pt = partial_transpose(werner_state(d, v).matrix, d, d, subsystem="B")
            entangled = v > 1 / (d + 1)
            assert is_psd(pt) == (not entangled), (d, v)


class TestTetrahedron:
    def test_cross_overlaps(self):
        ens = tetrahedron_ensemble()
        for s in range(4):
            for t in range(4):
                overlap = abs(ens.states[s].overlap(ens.states[t])) ** 2
                expected = 1.0 if s == t else 1 / 3
                assert abs(overlap - expected) < 1e-14

    def test_projector_sum_is_twice_identity(self):
        total = sum(tetrahedron_ensemble().projectors)
        assert np.allclose(total, 2 * np.eye(2), atol=1e-14)

    def test_projectors_match_bloch_form(self):
        ens = tetrahedron_ensemble()
        for proj, vec in zip(ens.projectors, TETRAHEDRON_BLOCH):
            assert np.max(np.abs(proj - bloch_projector(vec))) <= 1e-15


class TestSicEnsemble:
    def test_d2_is_tetrahedron(self):
        ens = sic_ensemble(2)
        tet = tetrahedron_ensemble()
        assert all(np.allclose(a.amplitudes, b.amplitudes) for a, b in zip(ens.states, tet.states))

    @pytest.mark.parametrize("d,seed", [(2, 0), (3, 0), (4, 0), (5, 0)])
    def test_overlap_condition(self, d, seed):
        ens = sic_ensemble(d, seed)
        assert ens.n == d * d
        gram = np.abs(ens.state_matrix().conj() @ ens.state_matrix().T) ** 2
        target = (np.eye(d * d) * d + 1) / (d + 1)
        assert np.max(np.abs(gram - target)) <= 1e-8

    @pytest.mark.parametrize("d", [2, 3, 4])
    def test_scaled_projectors_form_povm(self, d):
        total = sum(sic_ensemble(d).projectors) / d
        assert np.max(np.abs(total - np.eye(d))) <= 1e-8

    def test_informationally_complete(self):
        for d in (2, 3):
            assert ensemble_diagnostics(sic_ensemble(d)).informationally_complete

    def test_rejects_unsupported_dimensions(self):
        for d in (1, 9):
            with pytest.raises(ValueError):
                sic_ensemble(d)

    def test_search_failure_is_reported(self):
        with pytest.raises(FiducialSearchError):
            sic_ensemble(5, seed=0, restarts=0)


class TestEnsembleDiagnostics:
    def test_tetrahedron(self):
        diag = ensemble_diagnostics(tetrahedron_ensemble())
        assert diag.informationally_complete and not diag.usd_possible

    def test_orthogonal_pair(self):
        diag = ensemble_diagnostics(basis_ensemble(2))
        assert not diag.informationally_complete and diag.usd_possible

    def test_three_equatorial_states(self):
        states = tuple(
            PureState(np.array([1, np.exp(1j * phi)]) / np.sqrt(2))
            for phi in (0.0, 2 * np.pi / 3, 4 * np.pi / 3)
        )
        diag = ensemble_diagnostics(InputEnsemble(states))
        assert not diag.informationally_complete and not diag.usd_possible


class TestValueTypes:
    def test_pure_state_requires_normalization(self):
        with pytest.raises(ValueError):
            PureState(np.array([1.0, 1.0]))

    def test_density_matrix_requires_unit_trace(self):
        with pytest.raises(ValueError):
            DensityMatrix(np.eye(4), 2, 2)

    def test_density_matrix_requires_psd(self):
        m = np.diag([1.5, -0.5, 0.0, 0.0]).astype(complex)
        with pytest.raises(ValueError):
            DensityMatrix(m, 2, 2)

    def test_ensemble_projectors_match_states(self):
        ens = sic_ensemble(3)
        for state, proj in zip(ens.states, ens.projectors):
            assert np.allclose(proj, state.projector())

    def test_ensemble_labels_are_one_based(self):
        assert list(tetrahedron_ensemble().labels) == [1, 2, 3, 4]

    def test_product_state_partial_transpose_consistency(self):
        # sanity: kron of tetrahedron projectors transposes factorwise
        p = tetrahedron_ensemble().projectors[0]
        pt = partial_transpose(kron(p, p), 2, 2, subsystem="B")
        assert np.allclose(pt, kron(p, p.T))
