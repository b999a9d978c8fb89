"""Tests for the ring of coupled wells."""
import numpy as np
import pytest
import scipy.linalg

from eigenring.circulant import CirculantMatrix
from eigenring.errors import (
    DomainError,
    InvalidSizeError,
    NonPositiveOverlapError,
    OvercompleteBasisError,
)
from eigenring.quantum_well import WellGeometry
from eigenring.ring_system import (
    RingMatrices,
    assemble_matrices,
    build_basis,
    nearest_neighbor_mask,
    shift_matrices,
    solve_ring,
)


def test_basis_translates(ring6_basis):
    assert ring6_basis.n == 6
    assert ring6_basis.spacing == pytest.approx(3.0)
    assert ring6_basis.psi(2, 6.1) == pytest.approx(ring6_basis.psi(0, 0.1))
    assert ring6_basis.psi(7, 3.0) == pytest.approx(ring6_basis.psi(1, 3.0))


def test_well_segments_wrap(ring6_basis):
    assert ring6_basis.well_segments(0) == [(pytest.approx(17.5), pytest.approx(18.0)),
                                            (0.0, pytest.approx(0.5))]
    assert ring6_basis.well_segments(2) == [(pytest.approx(5.5), pytest.approx(6.5))]


def test_assembled_matrices_are_circulant(ring6):
    S = ring6.S.real
    np.testing.assert_allclose(np.diag(S), np.ones(6), atol=1e-8)
    assert ring6.circulant_deviation < 1e-8
    assert ring6.hermiticity_error < 1e-8
    np.testing.assert_allclose(ring6.H, ring6.H.conj().T, atol=0)
    assert CirculantMatrix.from_dense(ring6.S).is_hermitian(1e-10)
    # neighbours overlap, and more than next-nearest neighbours
    assert abs(S[0, 1]) > abs(S[0, 2]) > 0


def test_circulant_solver_matches_dense_oracle(ring6):
    solution = solve_ring(ring6)
    assert solution.method == "circulant"
    assert solution.energies.size == 6
    assert solution.residual < 1e-8
    assert solution.solver_discrepancy < 1e-8
    oracle = scipy.linalg.eigh(ring6.H, ring6.S, eigvals_only=True)
    np.testing.assert_allclose(solution.sorted_energies(), oracle, atol=1e-8)
    assert min(solution.overlap_eigenvalues) > 0


def test_fourier_partners_are_degenerate(ring6):
    """A real symmetric ring pencil gives E_j = E_{n-j}."""
    energies = solve_ring(ring6).energies
    for j in range(1, 6):
        assert energies[j] == pytest.approx(energies[6 - j], abs=1e-10)


def test_lowest_fourier_mode_is_uniform(ring6):
    column = solve_ring(ring6).coefficients[:, 0]
    np.testing.assert_allclose(column / np.linalg.norm(column), np.ones(6) / np.sqrt(6), atol=1e-12)


def test_bonding_state_lies_below_single_well(ring6, ring6_basis):
    energies = solve_ring(ring6).sorted_energies()
    assert energies[0] < ring6_basis.state.W


def test_decoupled_ring_is_degenerate():
    """Wells 20 nm apart barely interact: an n-fold level at the single-well energy."""
    basis = build_basis(WellGeometry(width=1.0, circumference=60.0, V0=800.0), 3)
    energies = solve_ring(assemble_matrices(basis)).sorted_energies()
    assert np.ptp(energies) < 1e-6
    np.testing.assert_allclose(energies, basis.state.W, atol=1e-6)


def test_potential_shift_moves_every_energy(ring6):
    """Shifting the whole potential by V' adds V' to each ring energy."""
    geometry = WellGeometry(width=1.0, circumference=18.0, V0=800.0, Vshift=800.0)
    shifted = solve_ring(assemble_matrices(build_basis(geometry, 6))).sorted_energies()
    plain = solve_ring(ring6).sorted_energies()
    np.testing.assert_allclose(shifted - plain, 800.0, atol=1e-10)


def test_shift_matrices(ring6):
    plain = solve_ring(ring6).sorted_energies()
    shifted = solve_ring(shift_matrices(ring6, 12.5)).sorted_energies()
    np.testing.assert_allclose(shifted - plain, 12.5, atol=1e-9)


def test_nearest_neighbor_truncation(ring6_basis):
    matrices = assemble_matrices(ring6_basis, truncate_nn=True)
    mask = nearest_neighbor_mask(6)
    assert matrices.truncated
    assert np.all(matrices.H[~mask] == 0)
    assert np.all(matrices.S[~mask] == 0)
    assert 0 < matrices.truncation_error < 1e-2


def test_nearest_neighbor_mask():
    mask = nearest_neighbor_mask(5)
    assert mask.sum() == 15
    assert mask[0, 4] and mask[4, 0] and not mask[0, 2]
    assert nearest_neighbor_mask(3).all()


def test_dense_fallback_for_non_circulant_pencil():
    H = np.diag([1.0, 2.0, 3.0]).astype(complex)
    S = np.eye(3, dtype=complex)
    solution = solve_ring(RingMatrices(H=H, S=S))
    assert solution.method == "dense"
    np.testing.assert_allclose(solution.energies, [1.0, 2.0, 3.0])


def test_overcomplete_basis_is_reported():
    S = np.ones((3, 3), dtype=complex)
    H = np.eye(3, dtype=complex)
    with pytest.raises(OvercompleteBasisError) as info:
        solve_ring(RingMatrices(H=H, S=S))
    assert isinstance(info.value, NonPositiveOverlapError)
    assert len(info.value.overlap_eigenvalues) == 3


def test_invalid_ring():
    with pytest.raises(InvalidSizeError):
        build_basis(WellGeometry(width=1.0, circumference=6.0, V0=800.0), 2)
    with pytest.raises(DomainError):
        build_basis(WellGeometry(width=1.0, circumference=2.4, V0=800.0), 3)
