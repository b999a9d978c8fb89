"""Tests for the correspondence between M(theta, lambda) and the ring Hamiltonian."""
import math

import numpy as np
import pytest

from eigenring.correspondence import (
    correspondence_from_entries,
    full_correspondence,
    rotated_offdiagonals,
    rotation_params,
    shift_T,
    target_entries,
    theta_from_diagonal,
)
from eigenring.errors import (
    CorrespondenceError,
    DegenerateRotationError,
    DomainError,
    NoRealAngleError,
    NoRealSolutionError,
)
from eigenring.polygon_transform import TransformParams, build_transform_matrix
from eigenring.ring_system import RingMatrices, assemble_matrices, shift_matrices

THETA = 2 * math.pi / 5
W1_EXAMPLE = 5.23607
W2_EXAMPLE = complex(-2.11803, 1.53884)
# raw pair recovered from alpha = 1.6013, beta = -0.57434 and W2 through the two defining relations
H11_EXAMPLE = -0.83662
H12_EXAMPLE = -0.47397


def synthetic_ring(n=6, h11=H11_EXAMPLE, h12=H12_EXAMPLE):
    row = np.zeros(n)
    row[0], row[1], row[-1] = h11, h12, h12
    H = np.array([np.roll(row, mu) for mu in range(n)], dtype=complex)
    return RingMatrices(H=H, S=np.eye(n, dtype=complex), truncated=True)


def test_target_entries_example():
    W1, W2 = target_entries(THETA, 0.5)
    assert W1 == pytest.approx(W1_EXAMPLE, abs=1e-5)
    assert W2 == pytest.approx(W2_EXAMPLE, abs=1e-5)


def test_target_entries_degenerate_limit():
    W1, W2 = target_entries(0.7, 1 - 1e-9)
    assert W1 == pytest.approx(1.0, abs=1e-6)
    assert abs(W2) < 1e-6


def test_target_entries_domain():
    with pytest.raises(DomainError):
        target_entries(0.0, 0.5)
    with pytest.raises(DomainError):
        target_entries(1.0, 0.0)


def test_transform_matrix_carries_target_entries():
    """Diagonal of M is W1, sub-diagonal W2 and super-diagonal conj(W2)."""
    for theta, lam in [(THETA, 0.5), (0.3, 0.2), (1.4, 0.8)]:
        W1, W2 = target_entries(theta, lam)
        M = build_transform_matrix(TransformParams(theta, lam), 6)
        assert M.entry(2, 2) == pytest.approx(W1, abs=1e-12 * W1)
        assert M.entry(1, 0) == pytest.approx(W2, abs=1e-12 * W1)
        assert M.entry(0, 1) == pytest.approx(W2.conjugate(), abs=1e-12 * W1)


def test_shift_T():
    W1, _ = target_entries(THETA, 0.5)
    assert shift_T(W1, THETA, 0.5) == 0.0
    assert shift_T(0.0, THETA, 0.5) == W1
    assert shift_T(H11_EXAMPLE, THETA, 0.5) == pytest.approx(6.07269, abs=1e-5)
    for H11 in (-620.0, -3.5, 12.0):
        assert shift_T(H11, THETA, 0.5) + H11 == pytest.approx(W1, abs=1e-12)


def test_theta_round_trip():
    for lam in (0.1, 0.5, 0.9):
        for theta in np.linspace(0.01, 1.55, 60):
            W1, _ = target_entries(float(theta), lam)
            assert theta_from_diagonal(W1, lam) == pytest.approx(theta, abs=1e-10)


def test_theta_from_diagonal_examples():
    assert theta_from_diagonal(0.5, 0.5) == 0.0
    assert theta_from_diagonal(0.8 ** 2 + 0.2 ** 2, 0.2) == pytest.approx(0.0, abs=1e-7)
    assert theta_from_diagonal(W1_EXAMPLE, 0.5) == pytest.approx(THETA, abs=1e-6)
    with pytest.raises(NoRealAngleError):
        theta_from_diagonal(0.4, 0.5)


def test_rotation_params_example():
    alpha, beta = rotation_params(W2_EXAMPLE, H11_EXAMPLE, H12_EXAMPLE)
    assert alpha == pytest.approx(1.6013, abs=1e-3)
    assert beta == pytest.approx(-0.57434, abs=1e-3)


def test_rotation_identity():
    for H11 in (-3.0, 0.7):
        alpha, beta = rotation_params(complex(2.4, 0.0), H11, 1.2)
        assert alpha == pytest.approx(1.0)
        assert beta == 0.0


def test_rotation_defining_relations():
    rng = np.random.default_rng(17)
    for _ in range(200):
        W2 = complex(rng.normal(), rng.normal())
        H11, H12 = rng.uniform(0.2, 3.0, size=2) * rng.choice([-1, 1], size=2)
        alpha, beta = rotation_params(W2, H11, H12)
        assert alpha ** 2 - beta ** 2 == pytest.approx(W2.real / (2 * H12), abs=1e-10)
        assert alpha * beta == pytest.approx(W2.imag / (2 * H11), abs=1e-10)

        alpha, beta = rotation_params(W2, H11, H12, convention="exact")
        block = np.array([[H11, H12], [H12, H11]])
        _, H21 = rotated_offdiagonals(alpha, beta, block)
        assert abs(H21 - W2) < 1e-10


def test_halved_convention_closes_half_the_real_part():
    """The halved rotation matches Im(W2) and only half of Re(W2)."""
    result = correspondence_from_entries(THETA, 0.5, H11_EXAMPLE, H12_EXAMPLE)
    W2 = result.W2
    assert result.rotated_H21 == pytest.approx(complex(W2.real / 2, W2.imag), abs=1e-10)
    assert result.closure_residual == pytest.approx(abs(W2.real) / 2, abs=1e-10)


def test_exact_convention_closes_on_w2():
    result = correspondence_from_entries(THETA, 0.5, H11_EXAMPLE, H12_EXAMPLE, convention="exact")
    assert abs(result.rotated_H21 - result.W2) < 1e-10
    assert result.closure_residual < 1e-10
    assert result.rotated_H12 == pytest.approx(result.W2.conjugate(), abs=1e-10)


def test_rotation_failures():
    with pytest.raises(NoRealSolutionError):
        rotation_params(W2_EXAMPLE, H11_EXAMPLE, 0.0)
    with pytest.raises(NoRealSolutionError):
        rotation_params(W2_EXAMPLE, 0.0, H12_EXAMPLE)
    with pytest.raises(DegenerateRotationError):
        rotation_params(complex(-1.0, 0.0), 1.0, 1.0)
    with pytest.raises(DomainError):
        rotation_params(W2_EXAMPLE, H11_EXAMPLE, H12_EXAMPLE, convention="other")


def test_rotated_offdiagonals():
    H = np.array([[-0.8, 0.3], [0.3, -0.8]])
    assert rotated_offdiagonals(1.0, 0.0, H) == (pytest.approx(0.3), pytest.approx(0.3))
    rng = np.random.default_rng(5)
    for _ in range(100):
        h11, h12 = rng.normal(size=2)
        alpha, beta = rng.normal(size=2)
        H12, H21 = rotated_offdiagonals(alpha, beta, np.array([[h11, h12], [h12, h11]]))
        assert abs(H12 - H21.conjugate()) < 1e-14


def test_full_correspondence_synthetic_ring():
    result = full_correspondence(THETA, 0.5, synthetic_ring())
    assert result.alpha == pytest.approx(1.6013, abs=1e-3)
    assert result.beta == pytest.approx(-0.57434, abs=1e-3)
    assert result.T == pytest.approx(6.07269, abs=1e-5)
    assert result.rotated_norm == pytest.approx(result.alpha ** 2 + result.beta ** 2)
    assert result.to_dict()["W2"] == {"re": result.W2.real, "im": result.W2.imag}


def test_full_correspondence_zero_coupling():
    with pytest.raises(NoRealSolutionError):
        full_correspondence(THETA, 0.5, synthetic_ring(h12=0.0))


def test_full_correspondence_requires_tridiagonal():
    ring = synthetic_ring()
    H = ring.H.copy()
    H[0, 2] = H[2, 0] = 0.01
    with pytest.raises(CorrespondenceError):
        full_correspondence(THETA, 0.5, RingMatrices(H=H, S=ring.S))


def test_full_correspondence_on_assembled_ring(ring6_basis):
    matrices = assemble_matrices(ring6_basis, truncate_nn=True)
    result = full_correspondence(THETA, 0.5, matrices, convention="exact")
    assert result.T + result.H11 == pytest.approx(result.W1, abs=1e-12)
    shifted = shift_matrices(matrices, result.T)
    assert shifted.H[0, 0].real == pytest.approx(result.W1, abs=1e-6)
    assert result.closure_residual < 1e-10
