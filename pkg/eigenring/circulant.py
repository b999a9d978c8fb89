"""Circulant matrix algebra.

A circulant matrix is stored by its first row c, with entry (mu, nu) = c[(nu - mu) mod n].
In the overlap-matrix layout [1, s_2, ..., s_n] the zero-based first row is
c[0] = 1 and c[m] = s_{m+1}.

Every circulant matrix is diagonalized by the Fourier vectors
v_j = (1, w_j, ..., w_j^(n-1)) / sqrt(n), w_j = exp(2 pi i j / n), with eigenvalue
lambda_j = sum_m c[m] w_j^m, whatever the entries are.
"""
import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import InvalidSizeError, NonPositiveOverlapError

logger = logging.getLogger(__name__)

HERMITIAN_TOL = 1e-12
OVERLAP_TOL = 1e-10


@dataclass(frozen=True)
class CirculantMatrix:
    """n x n circulant matrix given by its first row"""
    first_row: np.ndarray

    def __post_init__(self):
        row = np.asarray(self.first_row, dtype=complex).ravel()
        if row.size < 1:
            raise InvalidSizeError("a circulant matrix needs at least one entry")
        if not np.all(np.isfinite(row)):
            raise InvalidSizeError("circulant entries must be finite")
        object.__setattr__(self, "first_row", row)

    @property
    def n(self) -> int:
        return self.first_row.size

    def dense(self) -> np.ndarray:
        # scipy's circulant() is built from the first column
        return scipy.linalg.circulant(self.first_row).T

    def entry(self, mu: int, nu: int) -> complex:
        return complex(self.first_row[(nu - mu) % self.n])

    def is_hermitian(self, tol: float = HERMITIAN_TOL) -> bool:
        mirrored = np.conj(self.first_row[(-np.arange(self.n)) % self.n])
        return bool(np.max(np.abs(self.first_row - mirrored)) <= tol)

    def matvec(self, z: np.ndarray) -> np.ndarray:
        return self.dense() @ np.asarray(z, dtype=complex)

    def deviation(self, matrix: np.ndarray) -> float:
        """Largest entrywise distance between a dense matrix and this circulant."""
        return float(np.max(np.abs(np.asarray(matrix) - self.dense())))

    @classmethod
    def from_dense(cls, matrix: np.ndarray) -> "CirculantMatrix":
        """Closest circulant: average each cyclic diagonal of a square matrix."""
        matrix = np.asarray(matrix, dtype=complex)
        if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
            raise InvalidSizeError(f"expected a square matrix, got shape {matrix.shape}")
        n = matrix.shape[0]
        rows = np.arange(n)
        first_row = np.array([matrix[rows, (rows + m) % n].mean() for m in range(n)])
        return cls(first_row)


@dataclass(frozen=True)
class GeneralizedEigenSolution:
    """Solution of H Phi = S Phi Lambda with Phi^* S Phi = I"""
    Phi: np.ndarray
    Lambda: np.ndarray

    def residual(self, H: np.ndarray, S: np.ndarray) -> float:
        return float(np.max(np.abs(H @ self.Phi - S @ self.Phi * self.Lambda)))

    def orthonormality_error(self, S: np.ndarray) -> float:
        gram = self.Phi.conj().T @ S @ self.Phi
        return float(np.max(np.abs(gram - np.eye(gram.shape[0]))))

    def sorted(self) -> "GeneralizedEigenSolution":
        order = np.argsort(self.Lambda, kind="stable")
        return GeneralizedEigenSolution(Phi=self.Phi[:, order], Lambda=self.Lambda[order])


def fourier_eigenvectors(n: int) -> np.ndarray:
    """Unitary matrix Phi_S whose column j is v_j."""
    if n < 1:
        raise InvalidSizeError(f"n must be positive, got {n}")
    powers = np.outer(np.arange(n), np.arange(n))
    return np.exp(2j * np.pi * powers / n) / np.sqrt(n)


def circulant_eigenvalues(c: CirculantMatrix) -> np.ndarray:
    """lambda_j = sum_m c[m] w_j^m, real-clamped when c is Hermitian."""
    n = c.n
    eigenvalues = np.sqrt(n) * (c.first_row @ fourier_eigenvectors(n))
    if c.is_hermitian():
        imag = np.max(np.abs(eigenvalues.imag))
        if imag > HERMITIAN_TOL:
            logger.warning(f"Hermitian circulant has eigenvalue imaginary residue {imag:.3e}")
        eigenvalues = eigenvalues.real.astype(complex)
    return eigenvalues


def solve_generalized_circulant(H: CirculantMatrix, S: CirculantMatrix,
                                overlap_tol: float = OVERLAP_TOL) -> GeneralizedEigenSolution:
    """Solve H Phi = S Phi Lambda for a Hermitian circulant pencil.

    Lambda = Lambda_H / Lambda_S and Phi = Phi_S Lambda_S^(-1/2), in Fourier order j = 0..n-1.
    """
    if H.n != S.n:
        raise InvalidSizeError(f"pencil sizes differ: H is {H.n}, S is {S.n}")
    lambda_s = circulant_eigenvalues(S).real
    if np.any(lambda_s <= overlap_tol):
        raise NonPositiveOverlapError(
            f"overlap matrix is not positive definite: min eigenvalue {lambda_s.min():.3e}",
            overlap_eigenvalues=lambda_s.tolist(),
        )
    lambda_h = circulant_eigenvalues(H).real
    phi = fourier_eigenvectors(H.n) / np.sqrt(lambda_s)
    return GeneralizedEigenSolution(Phi=phi, Lambda=lambda_h / lambda_s)


def solve_generalized_dense(H: np.ndarray, S: np.ndarray,
                            overlap_tol: float = OVERLAP_TOL) -> GeneralizedEigenSolution:
    """Dense whitening solver: diagonalize S^(-1/2) H S^(-1/2), eigenvalues ascending."""
    H = np.asarray(H, dtype=complex)
    S = np.asarray(S, dtype=complex)
    s_values, s_vectors = scipy.linalg.eigh(S)
    if np.any(s_values <= overlap_tol):
        raise NonPositiveOverlapError(
            f"overlap matrix is not positive definite: min eigenvalue {s_values.min():.3e}",
            overlap_eigenvalues=s_values.tolist(),
        )
    whitening = s_vectors / np.sqrt(s_values)
    whitened = whitening.conj().T @ H @ whitening
    whitened = (whitened + whitened.conj().T) / 2
    values, vectors = scipy.linalg.eigh(whitened)
    return GeneralizedEigenSolution(Phi=whitening @ vectors, Lambda=values)


def is_circulant(matrix: np.ndarray, tol: float) -> bool:
    return CirculantMatrix.from_dense(matrix).deviation(matrix) <= tol


def overlap_first_row(s: np.ndarray, leading: complex = 1.0) -> np.ndarray:
    """Map the 1-based overlap layout (s_2, ..., s_n) to a zero-based first row."""
    return np.concatenate([[leading], np.asarray(s, dtype=complex)])
