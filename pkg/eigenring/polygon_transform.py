"""Polygon transformation by similar triangles on every side.

For theta in (0, pi/2), lambda in (0, 1) and w = lambda + i (1 - lambda) tan(theta),
one step maps z to M z with the tridiagonal-cyclic Hermitian circulant

    M[mu, mu]             = |1 - w|^2 + |w|^2
    M[(nu + 1) % n, nu]   = w (1 - conj(w))
    M[mu, (mu + 1) % n]   = conj(w) (1 - w)

Every row of M sums to one, so the centroid is preserved, and its eigenvectors
are the Fourier eigenpolygons f_k with (f_k)_mu = r^(k mu) / sqrt(n), r = exp(2 pi i / n).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np

from .circulant import CirculantMatrix, fourier_eigenvectors
from .errors import (
    AmbiguousDominanceError,
    ConvergenceError,
    DomainError,
    InvalidSizeError,
    IterationTimeout,
)

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DEFAULT_MAX_STEPS = 100_000
THRESHOLD_TOL = 1e-12


@dataclass(frozen=True)
class Polygon:
    """Ordered complex vertex vector"""
    vertices: np.ndarray

    def __post_init__(self):
        vertices = np.asarray(self.vertices, dtype=complex).ravel()
        if vertices.size < 3:
            raise InvalidSizeError(f"a polygon needs at least 3 vertices, got {vertices.size}")
        if not np.all(np.isfinite(vertices)):
            raise DomainError("polygon vertices must be finite")
        object.__setattr__(self, "vertices", vertices)

    @property
    def n(self) -> int:
        return self.vertices.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.vertices))


@dataclass(frozen=True)
class TransformParams:
    """Transformation parameters (theta, lambda) and the derived w"""
    theta: float
    lam: float

    def __post_init__(self):
        if not (0.0 < self.theta < math.pi / 2):
            raise DomainError(f"theta must lie in (0, pi/2), got {self.theta}")
        if not (0.0 < self.lam < 1.0):
            raise DomainError(f"lambda must lie in (0, 1), got {self.lam}")

    @property
    def w(self) -> complex:
        return complex(self.lam, (1.0 - self.lam) * math.tan(self.theta))


@dataclass(frozen=True)
class EigenpolygonDecomposition:
    """Coefficients c_k of a polygon in the Fourier eigenpolygon basis"""
    coefficients: np.ndarray
    basis: np.ndarray

    @property
    def n(self) -> int:
        return self.coefficients.size

    def component(self, k: int) -> np.ndarray:
        """The eigenpolygon summand c_k f_k."""
        return self.coefficients[k] * self.basis[:, k]

    def reconstruct(self) -> np.ndarray:
        return self.basis @ self.coefficients

    def mass_fractions(self) -> np.ndarray:
        """|c_k|^2 / sum |c_j|^2, which equals |c_k|^2 / ||z||^2 for the unitary basis."""
        weights = np.abs(self.coefficients) ** 2
        total = weights.sum()
        if total == 0.0:
            return np.zeros_like(weights)
        return weights / total

    def residual(self, polygon: Polygon) -> float:
        return float(np.max(np.abs(polygon.vertices - self.reconstruct())))


@dataclass(frozen=True)
class Dominance:
    """Index of the largest eigenvalue eta_k, and how it was determined"""
    index: int
    eta: float
    numeric: bool


@dataclass
class ConvergenceReport:
    steps: int = 0
    converged: bool = False
    residuals: List[float] = field(default_factory=list)
    dominant_index: Optional[int] = None
    dominant_mass: float = 0.0
    eigenvalue_estimate: float = float("nan")

    def to_dict(self):
        return {
            "steps": self.steps,
            "converged": self.converged,
            "dominant_index": self.dominant_index,
            "dominant_mass": self.dominant_mass,
            "eigenvalue_estimate": self.eigenvalue_estimate,
            "final_residual": self.residuals[-1] if self.residuals else None,
        }


def _check_size(n: int) -> None:
    if n < 3:
        raise InvalidSizeError(f"n must be at least 3, got {n}")


def build_transform_matrix(params: TransformParams, n: int) -> CirculantMatrix:
    _check_size(n)
    w = params.w
    first_row = np.zeros(n, dtype=complex)
    first_row[0] = abs(1 - w) ** 2 + abs(w) ** 2
    first_row[1] = w.conjugate() * (1 - w)
    # (mu, nu) = (0, n - 1) is the sub-diagonal entry wrapped around
    first_row[n - 1] = w * (1 - w.conjugate())
    return CirculantMatrix(first_row)


def eigenvalues_eta(params: TransformParams, n: int) -> np.ndarray:
    """eta_k = |1 - conj(w) + r^k conj(w)|^2 for k = 0..n-1."""
    _check_size(n)
    w = params.w
    r_k = np.exp(2j * np.pi * np.arange(n) / n)
    eta = np.abs(1 - w.conjugate() + r_k * w.conjugate()) ** 2
    expanded = abs(1 - w) ** 2 + abs(w) ** 2 + 2 * np.real(r_k * w.conjugate() * (1 - w))
    gap = float(np.max(np.abs(eta - expanded)))
    if gap > 1e-12 * max(1.0, float(np.max(eta))):
        logger.warning(f"eta forms disagree by {gap:.3e}")
    return eta


def dominance_thresholds(n: int) -> List[float]:
    """theta_{-1} = 0, theta_k = pi (2k + 1) / (2n) for interior k, theta_{floor(n/2)} = pi/2."""
    _check_size(n)
    half = n // 2
    interior = [math.pi * (2 * k + 1) / (2 * n) for k in range(half)]
    return [0.0] + interior + [math.pi / 2]


def dominant_index(params: TransformParams, n: int, threshold_tol: float = THRESHOLD_TOL) -> Dominance:
    """Index k of the dominant eigenvalue.

    For lambda = 1/2 the interval rule theta in (theta_{k-1}, theta_k) is used;
    otherwise the numeric argmax of eta_k is returned with numeric=True.
    """
    eta = eigenvalues_eta(params, n)
    if not math.isclose(params.lam, 0.5, rel_tol=0.0, abs_tol=1e-15):
        k = int(np.argmax(eta))
        logger.warning(f"lambda={params.lam} != 1/2: dominant index {k} taken from numeric argmax")
        return Dominance(index=k, eta=float(eta[k]), numeric=True)

    thresholds = dominance_thresholds(n)
    for k, theta_k in enumerate(thresholds[1:-1]):
        if abs(params.theta - theta_k) <= threshold_tol:
            raise AmbiguousDominanceError(
                f"theta={params.theta} sits on threshold theta_{k}={theta_k}: "
                f"eta_{k} and eta_{k + 1} coincide",
                threshold_index=k,
            )
    # thresholds[k] is theta_{k-1}
    k = next(i for i in range(len(thresholds) - 1)
             if thresholds[i] < params.theta < thresholds[i + 1])
    return Dominance(index=k, eta=float(eta[k]), numeric=False)


def centroid(polygon: Polygon) -> complex:
    return complex(polygon.vertices.mean())


def decompose(polygon: Polygon) -> EigenpolygonDecomposition:
    """c_k = <f_k, z>, so that z = sum_k c_k f_k."""
    basis = fourier_eigenvectors(polygon.n)
    coefficients = basis.conj().T @ polygon.vertices
    return EigenpolygonDecomposition(coefficients=coefficients, basis=basis)


def apply_transform(polygon: Polygon, params: TransformParams) -> Polygon:
    return Polygon(build_transform_matrix(params, polygon.n).matvec(polygon.vertices))


def iterate_to_eigenshape(polygon: Polygon, params: TransformParams,
                          max_steps: int = DEFAULT_MAX_STEPS,
                          tol: float = DEFAULT_TOL) -> Tuple[Polygon, ConvergenceReport]:
    """Power iteration z <- M z / ||M z|| until the direction changes by less than tol.

    Raises IterationTimeout after max_steps, and ConvergenceError when the limit is not
    concentrated on the dominant eigenpolygon (zero dominant component in the input).
    """
    n = polygon.n
    matrix = build_transform_matrix(params, n).dense()
    dominance = dominant_index(params, n)
    report = ConvergenceReport(dominant_index=dominance.index)

    norm = polygon.norm()
    if norm == 0.0:
        raise ConvergenceError("the zero polygon has no direction", report=report)
    current = polygon.vertices / norm

    for step in range(1, max_steps + 1):
        image = matrix @ current
        image_norm = float(np.linalg.norm(image))
        following = image / image_norm
        residual = float(np.linalg.norm(following - current))
        report.steps = step
        report.residuals.append(residual)
        report.eigenvalue_estimate = float(np.real(np.vdot(current, image)))
        current = following
        if residual < tol:
            report.converged = True
            break

    limit = Polygon(current)
    report.dominant_mass = float(decompose(limit).mass_fractions()[dominance.index])
    if not report.converged:
        raise IterationTimeout(
            f"direction did not settle below {tol} within {max_steps} steps "
            f"(last residual {report.residuals[-1]:.3e})",
            report=report,
        )
    if report.dominant_mass < 1.0 - max(tol, 1e-8):
        raise ConvergenceError(
            f"limit has only {report.dominant_mass:.6f} of its mass on eigenpolygon "
            f"{dominance.index}; the input has no dominant component",
            report=report,
        )
    logger.info(f"Converged to eigenpolygon {dominance.index} in {report.steps} steps")
    return limit, report


def regular_polygon(n: int, radius: float = 1.0, center: complex = 0.0) -> Polygon:
    """Counterclockwise regular n-gon, the k=1 eigenpolygon direction."""
    _check_size(n)
    return Polygon(center + radius * np.exp(2j * np.pi * np.arange(n) / n))


def random_polygon(n: int, seed: int) -> Polygon:
    """Vertices with real and imaginary parts uniform on [-1, 1] from numpy's PCG64 generator."""
    _check_size(n)
    rng = np.random.default_rng(seed)
    parts = rng.uniform(-1.0, 1.0, size=(2, n))
    return Polygon(parts[0] + 1j * parts[1])
