"""n identical wells spaced equally on a circle of length l = n a.

The ring wavefunction is expanded in translates psi_nu(x) = psi(x - nu a) of the lowest
symmetric single-well state, which leads to the generalized eigenproblem H a = E S a with

    S[mu, nu] = int psi_mu psi_nu
    H[mu, nu] = int psi_mu (T + V_ring) psi_nu = W S[mu, nu] - V0 sum_{rho != nu} int_{well rho} psi_mu psi_nu

using (T + V_nu) psi_nu = W psi_nu: the ring potential differs from the potential of well nu
only by -V0 inside the other wells, so H needs no numerical second derivative.
"""
import logging
from dataclasses import dataclass, field, replace
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate

from .circulant import (
    CirculantMatrix,
    OVERLAP_TOL,
    solve_generalized_circulant,
    solve_generalized_dense,
)
from .errors import (
    EmptyBasisError,
    IntegrationError,
    InvalidSizeError,
    NonPositiveOverlapError,
    OvercompleteBasisError,
    DomainError,
)
from .quantum_well import (
    BoundState,
    DEFAULT_GRID_POINTS,
    SymmetricWavefunction,
    WellGeometry,
    find_bound_states,
    symmetric_wavefunction,
)

logger = logging.getLogger(__name__)

QUAD_EPSABS = 1e-10
CIRCULANT_TOL = 1e-8


@dataclass(frozen=True)
class RingBasis:
    """Translated copies of one normalized symmetric single-well state"""
    n: int
    geometry: WellGeometry
    state: BoundState
    wavefunctions: List[SymmetricWavefunction]

    @property
    def spacing(self) -> float:
        return self.geometry.circumference / self.n

    def psi(self, nu: int, x):
        return self.wavefunctions[nu % self.n](x)

    def well_segments(self, rho: int) -> List[Tuple[float, float]]:
        """Sub-intervals of [0, l] covered by well rho."""
        l = self.geometry.circumference
        half = self.geometry.width / 2
        low = (rho * self.spacing - half) % l
        high = low + self.geometry.width
        if high <= l:
            return [(low, high)]
        return [(low, l), (0.0, high - l)]

    def breakpoints(self) -> np.ndarray:
        l = self.geometry.circumference
        half = self.geometry.width / 2
        centers = np.arange(self.n) * self.spacing
        points = np.concatenate([[0.0, l], (centers - half) % l, (centers + half) % l])
        return np.unique(points)


@dataclass
class RingMatrices:
    """Assembled Hamiltonian (meV) and overlap matrices"""
    H: np.ndarray
    S: np.ndarray
    hermiticity_error: float = 0.0
    circulant_deviation: float = 0.0
    truncated: bool = False
    truncation_error: float = 0.0
    quadrature_error: float = 0.0

    @property
    def n(self) -> int:
        return self.H.shape[0]


@dataclass
class RingSolution:
    """Generalized eigenpairs; column j of coefficients belongs to energies[j]"""
    energies: np.ndarray
    coefficients: np.ndarray
    method: str
    residual: float
    solver_discrepancy: Optional[float] = None
    overlap_eigenvalues: List[float] = field(default_factory=list)

    def sorted_energies(self) -> np.ndarray:
        return np.sort(self.energies)


def build_basis(geometry: WellGeometry, n: int,
                grid_points: int = DEFAULT_GRID_POINTS) -> RingBasis:
    """Basis of n translates of the lowest symmetric state; geometry.circumference is n a."""
    if n < 3:
        raise InvalidSizeError(f"a ring needs at least 3 wells, got {n}")
    spacing = geometry.circumference / n
    if not geometry.width < spacing:
        raise DomainError(f"wells of width {geometry.width} nm overlap at spacing {spacing} nm")

    states = [s for s in find_bound_states(geometry, grid_points=grid_points) if s.symmetric]
    if not states:
        raise EmptyBasisError(
            f"no symmetric bound state for L={geometry.width} nm, V0={geometry.V0} meV"
        )
    ground = states[0]
    psi0 = symmetric_wavefunction(ground, geometry)
    wavefunctions = [psi0.translated(nu * spacing) for nu in range(n)]
    logger.info(f"Built ring basis: n={n}, a={spacing} nm, W={ground.W:.6f} meV")
    return RingBasis(n=n, geometry=geometry, state=ground, wavefunctions=wavefunctions)


def _integrate(func, segments, epsabs: float) -> Tuple[float, float]:
    total, error = 0.0, 0.0
    for low, high in segments:
        if high <= low:
            continue
        value, err = integrate.quad(func, low, high, epsabs=epsabs, epsrel=1e-12, limit=200)
        total += value
        error += err
    return total, error


def nearest_neighbor_mask(n: int) -> np.ndarray:
    distance = np.abs(np.subtract.outer(np.arange(n), np.arange(n))) % n
    return (distance == 0) | (distance == 1) | (distance == n - 1)


def assemble_matrices(basis: RingBasis, truncate_nn: bool = False,
                      epsabs: float = QUAD_EPSABS) -> RingMatrices:
    """Overlap and Hamiltonian matrices by adaptive quadrature over [0, l)."""
    n = basis.n
    points = basis.breakpoints()
    panels = list(zip(points[:-1], points[1:]))
    panel_tol = epsabs / (2 * len(panels))
    psi = basis.wavefunctions

    S = np.zeros((n, n))
    residual = np.zeros((n, n))
    worst = 0.0
    for mu in range(n):
        for nu in range(mu, n):
            value, err = _integrate(lambda x: psi[mu](x) * psi[nu](x), panels, panel_tol)
            S[mu, nu] = S[nu, mu] = value
            worst = max(worst, err)
    for mu in range(n):
        for nu in range(n):
            segments = [seg for rho in range(n) if rho != nu for seg in basis.well_segments(rho)]
            value, err = _integrate(lambda x: psi[mu](x) * psi[nu](x), segments, panel_tol)
            residual[mu, nu] = value
            worst = max(worst, err)
    if worst > epsabs:
        raise IntegrationError(f"matrix entry quadrature error {worst:.3e} exceeds {epsabs:.1e}",
                               achieved=worst)

    H = basis.state.W * S - basis.geometry.V0 * residual
    hermiticity_error = float(np.max(np.abs(H - H.T)))
    H = (H + H.T) / 2

    deviation = max(CirculantMatrix.from_dense(H).deviation(H),
                    CirculantMatrix.from_dense(S).deviation(S))

    truncation_error = 0.0
    if truncate_nn:
        mask = nearest_neighbor_mask(n)
        truncation_error = float(max(np.max(np.abs(H[~mask]), initial=0.0),
                                     np.max(np.abs(S[~mask]), initial=0.0)))
        H = np.where(mask, H, 0.0)
        S = np.where(mask, S, 0.0)
        if truncation_error > 1e-6:
            logger.warning(f"Nearest-neighbor truncation drops entries up to {truncation_error:.3e}")

    logger.info(f"Assembled {n}x{n} ring matrices: Hermiticity error {hermiticity_error:.2e}, "
                f"circulant deviation {deviation:.2e}")
    return RingMatrices(H=H.astype(complex), S=S.astype(complex),
                        hermiticity_error=hermiticity_error,
                        circulant_deviation=float(deviation),
                        truncated=truncate_nn, truncation_error=truncation_error,
                        quadrature_error=worst)


def shift_matrices(matrices: RingMatrices, T: float) -> RingMatrices:
    """Add a constant T to the potential: H <- H + T S."""
    return replace(matrices, H=matrices.H + T * matrices.S)


def solve_ring(matrices: RingMatrices, circulant_tol: float = CIRCULANT_TOL,
               overlap_tol: float = OVERLAP_TOL) -> RingSolution:
    """Solve H a = E S a, through the circulant closed form when the pencil is circulant."""
    H, S = matrices.H, matrices.S
    try:
        dense = solve_generalized_dense(H, S, overlap_tol=overlap_tol)
    except NonPositiveOverlapError as e:
        raise OvercompleteBasisError(
            f"overcomplete basis: {e}", overlap_eigenvalues=e.overlap_eigenvalues
        ) from e
    overlap_eigenvalues = np.linalg.eigvalsh(S).tolist()

    H_circ = CirculantMatrix.from_dense(H)
    S_circ = CirculantMatrix.from_dense(S)
    deviation = max(H_circ.deviation(H), S_circ.deviation(S))
    if deviation > circulant_tol:
        logger.warning(f"Pencil is not circulant (deviation {deviation:.2e}); using dense solver")
        return RingSolution(energies=dense.Lambda, coefficients=dense.Phi, method="dense",
                            residual=dense.residual(H, S), overlap_eigenvalues=overlap_eigenvalues)

    circulant = solve_generalized_circulant(H_circ, S_circ, overlap_tol=overlap_tol)
    discrepancy = float(np.max(np.abs(np.sort(circulant.Lambda) - dense.Lambda)))
    if discrepancy > circulant_tol:
        logger.warning(f"Circulant and dense spectra differ by {discrepancy:.2e}")
    return RingSolution(energies=circulant.Lambda, coefficients=circulant.Phi, method="circulant",
                        residual=circulant.residual(H, S), solver_discrepancy=discrepancy,
                        overlap_eigenvalues=overlap_eigenvalues)
