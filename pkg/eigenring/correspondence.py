"""Matching the polygon transformation M(theta, lambda) to a ring Hamiltonian.

The ring matrix H becomes M once its diagonal is shifted onto W1 = |1 - w|^2 + |w|^2 and
the neighbouring well states are mixed as psi'_1 = alpha psi_1 + i beta psi_2 so that the
rotated off-diagonal H'_21 carries the complex phase of W2 = w (1 - conj(w)).
"""
import logging
import math
from dataclasses import dataclass
from typing import Any, Dict, Tuple

import numpy as np

from .errors import (
    CorrespondenceError,
    DegenerateRotationError,
    DomainError,
    NoRealAngleError,
    NoRealSolutionError,
)
from .polygon_transform import TransformParams
from .ring_system import RingMatrices, nearest_neighbor_mask
from .utils import complex_to_json

logger = logging.getLogger(__name__)

CONVENTIONS = ("halved", "exact")
ENTRY_TOL = 1e-12
RING_TOL = 1e-8


@dataclass(frozen=True)
class CorrespondenceResult:
    """Parameters carrying a ring Hamiltonian onto M(theta, lambda)"""
    W1: float
    W2: complex
    T: float
    theta: float
    lam: float
    alpha: float
    beta: float
    H11: float
    H12: float
    convention: str = "halved"
    rotated_H12: complex = 0j
    rotated_H21: complex = 0j
    closure_residual: float = 0.0
    rotated_norm: float = 1.0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "W1": self.W1,
            "W2": complex_to_json(self.W2),
            "T": self.T,
            "theta": self.theta,
            "lambda": self.lam,
            "alpha": self.alpha,
            "beta": self.beta,
            "H11": self.H11,
            "H12": self.H12,
            "convention": self.convention,
            "rotated_H12": complex_to_json(self.rotated_H12),
            "rotated_H21": complex_to_json(self.rotated_H21),
            "closure_residual": self.closure_residual,
            "rotated_norm": self.rotated_norm,
        }


def target_entries(theta: float, lam: float) -> Tuple[float, complex]:
    """Diagonal W1 and sub-diagonal W2 of M(theta, lambda), in expanded real form."""
    params = TransformParams(theta=theta, lam=lam)
    t = math.tan(theta)
    W1 = (1 - lam) ** 2 + 2 * (1 - lam) ** 2 * t ** 2 + lam ** 2
    W2 = complex(lam - lam ** 2 - (1 - lam) ** 2 * t ** 2, (1 - lam) * t)

    w = params.w
    scale = max(1.0, abs(W1))
    gap = max(abs(W1 - (abs(1 - w) ** 2 + abs(w) ** 2)), abs(W2 - w * (1 - w.conjugate())))
    if gap > ENTRY_TOL * scale:
        raise CorrespondenceError(f"expanded and complex forms of W1, W2 differ by {gap:.3e}")
    return W1, W2


def shift_T(H11_raw: float, theta: float, lam: float) -> float:
    """Constant potential shift T = W1 - H11 lifting the diagonal onto W1."""
    W1, _ = target_entries(theta, lam)
    return W1 - H11_raw


def theta_from_diagonal(H_diag: float, lam: float) -> float:
    """Angle whose W1 equals H_diag for the given lambda."""
    if not (0.0 < lam < 1.0):
        raise DomainError(f"lambda must lie in (0, 1), got {lam}")
    floor = (1 - lam) ** 2 + lam ** 2
    radicand = (H_diag - floor) / (2 * (1 - lam) ** 2)
    if radicand < 0.0:
        if radicand < -ENTRY_TOL * max(1.0, abs(H_diag)):
            raise NoRealAngleError(
                f"diagonal {H_diag} lies below the minimum {floor} reachable for lambda={lam}"
            )
        radicand = 0.0
    return math.atan(math.sqrt(radicand))


def _real(value, label: str) -> float:
    value = complex(value)
    if abs(value.imag) > ENTRY_TOL * max(1.0, abs(value.real)):
        raise DomainError(f"{label} must be real, got {value}")
    if not math.isfinite(value.real):
        raise DomainError(f"{label} must be finite, got {value}")
    return value.real


def rotation_params(W2: complex, H11: float, H12: float,
                    convention: str = "halved") -> Tuple[float, float]:
    """Rotation (alpha, beta) giving the neighbour coupling the phase of W2.

    The pair solves alpha^2 - beta^2 = Re(W2) / (c H12) and alpha beta = Im(W2) / (2 H11),
    with c = 2 for the "halved" convention and c = 1 for "exact". The positive root is
    taken for alpha, so beta takes the sign of Im(W2) / H11.
    """
    if convention not in CONVENTIONS:
        raise DomainError(f"unknown convention {convention!r}, expected one of {CONVENTIONS}")
    W2 = complex(W2)
    H11 = _real(H11, "H11")
    H12 = _real(H12, "H12")
    if H12 == 0.0:
        raise NoRealSolutionError("H12 = 0: uncoupled wells cannot be rotated onto W2")
    if H11 == 0.0:
        if W2.imag != 0.0:
            raise NoRealSolutionError("H11 = 0 with Im(W2) != 0 has no real rotation")
        q = 0.0
    else:
        q = W2.imag / (2 * H11)

    c = 2.0 if convention == "halved" else 1.0
    difference = W2.real / (c * H12)
    p = difference / 2
    r = math.hypot(p, q)
    # p + r cancels for negative p
    alpha_sq = p + r if p >= 0.0 else q * q / (r - p)
    if not (alpha_sq >= 0.0 and math.isfinite(alpha_sq)):
        raise NoRealSolutionError(f"no real alpha: radicand {alpha_sq}")
    alpha = math.sqrt(alpha_sq)
    if alpha == 0.0:
        raise DegenerateRotationError(
            f"alpha = 0 for W2={W2}, H11={H11}, H12={H12}; beta is undetermined"
        )
    beta = q / alpha

    residual = max(abs(alpha ** 2 - beta ** 2 - difference), abs(alpha * beta - q))
    logger.debug(f"Rotation alpha={alpha:.6f}, beta={beta:.6f}, relation residual {residual:.2e}")
    return alpha, beta


def rotated_offdiagonals(alpha: float, beta: float, H: np.ndarray) -> Tuple[complex, complex]:
    """Off-diagonals of a 2x2 block in the basis psi'_1 = alpha psi_1 + i beta psi_2,
    psi'_2 = alpha psi_2 - i beta psi_1."""
    H = np.asarray(H)
    if H.shape != (2, 2):
        raise DomainError(f"expected a 2x2 block, got shape {H.shape}")
    H11, H12, H21, H22 = H[0, 0], H[0, 1], H[1, 0], H[1, 1]
    mixing = alpha * beta * 1j * (H11 + H22)
    H12_rot = alpha ** 2 * H12 - beta ** 2 * H21 - mixing
    H21_rot = alpha ** 2 * H21 - beta ** 2 * H12 + mixing
    return complex(H12_rot), complex(H21_rot)


def correspondence_from_entries(theta: float, lam: float, H11: float, H12: float,
                                convention: str = "halved") -> CorrespondenceResult:
    """Correspondence for a real nearest-neighbour pair (H11, H12) of raw ring integrals."""
    W1, W2 = target_entries(theta, lam)
    T = shift_T(H11, theta, lam)
    alpha, beta = rotation_params(W2, H11, H12, convention=convention)
    block = np.array([[H11, H12], [H12, H11]])
    H12_rot, H21_rot = rotated_offdiagonals(alpha, beta, block)
    closure = abs(H21_rot - W2)
    norm = alpha ** 2 + beta ** 2
    if closure > 1e-10:
        logger.info(f"Rotated H21 misses W2 by {closure:.3e} under the {convention} convention")
    logger.warning(f"Rotated basis is not normalized: |psi'|^2 = {norm:.6f}")
    return CorrespondenceResult(
        W1=W1, W2=W2, T=T, theta=theta, lam=lam, alpha=alpha, beta=beta,
        H11=float(H11), H12=float(H12), convention=convention,
        rotated_H12=H12_rot, rotated_H21=H21_rot,
        closure_residual=float(closure), rotated_norm=float(norm),
    )


def full_correspondence(theta: float, lam: float, ring: RingMatrices,
                        convention: str = "halved", tol: float = RING_TOL) -> CorrespondenceResult:
    """Correspondence for an assembled ring, which must be circulant, nearest-neighbour and real."""
    H = np.asarray(ring.H)
    n = H.shape[0]
    if ring.circulant_deviation > tol:
        raise CorrespondenceError(
            f"ring Hamiltonian is not circulant (deviation {ring.circulant_deviation:.2e})"
        )
    far = np.max(np.abs(H[~nearest_neighbor_mask(n)]), initial=0.0)
    if far > tol:
        raise CorrespondenceError(
            f"ring Hamiltonian is not tridiagonal: entries up to {far:.2e} beyond nearest "
            f"neighbours (assemble with truncate_nn)"
        )
    imaginary = max(abs(H[0, 0].imag), abs(H[0, 1].imag))
    if imaginary > tol:
        raise CorrespondenceError(f"ring entries are not real (imaginary part {imaginary:.2e})")

    H11, H12 = float(H[0, 0].real), float(H[0, 1].real)
    logger.info(f"Matching {n}-well ring (H11={H11:.6f}, H12={H12:.6f}) to theta={theta}, lambda={lam}")
    return correspondence_from_entries(theta, lam, H11, H12, convention=convention)
