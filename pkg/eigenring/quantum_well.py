"""A finite quantum well on a circle.

One well of width L and depth V0 sits at x = 0 on a circle of length l, on top of a
constant V' (Vshift):  V = V' - V0 for |x| < L/2 and V = V' elsewhere. Energies are in meV,
lengths in nm. A bound state with energy W has

    k     = sqrt(2m (W + V0 - V') / hbar^2)   inside the well,
    kappa = sqrt(-2m (W - V') / hbar^2)       outside,

so that k^2 + kappa^2 = C0 = 2 m V0 / hbar^2. Matching value and slope at x = L/2 and at
x = l - L/2 (identified with -L/2) gives a 4x4 determinant that vanishes at bound states.
Both condition functions are returned multiplied by exp(kappa L), which leaves every
exponential with a non-positive argument; with q = exp(-kappa (l - L)) the determinant is

    2 [k sin(kL/2) (1+q) - kappa cos(kL/2) (1-q)] [kappa sin(kL/2) (1+q) + k cos(kL/2) (1-q)]

whose first factor selects the symmetric (cosine) states and the second the antisymmetric ones.
"""
import logging
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy import integrate, optimize

from .errors import ContinuityError, DomainError, IntegrationError

logger = logging.getLogger(__name__)

ELECTRON_MASS = 9.109e-31      # kg
HBAR = 1.055e-34               # J s
ELEMENTARY_CHARGE = 1.602e-19  # J per eV

DEFAULT_GRID_POINTS = 10_000
DEFAULT_REFINE_FACTOR = 10
DEFAULT_XTOL = 1e-12
CONTINUITY_TOL = 1e-8
NORMALIZATION_TOL = 1e-10


@dataclass(frozen=True)
class WellGeometry:
    """Well width and circle length in nm, depth and shift in meV"""
    width: float
    circumference: float
    V0: float
    Vshift: float = 0.0
    mass: float = ELECTRON_MASS
    hbar: float = HBAR

    def __post_init__(self):
        if not (0.0 < self.width < self.circumference):
            raise DomainError(
                f"need 0 < L < l, got L={self.width}, l={self.circumference}"
            )
        if not self.V0 > 0.0:
            raise DomainError(f"well depth V0 must be positive, got {self.V0}")
        if not self.Vshift >= 0.0:
            raise DomainError(f"shift V' must be non-negative, got {self.Vshift}")

    @property
    def c0_per_mev(self) -> float:
        """2m/hbar^2 in 1/(meV nm^2)."""
        joule_per_mev = ELEMENTARY_CHARGE * 1e-3
        return 2.0 * self.mass * joule_per_mev / self.hbar ** 2 * 1e-18

    @property
    def window(self) -> Tuple[float, float]:
        """Open bound-state energy window (V' - V0, V')."""
        return self.Vshift - self.V0, self.Vshift

    def with_shift(self, shift: float) -> "WellGeometry":
        return WellGeometry(self.width, self.circumference, self.V0, shift, self.mass, self.hbar)


@dataclass(frozen=True)
class BoundState:
    """Root of the bound-state condition; amplitude is set for constructed symmetric states"""
    W: float
    k: float
    kappa: float
    A: Optional[float] = None
    symmetric: bool = True

    def to_dict(self):
        return {
            "W": self.W,
            "k": self.k,
            "kappa": self.kappa,
            "A": self.A,
            "parity": "symmetric" if self.symmetric else "antisymmetric",
        }


def compute_C0(geometry: WellGeometry) -> float:
    """C0 = 2 m V0 / hbar^2 in 1/nm^2."""
    if not geometry.V0 > 0.0:
        raise DomainError(f"well depth V0 must be positive, got {geometry.V0}")
    return geometry.c0_per_mev * geometry.V0


def _binding(W, geometry: WellGeometry):
    """Energy relative to the top of the well, in (-V0, 0) for bound states."""
    return np.asarray(W, dtype=float) - geometry.Vshift


def _k_kappa(binding, geometry: WellGeometry):
    c = geometry.c0_per_mev
    k = np.sqrt(c * (binding + geometry.V0))
    kappa = np.sqrt(-c * binding)
    return k, kappa


def wavenumbers(W: float, geometry: WellGeometry) -> Tuple[float, float]:
    low, high = geometry.window
    if not W > low:
        raise DomainError(f"W={W} meV is not above the well bottom V'-V0={low} meV")
    if not W < high:
        raise DomainError(f"W={W} meV is not below the well top V'={high} meV")
    k, kappa = _k_kappa(_binding(W, geometry), geometry)
    return float(k), float(kappa)


def _condition_terms(binding, geometry: WellGeometry):
    k, kappa = _k_kappa(binding, geometry)
    half = k * geometry.width / 2
    q = np.exp(-kappa * (geometry.circumference - geometry.width))
    return k, kappa, q, np.sin(half), np.cos(half)


def _determinant_from_binding(binding, geometry: WellGeometry):
    k, kappa, q, s, c = _condition_terms(binding, geometry)
    one = np.ones_like(q)
    matrix = np.stack([
        np.stack([q, one, c, -s], axis=-1),
        np.stack([-kappa * q, kappa * one, k * s, k * c], axis=-1),
        np.stack([one, q, c, s], axis=-1),
        np.stack([-kappa * one, kappa * q, -k * s, k * c], axis=-1),
    ], axis=-2)
    return np.linalg.det(matrix)


def _expanded_from_binding(binding, geometry: WellGeometry):
    k, kappa, q, s, c = _condition_terms(binding, geometry)
    kk = kappa * k
    return ((4 * kk * q + 2 * kk * q ** 2 + 2 * kk) * s ** 2
            + ((2 * kappa ** 2 - 2 * k ** 2) * q ** 2 + (2 * k ** 2 - 2 * kappa ** 2)) * c * s
            + (4 * kk * q - 2 * kk * q ** 2 - 2 * kk) * c ** 2)


def _parity_factors(binding, geometry: WellGeometry):
    k, kappa, q, s, c = _condition_terms(binding, geometry)
    even = k * s * (1 + q) - kappa * c * (1 - q)
    odd = kappa * s * (1 + q) + k * c * (1 - q)
    return even, odd


def determinant_condition(W, geometry: WellGeometry):
    """4x4 continuity determinant, scaled by exp(kappa L); zero at bound states."""
    value = _determinant_from_binding(_binding(W, geometry), geometry)
    return float(value) if np.ndim(value) == 0 else value


def expanded_condition(W, geometry: WellGeometry):
    """Closed-form expansion of the same determinant, scaled by exp(kappa L)."""
    value = _expanded_from_binding(_binding(W, geometry), geometry)
    return float(value) if np.ndim(value) == 0 else value


def isolated_even_condition(W, geometry: WellGeometry):
    """k sin(kL/2) - kappa cos(kL/2): the symmetric-state condition of a well on a line."""
    k, kappa = _k_kappa(_binding(W, geometry), geometry)
    half = k * geometry.width / 2
    value = k * np.sin(half) - kappa * np.cos(half)
    return float(value) if np.ndim(value) == 0 else value


def _bracket_roots(grid: np.ndarray, values: np.ndarray) -> List[Tuple[float, float]]:
    brackets = []
    for i in range(len(grid) - 1):
        if values[i] == 0.0:
            brackets.append((grid[i], grid[i]))
        elif values[i] * values[i + 1] < 0.0:
            brackets.append((grid[i], grid[i + 1]))
    return brackets


def _near_tangencies(values: np.ndarray) -> List[int]:
    """Interior local minima of |f| without a sign change around them."""
    magnitude = np.abs(values)
    candidates = []
    for i in range(1, len(values) - 1):
        same_sign = values[i - 1] * values[i] > 0.0 and values[i] * values[i + 1] > 0.0
        if same_sign and magnitude[i] <= magnitude[i - 1] and magnitude[i] <= magnitude[i + 1]:
            candidates.append(i)
    return candidates


def find_bound_states(geometry: WellGeometry,
                      count_limit: Optional[int] = None,
                      grid_points: int = DEFAULT_GRID_POINTS,
                      refine_factor: int = DEFAULT_REFINE_FACTOR,
                      xtol: float = DEFAULT_XTOL) -> List[BoundState]:
    """All roots of the bound-state condition in the window, ascending in W.

    Roots are bracketed on a uniform grid over the open window, with one denser pass around
    local minima of |D| that show no sign change, and polished by Brent's method.
    """
    def condition(binding: float) -> float:
        return float(_expanded_from_binding(binding, geometry))

    grid = np.linspace(-geometry.V0, 0.0, grid_points + 2)[1:-1]
    values = _expanded_from_binding(grid, geometry)
    brackets = _bracket_roots(grid, values)

    for i in _near_tangencies(values):
        fine = np.linspace(grid[i - 1], grid[i + 1], 2 * refine_factor + 1)
        fine_values = _expanded_from_binding(fine, geometry)
        extra = _bracket_roots(fine, fine_values)
        if extra:
            logger.debug(f"Refinement near W={grid[i] + geometry.Vshift:.6f} meV found {len(extra)} roots")
            brackets.extend(extra)

    roots = set()
    for low, high in brackets:
        root = low if low == high else optimize.brentq(condition, low, high, xtol=xtol, maxiter=500)
        roots.add(float(root))

    states = []
    for binding in sorted(roots):
        k, kappa = _k_kappa(binding, geometry)
        even, odd = _parity_factors(binding, geometry)
        symmetric = bool(abs(even) < abs(odd))
        W = binding + geometry.Vshift
        state = BoundState(W=W, k=float(k), kappa=float(kappa), symmetric=symmetric)
        if symmetric:
            amplitude = symmetric_wavefunction(state, geometry).amplitude
            state = BoundState(W=W, k=state.k, kappa=state.kappa, A=amplitude, symmetric=True)
        else:
            logger.warning(f"Antisymmetric root at W={W:.6f} meV reported but not constructed")
        states.append(state)
        if count_limit is not None and len(states) >= count_limit:
            break

    logger.info(f"Found {len(states)} bound states for L={geometry.width} nm, "
                f"l={geometry.circumference} nm, V0={geometry.V0} meV")
    return states


class SymmetricWavefunction:
    """Normalized cosine-type solution centred at `center` on the circle"""

    def __init__(self, k: float, kappa: float, amplitude: float, prefactor: float,
                 geometry: WellGeometry, center: float = 0.0):
        self.k = k
        self.kappa = kappa
        self.amplitude = amplitude
        self.prefactor = prefactor
        self.geometry = geometry
        self.center = center

    def _split(self, x):
        l = self.geometry.circumference
        r = np.mod(np.asarray(x, dtype=float) - self.center, l)
        signed = np.where(r > l / 2, r - l, r)
        inside = np.abs(signed) < self.geometry.width / 2
        return r, signed, inside

    def __call__(self, x):
        r, signed, inside = self._split(x)
        half = self.geometry.width / 2
        l = self.geometry.circumference
        # clip keeps the unused branch of np.where free of overflow
        outer = np.clip(r, half, l - half)
        exterior = self.prefactor * (np.exp(-self.kappa * (outer - half))
                                     + np.exp(self.kappa * (outer - l + half)))
        value = self.amplitude * np.where(inside, np.cos(self.k * signed), exterior)
        return float(value) if np.ndim(value) == 0 else value

    def derivative(self, x):
        r, signed, inside = self._split(x)
        half = self.geometry.width / 2
        l = self.geometry.circumference
        outer = np.clip(r, half, l - half)
        exterior = self.prefactor * self.kappa * (-np.exp(-self.kappa * (outer - half))
                                                  + np.exp(self.kappa * (outer - l + half)))
        value = self.amplitude * np.where(inside, -self.k * np.sin(self.k * signed), exterior)
        return float(value) if np.ndim(value) == 0 else value

    def translated(self, offset: float) -> "SymmetricWavefunction":
        return SymmetricWavefunction(self.k, self.kappa, self.amplitude, self.prefactor,
                                     self.geometry, (self.center + offset) % self.geometry.circumference)


def _exterior_prefactor(k: float, kappa: float, geometry: WellGeometry) -> float:
    """B = cos(kL/2) / (exp(kappa (L - l)) + 1).

    This is the value-continuity equation B (1 + exp(kappa (L - l))) = cos(kL/2) at x = L/2
    solved for B, so it holds for every energy. Reading the denominator as exp(kappa (L - l) + 1)
    instead breaks value continuity and is not used. The slope condition is what selects
    the roots; symmetric_wavefunction checks it.
    """
    q = math.exp(kappa * (geometry.width - geometry.circumference))
    return math.cos(k * geometry.width / 2) / (q + 1.0)


def _quad(func: Callable, low: float, high: float, epsabs: float) -> Tuple[float, float]:
    value, error = integrate.quad(func, low, high, epsabs=epsabs, epsrel=1e-12, limit=200)
    return value, error


def symmetric_wavefunction(state: BoundState, geometry: WellGeometry,
                           tol: float = CONTINUITY_TOL) -> SymmetricWavefunction:
    """Build the normalized symmetric solution for a root of the condition.

    Raises ContinuityError when the slope does not match at x = L/2, i.e. the
    state is not a symmetric root.
    """
    k, kappa = state.k, state.kappa
    prefactor = _exterior_prefactor(k, kappa, geometry)
    unit = SymmetricWavefunction(k, kappa, 1.0, prefactor, geometry)

    half = geometry.width / 2
    l = geometry.circumference
    inner_slope = -k * math.sin(k * half)
    outer_slope = prefactor * kappa * (math.exp(kappa * (2 * half - l)) - 1.0)
    scale = math.sqrt(k * k + kappa * kappa)
    mismatch = abs(outer_slope - inner_slope) / scale
    if mismatch > tol:
        raise ContinuityError(
            f"slope mismatch {mismatch:.3e} at x=L/2: W={state.W} meV is not a symmetric bound state"
        )

    pieces = [(0.0, half), (half, l - half), (l - half, l)]
    total = 0.0
    error = 0.0
    for low, high in pieces:
        value, piece_error = _quad(lambda x: unit(x) ** 2, low, high, epsabs=NORMALIZATION_TOL / 10)
        total += value
        error += piece_error
    if error > NORMALIZATION_TOL:
        raise IntegrationError(f"normalization integral error {error:.3e} above tolerance", achieved=error)

    amplitude = 1.0 / math.sqrt(total)
    return SymmetricWavefunction(k, kappa, amplitude, prefactor, geometry)


def sample_wavefunction(wavefunction: SymmetricWavefunction, points: int) -> Tuple[np.ndarray, np.ndarray]:
    """Uniform samples (x, psi(x)) over [0, l)."""
    x = np.linspace(0.0, wavefunction.geometry.circumference, points, endpoint=False)
    return x, np.asarray(wavefunction(x))
