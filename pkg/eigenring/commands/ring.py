import logging
from typing import List, Tuple

import numpy as np
import pandas as pd

from ..base_command import CommandResult, ComputeCommand
from ..config import RingConfig
from ..quantum_well import WellGeometry
from ..ring_system import (
    RingBasis,
    RingMatrices,
    assemble_matrices,
    build_basis,
    solve_ring,
)

logger = logging.getLogger(__name__)


def build_ring(config: RingConfig, truncate_nn: bool = False) -> Tuple[RingBasis, RingMatrices]:
    """Basis and assembled matrices for the ring described by config."""
    geometry = WellGeometry(width=config.width, circumference=config.circumference,
                            V0=config.V0, Vshift=config.shift)
    basis = build_basis(geometry, config.n, grid_points=config.grid_points)
    matrices = assemble_matrices(basis, truncate_nn=truncate_nn or config.truncate_nn,
                                 epsabs=config.quad_epsabs)
    return basis, matrices


def matrix_frame(matrices: RingMatrices) -> pd.DataFrame:
    n = matrices.n
    mu, nu = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return pd.DataFrame({
        "mu": mu.ravel(),
        "nu": nu.ravel(),
        "S_re": matrices.S.real.ravel(),
        "S_im": matrices.S.imag.ravel(),
        "H_re": matrices.H.real.ravel(),
        "H_im": matrices.H.imag.ravel(),
    })


class RingCommand(ComputeCommand):
    """Generalized eigenproblem of n coupled wells on a ring"""

    config_model = RingConfig

    def __init__(self):
        super().__init__(
            name="ring",
            description="Assemble and solve the ring Hamiltonian in the single-well basis",
        )

    def execute(self, config: RingConfig) -> CommandResult:
        basis, matrices = build_ring(config)
        solution = solve_ring(matrices, circulant_tol=config.circulant_tol,
                              overlap_tol=config.overlap_tol)
        artifacts: List[str] = []
        self.write_config(config, artifacts)
        self.write_table(config, "matrices", matrix_frame(matrices), artifacts)

        # Fourier order j for the circulant path, ascending for the dense one
        spectrum = pd.DataFrame({"j": np.arange(matrices.n), "energy": solution.energies})
        if matrices.truncated:
            spectrum["truncation_error"] = matrices.truncation_error
        self.write_table(config, "spectrum", spectrum, artifacts)

        summary = {
            "n": matrices.n,
            "single_well_W": basis.state.W,
            "method": solution.method,
            "residual": solution.residual,
            "solver_discrepancy": solution.solver_discrepancy,
            "hermiticity_error": matrices.hermiticity_error,
            "circulant_deviation": matrices.circulant_deviation,
            "quadrature_error": matrices.quadrature_error,
            "truncated": matrices.truncated,
            "truncation_error": matrices.truncation_error,
            "overlap_eigenvalues": solution.overlap_eigenvalues,
            "energies": solution.sorted_energies(),
            "coefficients": [
                {"j": j, "energy": solution.energies[j], "vector": solution.coefficients[:, j]}
                for j in range(matrices.n)
            ],
        }
        self.write_result(config, "ring", summary, artifacts)
        return CommandResult(
            success=True,
            message=(f"{matrices.n} energies via {solution.method} solver, "
                     f"residual {solution.residual:.3e}"),
            data=summary,
            artifacts=artifacts,
        )


def create_ring_command() -> RingCommand:
    return RingCommand()
