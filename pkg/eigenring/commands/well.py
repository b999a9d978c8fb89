import logging
from typing import List

import pandas as pd

from ..base_command import CommandResult, ComputeCommand
from ..config import WellConfig
from ..quantum_well import (
    WellGeometry,
    compute_C0,
    find_bound_states,
    sample_wavefunction,
    symmetric_wavefunction,
)

logger = logging.getLogger(__name__)

STATE_COLUMNS = ["index", "W", "k", "kappa", "A", "parity", "closure"]


class WellCommand(ComputeCommand):
    """Bound states of one finite well on a circle"""

    config_model = WellConfig

    def __init__(self):
        super().__init__(
            name="well",
            description="Find the bound states of a finite quantum well on a circle",
        )

    def execute(self, config: WellConfig) -> CommandResult:
        geometry = WellGeometry(width=config.width, circumference=config.circumference,
                                V0=config.V0, Vshift=config.shift)
        C0 = compute_C0(geometry)
        states = find_bound_states(geometry, count_limit=config.count_limit,
                                   grid_points=config.grid_points,
                                   refine_factor=config.refine_factor, xtol=config.xtol)
        artifacts: List[str] = []
        self.write_config(config, artifacts)

        rows = []
        for index, state in enumerate(states):
            row = {"index": index, **state.to_dict()}
            # relative deviation from k^2 + kappa^2 = C0
            row["closure"] = abs(state.k ** 2 + state.kappa ** 2 - C0) / C0
            rows.append(row)
        self.write_table(config, "bound_states", pd.DataFrame(rows, columns=STATE_COLUMNS), artifacts)

        summary = {
            "C0": C0,
            "C0_per_meV": geometry.c0_per_mev,
            "window": list(geometry.window),
            "count": len(states),
            "bound_states": [state.to_dict() for state in states],
        }
        if not states:
            summary["message"] = "no bound states"
            self.write_result(config, "well", summary, artifacts)
            return CommandResult(success=True, message="no bound states", data=summary,
                                 artifacts=artifacts)

        symmetric = [state for state in states if state.symmetric]
        if config.sample_points and symmetric:
            wavefunction = symmetric_wavefunction(symmetric[0], geometry)
            x, psi = sample_wavefunction(wavefunction, config.sample_points)
            self.write_table(config, "wavefunction", pd.DataFrame({"x": x, "psi": psi}), artifacts)

        self.write_result(config, "well", summary, artifacts)
        lowest = states[0]
        return CommandResult(
            success=True,
            message=f"{len(states)} bound states; lowest W={lowest.W:.9f} meV",
            data=summary,
            artifacts=artifacts,
        )


def create_well_command() -> WellCommand:
    return WellCommand()
