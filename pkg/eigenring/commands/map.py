import logging
from typing import List

from ..base_command import CommandResult, ComputeCommand
from ..config import MapConfig
from ..correspondence import correspondence_from_entries, full_correspondence, target_entries
from ..utils import complex_to_json
from .ring import build_ring

logger = logging.getLogger(__name__)


class MapCommand(ComputeCommand):
    """Correspondence between M(theta, lambda) and a ring Hamiltonian"""

    config_model = MapConfig

    def __init__(self):
        super().__init__(
            name="map",
            description="Compute the shift and basis rotation matching H to M(theta, lambda)",
        )

    def execute(self, config: MapConfig) -> CommandResult:
        artifacts: List[str] = []
        if config.w_only:
            W1, W2 = target_entries(config.theta, config.lam)
            payload = {"theta": config.theta, "lambda": config.lam,
                       "W1": W1, "W2": complex_to_json(W2)}
            self.write_config(config, artifacts)
            self.write_result(config, "map", payload, artifacts)
            return CommandResult(success=True, message=f"W1={W1:.6f}, W2={W2:.6f}",
                                 data=payload, artifacts=artifacts)

        if config.ring is not None:
            # the correspondence is defined on the nearest-neighbour block
            _, matrices = build_ring(config.ring, truncate_nn=True)
            result = full_correspondence(config.theta, config.lam, matrices,
                                         convention=config.convention)
        else:
            result = correspondence_from_entries(config.theta, config.lam, config.h11, config.h12,
                                                 convention=config.convention)

        payload = result.to_dict()
        self.write_config(config, artifacts)
        self.write_result(config, "map", payload, artifacts)
        return CommandResult(
            success=True,
            message=(f"T={result.T:.6f} meV, alpha={result.alpha:.6f}, beta={result.beta:.6f}, "
                     f"closure residual {result.closure_residual:.3e}"),
            data=payload,
            artifacts=artifacts,
        )


def create_map_command() -> MapCommand:
    return MapCommand()
