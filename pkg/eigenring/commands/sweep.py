"""Parameter sweeps fanned out over worker processes, one CSV shard per task."""
import logging
import math
from multiprocessing import Pool
from pathlib import Path
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..base_command import CommandResult, ComputeCommand
from ..config import SweepConfig, get_settings
from ..errors import AmbiguousDominanceError, EigenringError
from ..polygon_transform import TransformParams, dominant_index, eigenvalues_eta
from ..quantum_well import WellGeometry, find_bound_states
from ..utils import save_table

logger = logging.getLogger(__name__)

ShardTask = Tuple[int, np.ndarray, Dict[str, Any], str, Dict[str, Any]]


def _dominance_rows(thetas: np.ndarray, options: Dict[str, Any]) -> pd.DataFrame:
    rows = []
    for theta in thetas:
        params = TransformParams(theta=float(theta), lam=options["lam"])
        numeric = int(np.argmax(eigenvalues_eta(params, options["n"])))
        try:
            interval = dominant_index(params, options["n"], threshold_tol=options["threshold_tol"])
            index, ambiguous = interval.index, False
        except AmbiguousDominanceError:
            index, ambiguous = -1, True
        rows.append({"theta": float(theta), "interval_index": index, "numeric_index": numeric,
                     "ambiguous": ambiguous, "agree": index == numeric})
    return pd.DataFrame(rows, columns=["theta", "interval_index", "numeric_index", "ambiguous", "agree"])


def _well_rows(circumferences: np.ndarray, options: Dict[str, Any]) -> pd.DataFrame:
    rows = []
    for l in circumferences:
        geometry = WellGeometry(width=options["width"], circumference=float(l),
                                V0=options["V0"], Vshift=options["shift"])
        try:
            states = find_bound_states(geometry, grid_points=options["grid_points"])
        except EigenringError as e:
            logger.warning(f"Bound-state search failed at l={l}: {e}")
            states = []
        symmetric = [state for state in states if state.symmetric]
        ground = symmetric[0] if symmetric else None
        rows.append({
            "l": float(l),
            "count": len(states),
            "symmetric_count": len(symmetric),
            "W0": ground.W if ground else math.nan,
            "k0": ground.k if ground else math.nan,
            "kappa0": ground.kappa if ground else math.nan,
        })
    return pd.DataFrame(rows, columns=["l", "count", "symmetric_count", "W0", "k0", "kappa0"])


SWEEP_KINDS = {
    "dominance": _dominance_rows,
    "well": _well_rows,
}


def run_shard(task: ShardTask) -> Tuple[int, str, int]:
    """Compute one shard and write it to its own file."""
    index, values, options, path, metadata = task
    frame = SWEEP_KINDS[options["kind"]](values, options)
    save_table(frame, path, metadata={**metadata, "shard": index})
    return index, path, len(frame)


class SweepCommand(ComputeCommand):
    """Dominance or bound-state sweeps over a parameter grid"""

    config_model = SweepConfig

    def __init__(self):
        super().__init__(
            name="sweep",
            description="Sweep theta (dominance) or the circle length l (well) in parallel shards",
        )

    def grid(self, config: SweepConfig) -> np.ndarray:
        if config.kind == "dominance":
            # open interval (0, pi/2)
            return np.linspace(0.0, math.pi / 2, config.samples + 2)[1:-1]
        return np.linspace(config.l_min, config.l_max, config.samples)

    def execute(self, config: SweepConfig) -> CommandResult:
        settings = get_settings()
        options = {
            "kind": config.kind,
            "n": config.n,
            "lam": config.lam,
            "width": config.width,
            "V0": config.V0,
            "shift": config.shift,
            "grid_points": config.grid_points,
            "threshold_tol": settings.threshold_tol,
        }
        artifacts: List[str] = []
        self.write_config(config, artifacts)

        metadata = self.metadata(config)
        shards = [values for values in np.array_split(self.grid(config), config.shards) if values.size]
        tasks = [
            (i, values, options, str(Path(config.out) / f"sweep_{config.kind}_{i:03d}.csv"), metadata)
            for i, values in enumerate(shards)
        ]
        workers = min(settings.max_workers, len(tasks))
        logger.info(f"Sweeping {config.kind} over {config.samples} samples in "
                    f"{len(tasks)} shards with {workers} workers")

        if workers <= 1:
            results = [run_shard(task) for task in tqdm(tasks, desc=f"sweep {config.kind}")]
        else:
            with Pool(processes=workers) as pool:
                results = list(tqdm(pool.imap_unordered(run_shard, tasks), total=len(tasks),
                                    desc=f"sweep {config.kind}"))

        results.sort()
        artifacts.extend(path for _, path, _ in results)
        rows = sum(count for _, _, count in results)
        summary = {"kind": config.kind, "shards": [path for _, path, _ in results], "rows": rows}
        self.write_result(config, "sweep", summary, artifacts)
        return CommandResult(success=True, message=f"{rows} rows written in {len(results)} shards",
                             data=summary, artifacts=artifacts)


def create_sweep_command() -> SweepCommand:
    return SweepCommand()
