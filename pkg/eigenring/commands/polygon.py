import logging
import math
from pathlib import Path
from typing import List

import numpy as np
import pandas as pd

from ..base_command import CommandResult, ComputeCommand
from ..config import PolygonConfig, get_settings
from ..errors import PolygonParseError
from ..polygon_transform import (
    Polygon,
    TransformParams,
    decompose,
    dominant_index,
    eigenvalues_eta,
    iterate_to_eigenshape,
    random_polygon,
    regular_polygon,
)
from ..utils import complex_columns

logger = logging.getLogger(__name__)


def read_polygon_file(path: str) -> Polygon:
    """Read one vertex per line as 're im' or 're,im'; blank lines and '#' comments are skipped."""
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as e:
        raise PolygonParseError(f"cannot read polygon file {path}: {e}")

    vertices = []
    for number, line in enumerate(lines, start=1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        fields = text.replace(",", " ").split()
        if len(fields) != 2:
            raise PolygonParseError(f"expected two numbers, got {len(fields)}: {line!r}", number)
        try:
            real, imag = float(fields[0]), float(fields[1])
        except ValueError:
            raise PolygonParseError(f"not a number pair: {line!r}", number)
        if not (math.isfinite(real) and math.isfinite(imag)):
            raise PolygonParseError(f"vertex is not finite: {line!r}", number)
        vertices.append(complex(real, imag))

    if len(vertices) < 3:
        raise PolygonParseError(f"a polygon needs at least 3 vertices, {path} has {len(vertices)}")
    return Polygon(np.array(vertices))


class PolygonCommand(ComputeCommand):
    """Eigenpolygon decomposition, spectrum and power iteration of M(theta, lambda)"""

    config_model = PolygonConfig

    def __init__(self):
        super().__init__(
            name="polygon",
            description="Decompose a polygon into eigenpolygons and iterate the transformation",
        )

    def load_polygon(self, config: PolygonConfig) -> Polygon:
        if config.vertices is not None:
            return Polygon(np.array([complex(re, im) for re, im in config.vertices]))
        if config.file is not None:
            return read_polygon_file(config.file)
        if config.random is not None:
            return random_polygon(config.random, config.seed)
        return regular_polygon(config.regular)

    def execute(self, config: PolygonConfig) -> CommandResult:
        settings = get_settings()
        polygon = self.load_polygon(config)
        params = TransformParams(theta=config.theta, lam=config.lam)
        n = polygon.n
        artifacts: List[str] = []
        self.write_config(config, artifacts)

        eta = eigenvalues_eta(params, n)
        dominance = dominant_index(params, n, threshold_tol=settings.threshold_tol)
        self.write_table(config, "eigenvalues", pd.DataFrame({
            "k": np.arange(n),
            "eta": eta,
            "dominant": np.arange(n) == dominance.index,
        }), artifacts)
        data = {
            "n": n,
            "dominant_index": dominance.index,
            "dominant_eta": dominance.eta,
            "numeric_dominance": dominance.numeric,
        }
        message = f"dominant eigenpolygon k={dominance.index} (eta={dominance.eta:.6f})"

        if config.action in ("decompose", "iterate"):
            decomposition = decompose(polygon)
            residual = decomposition.residual(polygon)
            self.write_table(config, "decomposition", pd.DataFrame({
                "k": np.arange(n),
                **complex_columns("c", decomposition.coefficients),
                "c_abs": np.abs(decomposition.coefficients),
                "mass_fraction": decomposition.mass_fractions(),
                "eta": eta,
            }), artifacts)
            data["reconstruction_residual"] = residual
            message = f"reconstruction residual {residual:.3e}; " + message

        if config.action == "iterate":
            limit, report = iterate_to_eigenshape(polygon, params, max_steps=config.max_steps,
                                                  tol=config.tol)
            self.write_table(config, "limit", pd.DataFrame({
                "vertex": np.arange(n),
                **complex_columns("z", limit.vertices),
            }), artifacts)
            self.write_result(config, "convergence", report.to_dict(), artifacts)
            if config.trace:
                self.write_table(config, "trace", pd.DataFrame({
                    "step": np.arange(1, report.steps + 1),
                    "residual": report.residuals,
                }), artifacts)
            data["convergence"] = report.to_dict()
            message = (f"converged in {report.steps} steps with dominant mass "
                       f"{report.dominant_mass:.12f}; " + message)

        return CommandResult(success=True, message=message, data=data, artifacts=artifacts)


def create_polygon_command() -> PolygonCommand:
    return PolygonCommand()
