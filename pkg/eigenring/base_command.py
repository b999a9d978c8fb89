import logging
from abc import ABC, abstractmethod
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Type

import pandas as pd

from . import __version__
from .config import RunConfig, get_settings
from .errors import EigenringError
from .utils import save_json, save_table, to_jsonable

logger = logging.getLogger(__name__)

TOLERANCE_FIELDS = (
    "direction_tol",
    "threshold_tol",
    "root_xtol",
    "quad_epsabs",
    "circulant_tol",
    "overlap_tol",
)


@dataclass
class CommandResult:
    """Standard result format for command runs"""
    success: bool
    message: str
    data: Optional[Dict[str, Any]] = None
    artifacts: List[str] = field(default_factory=list)
    exit_code: int = 0

    def to_dict(self):
        return to_jsonable(asdict(self))


class ComputeCommand(ABC):
    """Base class for all eigenring subcommands"""

    config_model: Type[RunConfig] = RunConfig

    def __init__(self, name: str, description: str):
        self.name = name
        self.description = description

    @abstractmethod
    def execute(self, config: RunConfig) -> CommandResult:
        """Run the computation and write its artifacts"""
        pass

    def run(self, config: RunConfig) -> CommandResult:
        """Execute, turning eigenring failures into an unsuccessful result with an exit code."""
        logger.info(f"Running {self.name} with output directory {config.out}")
        try:
            result = self.execute(config)
        except EigenringError as e:
            logger.error(f"{self.name} failed: {e}", exc_info=logger.isEnabledFor(logging.DEBUG))
            return CommandResult(
                success=False,
                message=f"{type(e).__name__}: {e}",
                data=self._diagnostics(e),
                exit_code=e.exit_code,
            )
        logger.info(f"{self.name} finished: {result.message}")
        return result

    def get_info(self) -> Dict[str, Any]:
        return {
            "name": self.name,
            "description": self.description,
        }

    @staticmethod
    def _diagnostics(error: EigenringError) -> Dict[str, Any]:
        data: Dict[str, Any] = {"error": type(error).__name__}
        report = getattr(error, "report", None)
        if report is not None:
            data["report"] = report.to_dict() if hasattr(report, "to_dict") else report
        for attribute in ("overlap_eigenvalues", "line_number", "threshold_index", "achieved"):
            value = getattr(error, attribute, None)
            if value is not None:
                data[attribute] = value
        return data

    def metadata(self, config: RunConfig) -> Dict[str, Any]:
        """Header attached to every artifact: tool version, config echo and tolerances."""
        settings = get_settings()
        return {
            "tool": f"eigenring {__version__}",
            "command": self.name,
            "config": config.model_dump(mode="json", by_alias=True),
            "tolerances": {name: getattr(settings, name) for name in TOLERANCE_FIELDS},
        }

    def write_config(self, config: RunConfig, artifacts: List[str]) -> None:
        path = Path(config.out) / "config.json"
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(config.to_json() + "\n", encoding="utf-8")
        artifacts.append(str(path))

    def write_table(self, config: RunConfig, stem: str, frame: pd.DataFrame,
                    artifacts: List[str]) -> None:
        """Write a table as CSV and/or JSON records depending on config.format."""
        header = self.metadata(config)
        if config.format in ("csv", "both"):
            path = Path(config.out) / f"{stem}.csv"
            save_table(frame, str(path), metadata=header)
            artifacts.append(str(path))
        if config.format in ("json", "both"):
            path = Path(config.out) / f"{stem}.json"
            save_json({"metadata": header, "rows": frame.to_dict(orient="records")}, str(path))
            artifacts.append(str(path))

    def write_result(self, config: RunConfig, stem: str, payload: Dict[str, Any],
                     artifacts: List[str]) -> None:
        """Structured results are always JSON."""
        path = Path(config.out) / f"{stem}.json"
        save_json({"metadata": self.metadata(config), "result": payload}, str(path))
        artifacts.append(str(path))
