import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'

logger = logging.getLogger(__name__)


def configure_logging(level: str = "INFO") -> None:
    """Configure root logging once for the CLI."""
    logging.basicConfig(level=level.upper(), format=LOG_FORMAT, force=True)


def complex_to_json(value: complex) -> Dict[str, float]:
    """Serialize a complex number as {"re": ..., "im": ...}."""
    value = complex(value)
    return {"re": float(value.real), "im": float(value.imag)}


def to_jsonable(data: Any) -> Any:
    """Recursively convert numpy and complex values into JSON types."""
    if isinstance(data, dict):
        return {str(key): to_jsonable(value) for key, value in data.items()}
    if isinstance(data, (list, tuple)):
        return [to_jsonable(item) for item in data]
    if isinstance(data, np.ndarray):
        return to_jsonable(data.tolist())
    if isinstance(data, (complex, np.complexfloating)):
        return complex_to_json(data)
    if isinstance(data, np.integer):
        return int(data)
    if isinstance(data, np.floating):
        return float(data)
    if isinstance(data, np.bool_):
        return bool(data)
    return data


def load_json(file_path: str) -> Any:
    """Load data from a JSON file."""
    try:
        with open(file_path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except Exception as e:
        logger.error(f"Error loading JSON from {file_path}: {e}")
        raise


def save_json(data: Any, file_path: str) -> None:
    """Save data to a JSON file with sorted keys so reruns are byte-identical."""
    try:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8') as f:
            json.dump(to_jsonable(data), f, indent=2, sort_keys=True, ensure_ascii=False)
            f.write("\n")
        logger.info(f"Data saved to {file_path}")
    except Exception as e:
        logger.error(f"Error saving JSON to {file_path}: {e}")
        raise


def save_table(frame: pd.DataFrame, file_path: str, metadata: Optional[Dict[str, Any]] = None) -> None:
    """Write a CSV table preceded by '# key: value' metadata lines."""
    try:
        Path(file_path).parent.mkdir(parents=True, exist_ok=True)
        with open(file_path, 'w', encoding='utf-8', newline='') as f:
            for key, value in sorted((metadata or {}).items()):
                f.write(f"# {key}: {json.dumps(to_jsonable(value), sort_keys=True)}\n")
            frame.to_csv(f, index=False, float_format="%.17g")
        logger.info(f"Table saved to {file_path}")
    except Exception as e:
        logger.error(f"Error saving table to {file_path}: {e}")
        raise


def load_table(file_path: str) -> pd.DataFrame:
    """Read a CSV table written by save_table, skipping the metadata lines."""
    return pd.read_csv(file_path, comment='#')


def complex_columns(prefix: str, values: List[complex]) -> Dict[str, List[float]]:
    """Split complex values into '<prefix>_re' and '<prefix>_im' columns."""
    values = np.asarray(values, dtype=complex)
    return {f"{prefix}_re": values.real.tolist(), f"{prefix}_im": values.imag.tolist()}
