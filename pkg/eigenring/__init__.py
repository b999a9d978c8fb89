"""eigenring - polygon transformations, circulant pencils and rings of quantum wells."""

__version__ = "0.1.0"

from .config import get_settings
from .commands import (
    create_polygon_command,
    create_well_command,
    create_ring_command,
    create_map_command,
    create_sweep_command,
)

__all__ = [
    'get_settings',
    'create_polygon_command',
    'create_well_command',
    'create_ring_command',
    'create_map_command',
    'create_sweep_command',
]
