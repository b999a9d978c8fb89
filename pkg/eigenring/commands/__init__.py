"""eigenring subcommands."""

from .polygon import create_polygon_command
from .well import create_well_command
from .ring import create_ring_command
from .map import create_map_command
from .sweep import create_sweep_command

__all__ = [
    'create_polygon_command',
    'create_well_command',
    'create_ring_command',
    'create_map_command',
    'create_sweep_command',
]
