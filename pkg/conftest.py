"""Shared fixtures for the eigenring tests."""
import pytest

from eigenring.config import get_settings
from eigenring.quantum_well import WellGeometry
from eigenring.ring_system import assemble_matrices, build_basis


@pytest.fixture(autouse=True)
def fresh_settings():
    """Settings are cached; tests that patch EIGENRING_* need a clean cache."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def deep_well():
    """1 nm wide, 800 meV deep well on a 6 nm circle."""
    return WellGeometry(width=1.0, circumference=6.0, V0=800.0)


@pytest.fixture(scope="session")
def ring6_basis():
    """Six wells of width 1 nm and depth 800 meV spaced 3 nm apart."""
    geometry = WellGeometry(width=1.0, circumference=18.0, V0=800.0)
    return build_basis(geometry, 6)


@pytest.fixture(scope="session")
def ring6(ring6_basis):
    return assemble_matrices(ring6_basis)
