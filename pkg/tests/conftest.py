import numpy as np
import pytest

from config import get_config
from core import GNLSLab
from polynomial import manakov, spinor
from solver import FieldState, GridDescriptor


@pytest.fixture(scope="session")
def lab():
    return GNLSLab(get_config(restarts=20))


@pytest.fixture(scope="session")
def profile(lab):
    return lab.profile


@pytest.fixture
def scalar():
    return manakov(1)


@pytest.fixture
def pair():
    return manakov(2)


@pytest.fixture
def spin():
    return spinor(1.0, 0.5)


@pytest.fixture
def small_grid():
    return GridDescriptor(32, 16.0, 1)


@pytest.fixture
def make_gaussian():
    """Factory for sum-of-components Gaussians a_j exp(-|x-c|^2 / 2 sigma^2 + i xi.x)"""

    def build(grid: GridDescriptor, amplitudes, width=1.5, center=(0.0, 0.0, 0.0), xi=(0.0, 0.0, 0.0)):
        amplitudes = np.asarray(amplitudes, dtype=complex)
        grid = grid.with_components(amplitudes.size)
        r = grid.radius_from(center)
        x, y, z = grid.coordinates
        carrier = np.exp(1j * (xi[0] * x + xi[1] * y + xi[2] * z))
        envelope = np.exp(-0.5 * (r / width) ** 2) * carrier
        return FieldState(grid, amplitudes[:, None, None, None] * envelope[None])

    return build
