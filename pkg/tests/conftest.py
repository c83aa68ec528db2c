"""Global fixtures for cheb-jacobi tests."""
import numpy as np
import pytest

from cheb_jacobi.lib.config import ExperimentConfig
from cheb_jacobi.lib.grid import BoundaryCondition, Grid

from .const import MOCK_CONFIG
from .oracle import smooth_boundary


@pytest.fixture(name="rng")
def rng_fixture():
    """Deterministic random numbers."""
    return np.random.default_rng(20231019)


@pytest.fixture(name="dirichlet_grid")
def dirichlet_grid_fixture():
    """8x8 vertex-centred grid with a smooth Dirichlet boundary."""
    return Grid.uniform(2, 8, BoundaryCondition.dirichlet(smooth_boundary))


@pytest.fixture(name="neumann_grid")
def neumann_grid_fixture():
    """8x8 cell-centred grid with Neumann faces only."""
    return Grid.uniform(2, 8, BoundaryCondition.neumann())


@pytest.fixture(name="mixed_grid")
def mixed_grid_fixture():
    """2D grid with h = 1/7: Dirichlet on x, Neumann below and Dirichlet above on y."""
    dirichlet = BoundaryCondition.dirichlet(smooth_boundary)
    return Grid(
        n=(8, 7),
        extent=(1.0, 1.0),
        faces=((dirichlet, dirichlet), (BoundaryCondition.neumann(), dirichlet)),
    )


@pytest.fixture(name="octant_grid")
def octant_grid_fixture():
    """6^3 grid with Neumann low faces and Dirichlet high faces."""
    dirichlet = BoundaryCondition.dirichlet(smooth_boundary)
    return Grid.uniform(3, 6, [(BoundaryCondition.neumann(), dirichlet)] * 3, 0.5)


@pytest.fixture(name="config")
def config_fixture(tmp_path):
    """Small, fast experiment writing into a temporary directory."""
    return ExperimentConfig.from_user_input(
        {**MOCK_CONFIG, "output_dir": str(tmp_path / "results")}
    )
