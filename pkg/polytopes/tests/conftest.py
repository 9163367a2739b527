from pathlib import Path

import pytest

from polytopes.catalog import named, string_rotation, torus_44
from polytopes.rotation import rotation_system

PRESENTATIONS = Path(__file__).resolve().parent.parent / "fixtures" / "presentations"
GOLDEN = Path(__file__).resolve().parent / "golden"


@pytest.fixture(scope="session")
def tetrahedron():
    return rotation_system(string_rotation(3, 3), name="tetrahedron")


@pytest.fixture(scope="session")
def cube():
    return rotation_system(string_rotation(4, 3), name="cube")


@pytest.fixture(scope="session")
def torus21():
    return torus_44(2, 1)


@pytest.fixture(scope="session")
def torus30():
    return torus_44(3, 0)


@pytest.fixture(scope="session")
def s6_system():
    return named("s6_rank5")


@pytest.fixture(scope="session")
def eleven_cell():
    return named("eleven_cell")


@pytest.fixture(scope="session")
def simplex5():
    return named("simplex5")
