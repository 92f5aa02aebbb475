from pathlib import Path

import pytest

from app.norms import EuclideanNorm, LpNorm, PolygonNorm, SampledNorm, load_norm
from app.oracles import random_polygon_norm

UNIT_BALLS = Path(__file__).resolve().parent.parent / "unit_balls"


def pytest_collection_modifyitems(session, config, items):
    # oracle checks first, so a broken reference shows up before the tests that lean on it
    items.sort(key=lambda item: 0 if item.get_closest_marker("oracle") else 1)


@pytest.fixture(scope="session")
def unit_balls() -> Path:
    return UNIT_BALLS


@pytest.fixture(scope="session")
def square():
    return PolygonNorm.from_vertices([(1, 1), (-1, 1), (-1, -1), (1, -1)], label="square")


@pytest.fixture(scope="session")
def hexagon():
    return load_norm(UNIT_BALLS / "hexagon.json")


@pytest.fixture(scope="session")
def octagon():
    return PolygonNorm.regular(8)


@pytest.fixture(scope="session")
def dodecagon():
    return PolygonNorm.regular(12)


@pytest.fixture(scope="session")
def euclidean():
    return EuclideanNorm()


@pytest.fixture(scope="session")
def l3():
    return LpNorm(3)


@pytest.fixture(scope="session")
def ellipse():
    return SampledNorm.ellipse(2.0, 1.0, n=512)


@pytest.fixture(scope="session")
def battery(square, hexagon, octagon, dodecagon, euclidean, l3, ellipse):
    return {
        "square": square,
        "hexagon": hexagon,
        "octagon": octagon,
        "dodecagon": dodecagon,
        "euclidean": euclidean,
        "l3": l3,
        "ellipse": ellipse,
    }


@pytest.fixture(scope="session")
def polygon_battery(square, hexagon, octagon, dodecagon):
    return {"square": square, "hexagon": hexagon, "octagon": octagon, "dodecagon": dodecagon}


@pytest.fixture(scope="session")
def full_battery(battery):
    """Every norm the bound checks run on: the named balls, more l_p norms and ten random polygons"""
    norms = dict(battery)
    norms.update({"l1": LpNorm(1), "l1.5": LpNorm(1.5), "l4": LpNorm(4)})
    for seed in range(10):
        norms[f"random-{seed}"] = random_polygon_norm(3 + seed % 3, seed)
    return norms
