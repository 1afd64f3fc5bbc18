import pytest

from shortedge import (
    GroundSet,
    SetFamily,
    convex_complete,
    outer_face_vertex,
    random_geometric_complete,
    relabel_ccw,
    triangle_family,
)


def labeled(drawing):
    v0 = outer_face_vertex(drawing)
    labeling = relabel_ccw(drawing, v0)
    return v0, labeling


def triangle_setup(drawing):
    v0, labeling = labeled(drawing)
    return labeling, triangle_family(drawing, labeling)


@pytest.fixture(scope="session")
def rg33():
    return random_geometric_complete(33, seed=7)


@pytest.fixture(scope="session")
def rg33_family(rg33):
    return triangle_setup(rg33)


@pytest.fixture(scope="session")
def convex17():
    return convex_complete(17)


def small_family():
    ground = GroundSet(4)
    return SetFamily.of(ground, [("a", [1]), ("b", [2]), ("c", [3])])
