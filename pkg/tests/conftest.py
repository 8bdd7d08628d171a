from pathlib import Path

import numpy as np
import pytest

from curvkit.curvature import CurvatureKind, curvature_all
from curvkit.graph import Graph, build_graph

DATA_DIR = Path(__file__).resolve().parent.parent / "data"


def football_path() -> Path:
    """Real schedule file if the user downloaded it, else the committed
    surrogate with the same profile (115 teams, 613 games, 12 conferences)."""
    real = DATA_DIR / "football.gml"
    return real if real.exists() else DATA_DIR / "football_surrogate.gml"


def make_graph(edges, nodes=()) -> Graph:
    g, _ = build_graph(edges, nodes=nodes)
    return g


def complete_graph(n: int) -> Graph:
    return make_graph([(i, j) for i in range(n) for j in range(i + 1, n)])


def path_graph(n: int) -> Graph:
    return make_graph([(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return make_graph([(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    return make_graph([(0, i) for i in range(1, leaves + 1)])


def random_er(n: int, p: float, rng: np.random.Generator) -> Graph:
    edges = [
        (i, j)
        for i in range(n)
        for j in range(i + 1, n)
        if rng.random() < p
    ]
    if not edges:
        edges = [(0, 1)]
    return make_graph(edges, nodes=range(n))


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # first call of each numba kernel pays JIT compilation; warm them once so
    # the timed acceptance checks measure steady-state cost
    tri = make_graph([(0, 1), (0, 2), (1, 2)])
    for kind in CurvatureKind:
        curvature_all(tri, kind)
    yield


@pytest.fixture
def triangle() -> Graph:
    return make_graph([(0, 1), (0, 2), (1, 2)])


@pytest.fixture
def p3() -> Graph:
    return path_graph(3)


@pytest.fixture
def k2() -> Graph:
    return make_graph([(0, 1)])


@pytest.fixture
def c4() -> Graph:
    return cycle_graph(4)
