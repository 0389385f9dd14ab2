import pytest

from gpkn.core import Lcg64
from gpkn.geodesy import SimpleGraph
from gpkn.kneser import MatrixCache


@pytest.fixture(scope="session")
def cache():
    """One in-memory distance-matrix cache shared by the whole run."""
    return MatrixCache()


def random_connected_graph(rng: Lcg64, min_order: int = 4, max_order: int = 14) -> SimpleGraph:
    """Deterministic random connected graph driven by the shared LCG stream."""
    order = min_order + rng.draw_below(max_order - min_order + 1)
    while True:
        density = 25 + rng.draw_below(50)  # percent, 25..74
        edges = []
        for i in range(order):
            for j in range(i + 1, order):
                if rng.draw_below(100) < density:
                    edges.append((i, j))
        try:
            return SimpleGraph.from_edges(order, edges)
        except ValueError:
            continue  # disconnected draw; the stream moves on deterministically
