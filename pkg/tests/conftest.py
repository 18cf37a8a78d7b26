import sys
from pathlib import Path

import pytest

from sofai_gc import Graph

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def fig2_graph() -> Graph:
    """The five-vertex worked example used throughout the prompt templates."""
    return Graph(
        ("A", "B", "C", "D", "E"),
        (("A", "B"), ("A", "C"), ("B", "C"), ("C", "D"), ("D", "E")),
    )


@pytest.fixture
def triangle() -> Graph:
    return Graph(("A", "B", "C"), (("A", "B"), ("B", "C"), ("C", "A")))


def complete_graph(n: int) -> Graph:
    vertices = tuple(str(i) for i in range(1, n + 1))
    edges = tuple(
        (str(i), str(j)) for i in range(1, n + 1) for j in range(i + 1, n + 1)
    )
    return Graph(vertices, edges)


def cycle_graph(n: int) -> Graph:
    vertices = tuple(str(i) for i in range(1, n + 1))
    edges = tuple((str(i), str(i % n + 1)) for i in range(1, n + 1))
    return Graph(vertices, edges)


@pytest.fixture
def petersen() -> Graph:
    outer = [(str(i + 1), str((i + 1) % 5 + 1)) for i in range(5)]
    spokes = [(str(i + 1), str(i + 6)) for i in range(5)]
    inner = [(str(i + 6), str((i + 2) % 5 + 6)) for i in range(5)]
    return Graph(tuple(str(i) for i in range(1, 11)), tuple(outer + spokes + inner))
