"""
conftest.py

Shared fixtures and the hypothesis profile for the test suite.
"""

import pytest
from hypothesis import HealthCheck, settings as hypothesis_settings

from rainbow_trees.config import settings
from rainbow_trees.graph import EdgeColoredMultigraph, complete_graph

hypothesis_settings.register_profile(
    "rainbow",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
hypothesis_settings.load_profile("rainbow")


@pytest.fixture(autouse=True)
def dump_dir(tmp_path, monkeypatch):
    """Send internal-failure dumps to a per-test directory"""
    directory = tmp_path / "dumps"
    monkeypatch.setattr(settings, "dump_dir", directory)
    return directory


@pytest.fixture
def rainbow_triangle() -> EdgeColoredMultigraph:
    return complete_graph(3, [0, 1, 2])


@pytest.fixture
def rainbow_k4() -> EdgeColoredMultigraph:
    return complete_graph(4, list(range(6)))


@pytest.fixture
def mono_k4() -> EdgeColoredMultigraph:
    return complete_graph(4, [0] * 6)


@pytest.fixture
def hand_example() -> EdgeColoredMultigraph:
    """Vertices a, b, c, d = 0..3; edges ab:1, cd:2, ac:3, bd:3 with labels 1, 2, 3 as colors 0, 1, 2."""
    return EdgeColoredMultigraph(4, ((0, 1, 0), (2, 3, 1), (0, 2, 2), (1, 3, 2)))
