"""
Shared fixtures: fresh settings for every test and a few small circulants.
"""

import networkx as nx
import numpy as np
import pytest

from circulant_canon.core import ConnectionSet, Digraph, cayley
from circulant_canon.models import settings as settings_module
from circulant_canon.models.settings import CirculantSettings


@pytest.fixture(autouse=True)
def fresh_settings(monkeypatch):
    """Every test starts from default settings; CLI overrides do not leak."""
    for name in list(CirculantSettings.model_fields):
        monkeypatch.delenv(f"CIRCULANT_{name.upper()}", raising=False)
    monkeypatch.setattr(settings_module, "_settings", CirculantSettings(_env_file=None))
    yield


def circulant(n: int, *elements: int, undirected: bool = False):
    return cayley(ConnectionSet(n=n, elements=elements, undirected=undirected))


@pytest.fixture
def directed_triangle():
    return circulant(3, 1)


@pytest.fixture
def five_cycle():
    return circulant(5, 1, 4, undirected=True)


@pytest.fixture
def complete_five():
    return circulant(5, 1, 2, 3, 4, undirected=True)


def random_digraph(n: int, seed: int, density: float = 0.4) -> Digraph:
    rng = np.random.default_rng(seed)
    adjacency = rng.random((n, n)) < density
    np.fill_diagonal(adjacency, False)
    return Digraph(adjacency)


def to_networkx(x: Digraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(x.n))
    g.add_edges_from(x.edges())
    return g
