import shutil

import numpy as np
import pytest

from flatpaths.lattice import PeriodicGraph, GraphFragment, apply_refinement


GRAPHS = "tests/example_data/graphs"


def random_graph(rng, max_vertices=8, max_dimension=2):
    """Random admissible periodic graph with offsets in {-1, 0, 1}, mostly zero."""
    d = int(rng.integers(1, max_dimension + 1))
    nu = int(rng.integers(1, max_vertices + 1))
    edges = []
    for _ in range(int(rng.integers(nu, 2 * nu + 2))):
        u, v = (int(x) for x in rng.integers(0, nu, size=2))
        offset = tuple(int(n) for n in rng.choice([-1, 0, 0, 0, 1], size=d))
        if u == v and not any(offset):
            continue
        edges.append((u, v, offset))
    graph = PeriodicGraph(d, nu, edges, name="random")
    graph, _ = apply_refinement(graph, None, "auto")
    return graph


def random_tree_with_chords(rng, size, chords, d=2):
    """Random tree on ``size`` vertices plus ``chords`` extra edges, all with random offsets."""
    edges = set()
    for v in range(1, size):
        u = int(rng.integers(0, v))
        edges.add((u, v, tuple(int(n) for n in rng.integers(-2, 3, size=d))))
    for _ in range(chords if size > 1 else 0):
        u, v = sorted(int(x) for x in rng.choice(size, size=2, replace=False))
        edges.add((u, v, tuple(int(n) for n in rng.integers(-2, 3, size=d))))
    return GraphFragment(d, range(size), edges)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(autouse=True, scope="session")
def python_on_path(tmp_path_factory):
    """Make ``python`` in shelled-out CLI tests resolve to the running interpreter."""
    import os
    import sys
    if shutil.which("python") is None:
        bindir = tmp_path_factory.mktemp("bin")
        os.symlink(sys.executable, bindir / "python")
        os.environ["PATH"] = str(bindir) + os.pathsep + os.environ.get("PATH", "")
    yield
