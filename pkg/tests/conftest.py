import numpy as np
import pytest

from lcluster import _backend
from lcluster.graph_core import GeneralGraph, build_graph_transition
from lcluster.hyper_core import EdvwHypergraph, build_hyper_transition

BARBELL_EDGES = [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)]


def undirected(pairs, w=1.0):
    out = []
    for a, b in pairs:
        out += [(a, b, w), (b, a, w)]
    return out


def barbell():
    return GeneralGraph.from_edges(6, undirected(BARBELL_EDGES))


def random_graph(rng, n, extra=None, self_loops=True):
    """Strongly connected weighted digraph: a random Hamiltonian cycle plus extra arcs."""
    perm = rng.permutation(n)
    edges = [(int(perm[i]), int(perm[(i + 1) % n]), float(rng.uniform(0.1, 3.0))) for i in range(n)]
    extra = n * 2 if extra is None else extra
    for _ in range(extra):
        u, v = (int(x) for x in rng.integers(n, size=2))
        if u == v and not self_loops:
            continue
        edges.append((u, v, float(rng.uniform(0.1, 3.0))))
    return GeneralGraph.from_edges(n, edges)


def random_hypergraph(rng, n, m=None, max_arity=4):
    """Connected EDVW hypergraph: a path of 2-edges plus random larger edges."""
    m = n if m is None else m
    perm = rng.permutation(n)
    hedges = []
    for i in range(n - 1):
        hedges.append((i, float(rng.uniform(0.5, 3)),
                       [(int(perm[i]), float(rng.uniform(0.5, 4))), (int(perm[i + 1]), float(rng.uniform(0.5, 4)))]))
    for j in range(m):
        k = int(rng.integers(2, max_arity + 1))
        members = rng.choice(n, size=min(k, n), replace=False)
        hedges.append((n - 1 + j, float(rng.uniform(0.5, 3)),
                       [(int(v), float(rng.uniform(0.5, 4))) for v in members]))
    return EdvwHypergraph.from_edges(n, hedges)


def random_instance(rng, n):
    """Alternates graphs and hypergraphs; returns a TransitionSystem."""
    if rng.random() < 0.5:
        return build_graph_transition(random_graph(rng, n))
    return build_hyper_transition(random_hypergraph(rng, n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture(params=[b for b in _backend.BACKENDS if b != "numba" or _backend.HAVE_NUMBA])
def backend(request):
    with _backend.use_backend(request.param):
        yield request.param


# acceptance criteria report one line each; collected here and echoed at the end of the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
