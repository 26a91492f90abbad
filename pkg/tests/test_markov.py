import numpy as np
import pytest
import scipy.sparse as sp
from hypothesis import given, settings, strategies as st

from lcluster.errors import EmptySeedSet, InvalidVertex, NoConvergence, ValidationError
from lcluster.graph_core import GeneralGraph, build_graph_transition
from lcluster.markov import (
    StartingDistribution,
    indicator,
    lazy_ppr,
    lazy_to_standard_alpha,
    make_psi,
    ppr_residual_trace,
    standard_ppr,
    stationary_distribution,
)

from conftest import random_instance, undirected

TOL = 1e-12


@pytest.fixture
def k3():
    return build_graph_transition(GeneralGraph.from_edges(3, undirected([(0, 1), (1, 2), (0, 2)])))


def lazy_solve(ts, s, alpha):
    """Direct linear solve of p (I - (1-alpha) M) = alpha s."""
    M = 0.5 * (np.eye(ts.n) + ts.dense())
    return np.linalg.solve((np.eye(ts.n) - (1 - alpha) * M).T, alpha * s)


def test_stationary_examples():
    np.testing.assert_allclose(stationary_distribution(np.array([[0.5, 0.5], [0.5, 0.5]])), [0.5, 0.5])
    np.testing.assert_allclose(stationary_distribution(np.roll(np.eye(3), 1, axis=1)), [1 / 3] * 3, atol=1e-12)
    np.testing.assert_allclose(stationary_distribution(sp.csr_matrix([[0.9, 0.1], [0.5, 0.5]])), [5 / 6, 1 / 6], atol=1e-11)


def test_stationary_no_convergence():
    with pytest.raises(NoConvergence) as ei:
        stationary_distribution(np.array([[0.9, 0.1], [0.5, 0.5]]), max_iter=2)
    assert ei.value.exit_code == 3


def test_alpha_one_returns_s(k3):
    s = make_psi(k3, [1])
    assert lazy_ppr(k3, s, 1.0).p.tolist() == s.s.tolist()
    assert standard_ppr(k3, s, 1.0).p.tolist() == s.s.tolist()


def test_k3_half(k3):
    p = lazy_ppr(k3, indicator(3, 0), 0.5, tol=TOL).p
    assert p[0] > p[1] and abs(p[1] - p[2]) < 1e-14
    assert abs(p.sum() - 1) < 1e-12
    np.testing.assert_allclose(p, lazy_solve(k3, np.eye(3)[0], 0.5), atol=4 * TOL)
    # closed form of the 3x3 system: p = (5/7, 1/7, 1/7)
    np.testing.assert_allclose(p, [5 / 7, 1 / 7, 1 / 7], atol=4 * TOL)


def test_k3_small_alpha_approaches_phi(k3):
    p = lazy_ppr(k3, indicator(3, 0), 0.01).p
    assert np.abs(p - 1 / 3).sum() <= 0.02


def test_k3_standard_matches_lazy(k3):
    a = lazy_ppr(k3, indicator(3, 0), 0.5, tol=TOL).p
    b = standard_ppr(k3, indicator(3, 0), 2 / 3, tol=TOL).p
    assert np.abs(a - b).sum() <= 4 * TOL


@pytest.mark.parametrize("alpha", [0.1, 0.3, 0.5, 0.9])
@pytest.mark.parametrize("seed", range(5))
def test_lazy_standard_equivalence(alpha, seed):
    rng = np.random.default_rng(seed)
    ts = random_instance(rng, 20)
    s = StartingDistribution.custom(rng.random(ts.n), normalize=True)
    a = lazy_ppr(ts, s, alpha, tol=TOL).p
    b = standard_ppr(ts, s, lazy_to_standard_alpha(alpha), tol=TOL).p
    assert np.abs(a - b).sum() <= 4 * TOL
    np.testing.assert_allclose(a, lazy_solve(ts, s.s, alpha), atol=1e-10)


def test_fixed_point_residual(k3):
    v = lazy_ppr(k3, indicator(3, 2), 0.2, tol=TOL)
    M = 0.5 * (np.eye(3) + k3.dense())
    assert np.abs(v.p - (0.2 * v.source.s + 0.8 * v.p @ M)).sum() <= 2 * TOL
    assert v.residual_l1 <= TOL and v.iterations > 0 and v.lazy


def test_make_psi_examples(k3):
    np.testing.assert_allclose(make_psi(k3, [0, 1, 2]).s, k3.phi)
    assert make_psi(k3, [2]).s.tolist() == [0.0, 0.0, 1.0]
    np.testing.assert_allclose(make_psi(k3, [0, 1]).s, [0.5, 0.5, 0.0], atol=1e-12)
    assert make_psi(k3, [0, 1]).kind == "seeds"


def test_make_psi_errors(k3):
    with pytest.raises(EmptySeedSet):
        make_psi(k3, [])
    with pytest.raises(InvalidVertex):
        make_psi(k3, [3])


def test_bad_alpha(k3):
    for a in (0.0, -0.1, 1.5):
        with pytest.raises(ValidationError):
            lazy_ppr(k3, indicator(3, 0), a)


def test_custom_start_validation():
    with pytest.raises(ValidationError):
        StartingDistribution.custom([-1.0, 2.0])
    s = StartingDistribution.custom([1.0, 3.0], normalize=True)
    assert s.s.tolist() == [0.25, 0.75]


def test_ppr_no_convergence(k3):
    with pytest.raises(NoConvergence):
        lazy_ppr(k3, indicator(3, 0), 1e-6, max_iter=5)


def test_support_within_reachable():
    # 0 -> 1 -> 2 -> 0 cycle plus a tail: everything is reachable, support is full
    ts = build_graph_transition(GeneralGraph.from_edges(3, [(0, 1, 1), (1, 2, 1), (2, 0, 1)]))
    v = lazy_ppr(ts, indicator(3, 0), 0.3)
    assert v.support().tolist() == [0, 1, 2]


@pytest.mark.parametrize("seed", range(5))
def test_linearity(seed):
    rng = np.random.default_rng(seed + 100)
    ts = random_instance(rng, 15)
    s1 = StartingDistribution.custom(rng.random(ts.n), normalize=True)
    s2 = StartingDistribution.custom(rng.random(ts.n), normalize=True)
    c = float(rng.random())
    mix = StartingDistribution.custom(c * s1.s + (1 - c) * s2.s, normalize=True)
    lhs = lazy_ppr(ts, mix, 0.15, tol=TOL).p
    rhs = c * lazy_ppr(ts, s1, 0.15, tol=TOL).p + (1 - c) * lazy_ppr(ts, s2, 0.15, tol=TOL).p
    assert np.abs(lhs - rhs).sum() <= 4 * TOL


@pytest.mark.parametrize("lazy", [True, False])
def test_residual_monotone_and_mass(lazy):
    ts = random_instance(np.random.default_rng(7), 25)
    res, mass = ppr_residual_trace(ts, indicator(ts.n, 3), 0.1, 60, lazy=lazy)
    assert (np.diff(res) <= 1e-15).all()
    np.testing.assert_allclose(mass, 1.0, atol=1e-9)


@settings(max_examples=30, deadline=None)
@given(st.integers(2, 15), st.floats(0.01, 1.0), st.integers(0, 2**32 - 1))
def test_property_ppr_is_distribution(n, alpha, seed):
    rng = np.random.default_rng(seed)
    ts = random_instance(rng, n)
    v = lazy_ppr(ts, make_psi(ts, [0]), alpha)
    assert (v.p >= 0).all()
    assert abs(v.p.sum() - 1) <= 1e-9


@pytest.mark.parametrize("alpha", [0.02, 0.1, 0.4])
def test_small_alpha_error_within_tol(alpha):
    # the stop rule bounds distance to the exact fixed point, not just the last step
    ts = random_instance(np.random.default_rng(31), 30)
    s = make_psi(ts, [0, 1])
    p = lazy_ppr(ts, s, alpha, tol=1e-10).p
    assert np.abs(p - lazy_solve(ts, s.s, alpha)).sum() <= 1e-10
