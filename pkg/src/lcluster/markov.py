"""Stationary distributions and exact personalised PageRank.

Vectors are row vectors: one walk step is ``p @ P`` and the lazy step is
``p @ M`` with ``M = (I + P) / 2``. The lazy PageRank vector is the fixed
point of ``p = alpha*s + (1 - alpha) * p @ M``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import EmptySeedSet, InvalidVertex, NoConvergence, ValidationError

DEFAULT_TOL = 1e-12
DEFAULT_MAX_ITER = 200_000
# Entries at or below this count as outside the support.
SUPPORT_EPS = 1e-15


def _csr_arrays(P):
    if isinstance(P, tuple):
        indptr, indices, data = P
        return (np.asarray(indptr, np.int64), np.asarray(indices, np.int64), np.asarray(data, np.float64))
    if hasattr(P, "indptr") and hasattr(P, "cindptr"):  # TransitionSystem
        return P.csr
    M = sp.csr_matrix(P)
    M.sort_indices()
    return (M.indptr.astype(np.int64), M.indices.astype(np.int64), M.data.astype(np.float64))


def stationary_distribution(P, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, return_iterations=False):
    """Stationary distribution of a row-stochastic ``P`` by lazy power iteration.

    Iterating the lazy chain ``M`` instead of ``P`` makes the method converge
    for periodic chains too, and ``phi M = phi`` iff ``phi P = phi``.
    ``P`` may be a scipy sparse matrix, a dense array or a CSR triple.
    """
    indptr, indices, data = _csr_arrays(P)
    n = indptr.shape[0] - 1
    p0 = np.full(n, 1.0 / n)
    phi, it, resid = kernels.fixed_point(indptr, indices, data, np.zeros(n), 0.0, 0.5, p0, tol, max_iter)
    if it < 0:
        raise NoConvergence(max_iter, resid)
    phi = phi / phi.sum()
    if return_iterations:
        return phi, it
    return phi


@dataclass(frozen=True, eq=False)
class StartingDistribution:
    s: np.ndarray
    kind: str = "custom"  # "single", "seeds" or "custom"
    seeds: tuple = ()

    @classmethod
    def custom(cls, s, normalize=False):
        s = np.asarray(s, dtype=np.float64)
        if normalize and s.ndim == 1 and s.sum() > 0:
            s = s / s.sum()
        if s.ndim != 1 or np.any(s < 0) or abs(s.sum() - 1.0) > 1e-12:
            raise ValidationError("starting distribution must be nonnegative and sum to 1")
        return cls(s=s, kind="custom", seeds=tuple(np.flatnonzero(s).tolist()))


@dataclass(frozen=True, eq=False)
class PprVector:
    p: np.ndarray
    alpha: float
    source: StartingDistribution
    residual_l1: float
    iterations: int
    lazy: bool = True

    def support(self, eps=SUPPORT_EPS):
        return np.flatnonzero(self.p > eps)


def _check_seeds(n, seeds):
    seeds = sorted(set(int(v) for v in seeds))
    if not seeds:
        raise EmptySeedSet()
    for v in seeds:
        if not 0 <= v < n:
            raise InvalidVertex(v, n)
    return seeds


def indicator(n, v):
    """The single-source distribution concentrated on ``v``."""
    (v,) = _check_seeds(n, [v])
    s = np.zeros(n)
    s[v] = 1.0
    return StartingDistribution(s=s, kind="single", seeds=(v,))


def make_psi(ts, seeds) -> StartingDistribution:
    """``phi`` restricted to ``seeds`` and renormalised."""
    seeds = _check_seeds(ts.n, seeds)
    idx = np.array(seeds)
    s = np.zeros(ts.n)
    s[idx] = ts.phi[idx] / ts.phi[idx].sum()
    kind = "single" if len(seeds) == 1 else "seeds"
    if len(seeds) == 1:
        s[idx] = 1.0
    return StartingDistribution(s=s, kind=kind, seeds=tuple(seeds))


def _as_start(ts, s):
    if isinstance(s, StartingDistribution):
        if s.s.shape != (ts.n,):
            raise ValidationError("starting distribution has wrong length")
        return s
    return StartingDistribution.custom(s)


def _ppr(ts, s, alpha, tol, max_iter, walk):
    if not 0.0 < alpha <= 1.0:
        raise ValidationError(f"alpha must lie in (0, 1], got {alpha!r}")
    start = _as_start(ts, s)
    p, it, resid = kernels.fixed_point(ts.indptr, ts.indices, ts.data, start.s, alpha, walk, start.s, tol, max_iter)
    if it < 0:
        raise NoConvergence(max_iter, resid)
    return PprVector(p=p, alpha=float(alpha), source=start, residual_l1=resid, iterations=it, lazy=walk == 0.5)


def lazy_ppr(ts, s, alpha, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> PprVector:
    """Lazy personalised PageRank ``pr(alpha, s)`` by fixed-point iteration from ``s``."""
    return _ppr(ts, s, alpha, tol, max_iter, 0.5)


def standard_ppr(ts, s, alpha_prime, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> PprVector:
    """PageRank on the non-lazy walk: fixed point of ``alpha' s + (1 - alpha') p P``.

    ``lazy_ppr(ts, s, a)`` equals ``standard_ppr(ts, s, 2a / (1 + a))``.
    """
    return _ppr(ts, s, alpha_prime, tol, max_iter, 1.0)


def lazy_to_standard_alpha(alpha):
    return 2.0 * alpha / (1.0 + alpha)


def ppr_residual_trace(ts, s, alpha, steps, lazy=True):
    """``(changes, masses)``: L1 change and total mass of each of the first ``steps`` iterates."""
    start = _as_start(ts, s)
    walk = 0.5 if lazy else 1.0
    p = start.s.copy()
    changes, masses = [], []
    for _ in range(steps):
        y = kernels.vecmat(ts.indptr, ts.indices, ts.data, p)
        new = alpha * start.s + (1 - alpha) * ((1 - walk) * p + walk * y)
        changes.append(float(np.abs(new - p).sum()))
        masses.append(float(new.sum()))
        p = new
    return np.array(changes), np.array(masses)
