"""GeneralACL / HyperACL drivers.

Both drivers start a lazy PageRank walk from ``psi_seeds`` (``phi`` restricted
to the seeds), sweep over ``p(v)/phi(v)`` and return the minimum-conductance
sweep set. The returned cluster is *not* forced to contain the seeds; pass
``require_seeds=True`` to restrict the sweep to prefixes that do.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace

from .errors import DegenerateSet, ValidationError
from .hyper_core import build_hyper_transition
from .markov import DEFAULT_MAX_ITER, DEFAULT_TOL, lazy_ppr, make_psi
from .sweep import SweepProfile, conductance, sweep_profile

AUTO = "auto"
ALPHA_MIN = 1e-6


def clamp_alpha(a):
    return min(1.0, max(ALPHA_MIN, a))


@dataclass(frozen=True)
class ClusterQuery:
    seeds: tuple
    alpha: float | str = AUTO
    tol: float = DEFAULT_TOL
    max_iter: int = DEFAULT_MAX_ITER
    patience: int = 0  # 0 disables early stopping
    require_seeds: bool = False

    def __post_init__(self):
        seeds = tuple(sorted(set(int(v) for v in self.seeds)))
        if not seeds:
            raise ValidationError("seed set is empty")
        object.__setattr__(self, "seeds", seeds)
        if self.alpha != AUTO:
            a = float(self.alpha)
            if not 0.0 < a <= 1.0:
                raise ValidationError(f"alpha must lie in (0, 1], got {self.alpha!r}")
            object.__setattr__(self, "alpha", a)
        if self.patience < 0:
            raise ValidationError("patience must be nonnegative")


@dataclass(frozen=True, eq=False)
class ClusterResult:
    cluster: tuple
    conductance: float
    profile: SweepProfile
    alpha_used: float
    passes: int
    timings: dict = field(default_factory=dict)
    ppr_iterations: int = 0
    alpha_pass1: float | None = None

    def to_dict(self, timing=True):
        out = {
            "cluster": list(self.cluster),
            "conductance": self.conductance,
            "alpha_used": self.alpha_used,
            "passes": self.passes,
            "alpha_pass1": self.alpha_pass1,
            "ppr_iterations": self.ppr_iterations,
            "profile": self.profile.to_dict(),
        }
        if timing:
            out["timings"] = dict(self.timings)
        return out


def _fixed_alpha_run(ts, q: ClusterQuery) -> ClusterResult:
    t0 = time.perf_counter()
    s = make_psi(ts, q.seeds)
    ppr = lazy_ppr(ts, s, q.alpha, tol=q.tol, max_iter=q.max_iter)
    t1 = time.perf_counter()
    profile = sweep_profile(ts, ppr, patience=q.patience, require=q.seeds if q.require_seeds else None)
    t2 = time.perf_counter()
    if profile.best_index is None:
        raise DegenerateSet("no sweep set has a defined conductance")
    return ClusterResult(
        cluster=profile.best_set,
        conductance=profile.best_conductance,
        profile=profile,
        alpha_used=q.alpha,
        passes=1,
        timings={"ppr": t1 - t0, "sweep": t2 - t1},
        ppr_iterations=ppr.iterations,
    )


def general_acl(ts, q: ClusterQuery) -> ClusterResult:
    """Local cluster around ``q.seeds`` on a prebuilt transition system."""
    if q.alpha == AUTO:
        return auto_alpha(lambda qq: _fixed_alpha_run(ts, qq), q, ts)
    return _fixed_alpha_run(ts, q)


def hyper_acl(h, q: ClusterQuery, ts=None) -> ClusterResult:
    """HyperACL: build the EDVW walk (unless ``ts`` is given), then run :func:`general_acl`."""
    t0 = time.perf_counter()
    if ts is None:
        ts = build_hyper_transition(h, tol=q.tol, max_iter=q.max_iter)
    t1 = time.perf_counter()
    res = general_acl(ts, q)
    return replace(res, timings={"transition": t1 - t0, **res.timings})


def auto_alpha(run, q: ClusterQuery, ts) -> ClusterResult:
    """Two-pass protocol when the optimal conductance is unknown.

    Pass 1 uses ``alpha = Phi(seeds)`` with a full sweep and yields a cluster
    ``S'``; pass 2 reruns with ``alpha = Phi(S')`` and honours ``q.patience``.
    Degenerate (zero) alphas are clamped to :data:`ALPHA_MIN`.
    """
    if q.alpha != AUTO:
        raise ValidationError("auto_alpha requires a query with alpha='auto'")
    if len(q.seeds) >= ts.n:
        raise DegenerateSet("seed set covers every vertex")
    t0 = time.perf_counter()
    a1 = clamp_alpha(conductance(ts, q.seeds))
    first = run(replace(q, alpha=a1, patience=0))
    a2 = clamp_alpha(first.conductance)
    t1 = time.perf_counter()
    second = run(replace(q, alpha=a2))
    timings = {"alpha_discovery": t1 - t0, **second.timings}
    return replace(second, passes=2, alpha_pass1=a1, timings=timings)


def phi_or_nan(ts, S):
    try:
        return conductance(ts, S)
    except DegenerateSet:
        return math.nan
