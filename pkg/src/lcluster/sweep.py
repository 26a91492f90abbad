"""Volumes, boundaries, conductance, sweep cuts and the Lovasz-Simonovits curve.

All set functions are measured on a :class:`~lcluster.graph_core.TransitionSystem`:
``vol(S) = sum_{u in S} phi(u)`` and ``|dS| = sum_{u in S, v not in S} phi(u) P[u, v]``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateSet, EmptySupport, InvalidVertex, OutOfDomain, ValidationError
from .markov import SUPPORT_EPS, PprVector


def _mask(ts, S):
    mask = np.zeros(ts.n, dtype=bool)
    for v in S:
        v = int(v)
        if not 0 <= v < ts.n:
            raise InvalidVertex(v, ts.n)
        mask[v] = True
    return mask


def volume(ts, S) -> float:
    mask = _mask(ts, S)
    return float(ts.phi[mask].sum())


def boundary(ts, S) -> float:
    """Stationary probability flow out of ``S`` in one step."""
    mask = _mask(ts, S)
    cross = mask[ts.row_of] & ~mask[ts.indices]
    return float(ts.flow[cross].sum())


def boundary_in(ts, S) -> float:
    """Stationary probability flow into ``S`` in one step; equals :func:`boundary`."""
    mask = _mask(ts, S)
    cross = ~mask[ts.row_of] & mask[ts.indices]
    return float(ts.flow[cross].sum())


def conductance(ts, S) -> float:
    """``|dS| / min(vol(S), 1 - vol(S))``; raises :class:`DegenerateSet` for empty or full ``S``."""
    mask = _mask(ts, S)
    size = int(mask.sum())
    if size == 0 or size == ts.n:
        raise DegenerateSet()
    vol = float(ts.phi[mask].sum())
    cross = mask[ts.row_of] & ~mask[ts.indices]
    cut = float(ts.flow[cross].sum())
    den = min(vol, 1.0 - vol)
    if den <= 0.0:
        raise DegenerateSet("vertex set has zero volume on one side")
    # roundoff guard: the ratio is at most 1 in exact arithmetic
    return min(cut / den, 1.0)


def _pvec(p):
    if isinstance(p, PprVector):
        return p.p
    return np.asarray(p, dtype=np.float64)


def sweep_order(ts, p):
    """Support of ``p`` sorted by ``p(v)/phi(v)`` descending, ties by ascending id."""
    p = _pvec(p)
    support = np.flatnonzero(p > SUPPORT_EPS)
    if support.size == 0:
        raise EmptySupport()
    ratio = p[support] / ts.phi[support]
    return support[np.lexsort((support, -ratio))]


@dataclass(frozen=True, eq=False)
class SweepProfile:
    order: np.ndarray
    prefix_vol: np.ndarray
    prefix_boundary: np.ndarray
    prefix_conductance: np.ndarray  # NaN for the degenerate full-set prefix
    best_index: int | None
    best_set: tuple
    scanned: int

    @property
    def best_conductance(self):
        if self.best_index is None:
            return math.nan
        return float(self.prefix_conductance[self.best_index])

    def to_dict(self):
        def clean(a):
            return [None if math.isnan(x) else x for x in a.tolist()]

        return {
            "order": self.order.tolist(),
            "vol": self.prefix_vol.tolist(),
            "boundary": self.prefix_boundary.tolist(),
            "phi": clean(self.prefix_conductance),
            "best_index": self.best_index,
            "best_set": list(self.best_set),
        }

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["k", "vertex", "vol", "boundary", "conductance"])
        for j in range(self.scanned):
            c = self.prefix_conductance[j]
            w.writerow([j + 1, int(self.order[j]), repr(float(self.prefix_vol[j])),
                        repr(float(self.prefix_boundary[j])), "" if math.isnan(c) else repr(float(c))])
        return buf.getvalue()


def sweep_profile(ts, p, patience=0, require=None) -> SweepProfile:
    """Conductance of every sweep prefix, computed incrementally.

    With ``patience > 0`` the scan stops after that many consecutive prefixes
    without a new minimum. ``require`` restricts the argmin to prefixes that
    contain every listed vertex. The full vertex set never wins: its
    conductance is undefined.
    """
    if patience < 0:
        raise ValidationError("patience must be nonnegative")
    order = sweep_order(ts, p)
    cut, vol, cond, scanned = kernels.sweep(order, ts.phi, *ts.csr, *ts.csc, patience=patience)
    candidates = np.where(np.isnan(cond), np.inf, cond)
    if require:
        rank = np.full(ts.n, ts.n, dtype=np.int64)
        rank[order] = np.arange(order.size)
        first = int(max(rank[int(v)] for v in require))
        candidates[:first] = np.inf
    if candidates.size and np.isfinite(candidates).any():
        best = int(np.argmin(candidates))
        best_set = tuple(sorted(order[: best + 1].tolist()))
    else:
        best, best_set = None, ()
    return SweepProfile(
        order=order,
        prefix_vol=vol,
        prefix_boundary=cut,
        prefix_conductance=cond,
        best_index=best,
        best_set=best_set,
        scanned=scanned,
    )


def early_stop_sweep(ts, p, patience) -> SweepProfile:
    if patience < 1:
        raise ValidationError("patience must be at least 1")
    return sweep_profile(ts, p, patience=patience)


# ---------------------------------------------------------------------------
# Lovasz-Simonovits curve


@dataclass(frozen=True, eq=False)
class LscCurve:
    vols: np.ndarray  # vol(S_j), j = 1..N_p
    values: np.ndarray  # p(S_j)
    slopes: np.ndarray  # p(v_j)/phi(v_j): slope of the segment ending at vols[j]

    @property
    def breakpoints(self):
        pts = [(0.0, 0.0)]
        pts.extend(zip(self.vols.tolist(), self.values.tolist()))
        pts.append((1.0, 1.0))
        return pts


def lsc_curve(ts, p) -> LscCurve:
    pv = _pvec(p)
    order = sweep_order(ts, pv)
    return LscCurve(
        vols=np.cumsum(ts.phi[order]),
        values=np.cumsum(pv[order]),
        slopes=pv[order] / ts.phi[order],
    )


def lsc_eval(c: LscCurve, k):
    """``I_p(k)``; accepts a scalar or an array of points in ``[0, 1]``."""
    k_arr = np.atleast_1d(np.asarray(k, dtype=np.float64))
    if np.any(k_arr < 0.0) or np.any(k_arr > 1.0 + 1e-12) or np.any(np.isnan(k_arr)):
        bad = k_arr[(k_arr < 0.0) | (k_arr > 1.0 + 1e-12) | np.isnan(k_arr)][0]
        raise OutOfDomain(float(bad))
    j = np.searchsorted(c.vols, k_arr, side="left")
    inside = j < c.vols.size
    jj = np.minimum(j, c.vols.size - 1)
    prev_vol = np.where(jj > 0, c.vols[jj - 1], 0.0)
    prev_val = np.where(jj > 0, c.values[jj - 1], 0.0)
    exact = inside & (c.vols[jj] == k_arr)
    out = np.where(exact, c.values[jj], prev_val + (k_arr - prev_vol) * c.slopes[jj])
    out = np.where(inside, out, 1.0)
    out = np.where(k_arr == 0.0, 0.0, out)
    if np.ndim(k) == 0:
        return float(out[0])
    return out
