"""Exhaustive minimum-conductance search for small instances.

Enumerates every ``S`` with ``must_contain ⊆ S ⊊ V`` in Gray-code order,
updating cut and volume incrementally as one vertex flips per step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DegenerateSet, InvalidVertex, TooLarge
from .sweep import conductance, volume

DEFAULT_N_CAP = 22
# bound constant for the vol(S*) <= 1/3 case
BOUND_CONSTANT = 235.0


@dataclass(frozen=True)
class OracleResult:
    best_set: tuple
    best_phi: float
    constraint: dict
    sets_evaluated: int

    def to_dict(self):
        return {
            "best_set": list(self.best_set),
            "best_phi": self.best_phi,
            "constraint": self.constraint,
            "sets_evaluated": self.sets_evaluated,
        }


def flow_matrix(ts):
    """Dense ``F[u, v] = phi(u) P[u, v]``."""
    F = np.zeros((ts.n, ts.n))
    F[ts.row_of, ts.indices] = ts.flow
    return F


def expected_count(n, must_size):
    """Number of non-degenerate sets containing a fixed ``must_size``-set."""
    count = 2 ** (n - must_size) - 1  # drop the full vertex set
    if must_size == 0:
        count -= 1  # and the empty set
    return count


def _prepare(ts, must_contain, n_cap):
    if ts.n > n_cap:
        raise TooLarge(ts.n, n_cap)
    must = sorted(set(int(v) for v in must_contain))
    for v in must:
        if not 0 <= v < ts.n:
            raise InvalidVertex(v, ts.n)
    if len(must) == ts.n:
        raise DegenerateSet("must_contain covers every vertex")
    must_mask = 0
    for v in must:
        must_mask |= 1 << v
    free = np.array([v for v in range(ts.n) if not (must_mask >> v) & 1], dtype=np.int64)
    return must, must_mask, free


def _mask_to_set(mask, n):
    return tuple(v for v in range(n) if (mask >> v) & 1)


def optimal_conductance(ts, must_contain=(), n_cap=DEFAULT_N_CAP) -> OracleResult:
    must, must_mask, free = _prepare(ts, must_contain, n_cap)
    mask, count = kernels.optimal_subset(flow_matrix(ts), ts.phi, free, must_mask, ts.n)
    best = _mask_to_set(mask, ts.n)
    return OracleResult(
        best_set=best,
        best_phi=conductance(ts, best),
        constraint={"contains": must},
        sets_evaluated=count,
    )


def gray_code_boundaries(ts, must_contain=(), n_cap=DEFAULT_N_CAP):
    """``(sets, cuts, vols)`` for every set in Gray-code order, computed incrementally."""
    must, must_mask, free = _prepare(ts, must_contain, n_cap)
    masks, cuts, vols = kernels.gray_trace(flow_matrix(ts), ts.phi, free, must_mask, ts.n)
    return [_mask_to_set(int(m), ts.n) for m in masks], cuts, vols


@dataclass(frozen=True)
class ConditionReport:
    vol_star: float
    phi_star: float
    cond1: bool  # vol(S*) <= 1/2
    cond1_strong: bool  # vol(S*) <= 1/3
    cond2: bool  # S* also optimal among sets containing S* minus seeds
    cond2_phi: float
    vacuous: bool  # S* minus seeds is empty
    bound: float  # sqrt(235 * Phi(S*))

    def to_dict(self):
        return dict(self.__dict__)


def verify_theorem_conditions(ts, seeds, oracle_out: OracleResult, n_cap=DEFAULT_N_CAP) -> ConditionReport:
    star = set(oracle_out.best_set)
    rest = sorted(star - set(int(v) for v in seeds))
    second = optimal_conductance(ts, rest, n_cap=n_cap)
    vol_star = volume(ts, star)
    phi_star = oracle_out.best_phi
    return ConditionReport(
        vol_star=vol_star,
        phi_star=phi_star,
        cond1=vol_star <= 0.5 + kernels.TIE_TOL,
        cond1_strong=vol_star <= 1.0 / 3.0 + kernels.TIE_TOL,
        cond2=abs(second.best_phi - phi_star) <= kernels.TIE_TOL,
        cond2_phi=second.best_phi,
        vacuous=not rest,
        bound=math.sqrt(BOUND_CONSTANT * phi_star),
    )
