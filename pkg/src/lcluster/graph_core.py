"""General graphs and random-walk transition systems.

A :class:`GeneralGraph` may be edge-weighted, vertex-weighted, directed and
self-looped. Its default walk is ``P = D^-1 W`` (row normalisation). Vertex
weights are parsed and carried along but **do not** change ``P``; callers
with a domain-specific walk should write it out as a P-matrix file and use
:func:`load_transition_matrix`.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from .errors import (
    InvalidVertex,
    NotStronglyConnected,
    ParseError,
    RowSumViolation,
    ValidationError,
    ZeroOutDegree,
)
from .markov import DEFAULT_MAX_ITER, DEFAULT_TOL, stationary_distribution

log = logging.getLogger(__name__)

ROW_SUM_TOL = 1e-6


def _frozen(a, dtype):
    a = np.ascontiguousarray(a, dtype=dtype)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class GeneralGraph:
    """Weighted directed graph on vertices ``0..n-1``.

    Edges are stored merged (duplicate ``(src, dst)`` pairs summed in input
    order) and sorted by ``(src, dst)``. Zero-weight edges are dropped and
    counted in ``dropped_zero``.
    """

    n: int
    src: np.ndarray
    dst: np.ndarray
    weight: np.ndarray
    vertex_weights: np.ndarray
    dropped_zero: int = 0

    @classmethod
    def from_edges(cls, n, edges, vertex_weights=None):
        n = int(n)
        if n < 1:
            raise ValidationError("graph needs at least one vertex")
        edges = list(edges)
        src = np.array([e[0] for e in edges], dtype=np.int64)
        dst = np.array([e[1] for e in edges], dtype=np.int64)
        w = np.array([e[2] for e in edges], dtype=np.float64)
        for arr in (src, dst):
            bad = np.flatnonzero((arr < 0) | (arr >= n))
            if bad.size:
                raise InvalidVertex(int(arr[bad[0]]), n)
        if np.any(w < 0) or not np.all(np.isfinite(w)):
            raise ValidationError("edge weights must be finite and nonnegative")
        nonzero = w > 0
        dropped = int((~nonzero).sum())
        if dropped:
            log.warning("dropped %d zero-weight edges", dropped)
        src, dst, w = src[nonzero], dst[nonzero], w[nonzero]
        key = src * n + dst
        order = np.argsort(key, kind="stable")
        key, w = key[order], w[order]
        if key.size:
            starts = np.flatnonzero(np.r_[True, key[1:] != key[:-1]])
            merged = np.add.reduceat(w, starts)
            key = key[starts]
        else:
            merged = w
        vw = np.ones(n)
        if vertex_weights is not None:
            items = vertex_weights.items() if isinstance(vertex_weights, dict) else enumerate(vertex_weights)
            for v, x in items:
                if not 0 <= v < n:
                    raise InvalidVertex(v, n)
                if not x > 0:
                    raise ValidationError(f"vertex weight of {v} must be positive")
                vw[v] = x
        return cls(
            n=n,
            src=_frozen(key // n, np.int64),
            dst=_frozen(key % n, np.int64),
            weight=_frozen(merged, np.float64),
            vertex_weights=_frozen(vw, np.float64),
            dropped_zero=dropped,
        )

    @property
    def edges(self):
        return list(zip(self.src.tolist(), self.dst.tolist(), self.weight.tolist()))

    def adjacency(self):
        return sp.csr_matrix((self.weight, (self.src, self.dst)), shape=(self.n, self.n))

    def symmetrized(self):
        """Copy with every non-loop edge also added in the reverse direction."""
        loops = self.src == self.dst
        src = np.concatenate([self.src, self.dst[~loops]])
        dst = np.concatenate([self.dst, self.src[~loops]])
        w = np.concatenate([self.weight, self.weight[~loops]])
        return GeneralGraph.from_edges(self.n, zip(src.tolist(), dst.tolist(), w.tolist()), self.vertex_weights)


@dataclass(frozen=True, eq=False)
class TransitionSystem:
    """Row-stochastic ``P`` with row (CSR) and column (CSC) views, plus ``phi``."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray
    data: np.ndarray
    cindptr: np.ndarray
    cindices: np.ndarray
    cdata: np.ndarray
    phi: np.ndarray
    stationary_iterations: int = field(default=0)

    @classmethod
    def from_csr(cls, n, indptr, indices, data, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER, check_connected=True):
        P = sp.csr_matrix((np.asarray(data, float), np.asarray(indices), np.asarray(indptr)), shape=(n, n))
        P.sort_indices()
        if check_connected:
            ncomp, _ = connected_components(P, directed=True, connection="strong")
            if ncomp > 1:
                raise NotStronglyConnected(int(ncomp))
        indptr = _frozen(P.indptr, np.int64)
        indices = _frozen(P.indices, np.int64)
        data = _frozen(P.data, np.float64)
        C = P.tocsc()
        C.sort_indices()
        phi, iters = stationary_distribution((indptr, indices, data), tol=tol, max_iter=max_iter, return_iterations=True)
        return cls(
            n=int(n),
            indptr=indptr,
            indices=indices,
            data=data,
            cindptr=_frozen(C.indptr, np.int64),
            cindices=_frozen(C.indices, np.int64),
            cdata=_frozen(C.data, np.float64),
            phi=_frozen(phi, np.float64),
            stationary_iterations=iters,
        )

    @property
    def csr(self):
        return (self.indptr, self.indices, self.data)

    @property
    def csc(self):
        return (self.cindptr, self.cindices, self.cdata)

    @property
    def matrix(self):
        return sp.csr_matrix((self.data, self.indices, self.indptr), shape=(self.n, self.n))

    def dense(self):
        return self.matrix.toarray()

    @cached_property
    def row_of(self):
        """Row index of every stored nonzero, in CSR order."""
        r = np.repeat(np.arange(self.n, dtype=np.int64), np.diff(self.indptr))
        r.setflags(write=False)
        return r

    @cached_property
    def flow(self):
        """``phi(u) * P[u, v]`` for every stored nonzero, in CSR order."""
        f = self.phi[self.row_of] * self.data
        f.setflags(write=False)
        return f


def build_graph_transition(g: GeneralGraph, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> TransitionSystem:
    """Row-normalise ``W`` and compute the stationary distribution.

    Raises :class:`ZeroOutDegree` for a vertex without out-edges and
    :class:`NotStronglyConnected` if the support of ``W`` has more than one
    strongly connected component.
    """
    W = g.adjacency()
    W.sort_indices()
    rowsum = np.zeros(g.n)
    np.add.at(rowsum, g.src, g.weight)
    zero = np.flatnonzero(rowsum <= 0)
    if zero.size:
        raise ZeroOutDegree(int(zero[0]))
    rows = np.repeat(np.arange(g.n), np.diff(W.indptr))
    data = W.data / rowsum[rows]
    return TransitionSystem.from_csr(g.n, W.indptr, W.indices, data, tol=tol, max_iter=max_iter)


# ---------------------------------------------------------------------------
# Text formats


def _content_lines(path):
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if line:
                yield lineno, line.split()


def _parse_int(tok, lineno):
    try:
        return int(tok)
    except ValueError:
        raise ParseError(lineno, f"expected integer, got {tok!r}") from None


def _parse_float(tok, lineno):
    try:
        x = float(tok)
    except ValueError:
        raise ParseError(lineno, f"expected number, got {tok!r}") from None
    if not np.isfinite(x):
        raise ParseError(lineno, f"non-finite value {tok!r}")
    return x


def _read_header(lines, tag):
    try:
        lineno, toks = next(lines)
    except StopIteration:
        raise ParseError(0, "empty file") from None
    if toks[0] != tag or len(toks) != 2:
        raise ParseError(lineno, f"expected '{tag} <n>' header")
    n = _parse_int(toks[1], lineno)
    if n < 1:
        raise ParseError(lineno, "vertex count must be positive")
    return n


def read_graph(path, symmetrize=False) -> GeneralGraph:
    """Parse the ``v``/``w``/``e`` graph format."""
    lines = _content_lines(path)
    n = _read_header(lines, "v")
    edges = []
    vweights = {}
    for lineno, toks in lines:
        kind = toks[0]
        if kind == "e" and len(toks) == 4:
            u, v = _parse_int(toks[1], lineno), _parse_int(toks[2], lineno)
            w = _parse_float(toks[3], lineno)
            if not (0 <= u < n and 0 <= v < n):
                raise ParseError(lineno, "vertex id out of range")
            if w < 0:
                raise ParseError(lineno, "negative edge weight")
            edges.append((u, v, w))
        elif kind == "w" and len(toks) == 3:
            v = _parse_int(toks[1], lineno)
            x = _parse_float(toks[2], lineno)
            if not 0 <= v < n:
                raise ParseError(lineno, "vertex id out of range")
            if x <= 0:
                raise ParseError(lineno, "vertex weight must be positive")
            vweights[v] = x
        else:
            raise ParseError(lineno)
    g = GeneralGraph.from_edges(n, edges, vweights)
    return g.symmetrized() if symmetrize else g


def write_graph(g: GeneralGraph, path):
    out = [f"v {g.n}"]
    for v, x in enumerate(g.vertex_weights.tolist()):
        if x != 1.0:
            out.append(f"w {v} {x!r}")
    out.extend(f"e {u} {v} {w!r}" for u, v, w in g.edges)
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_transition_csr(path):
    """Parse a P-matrix file into ``(n, indptr, indices, data)``, rows renormalised."""
    lines = _content_lines(path)
    n = _read_header(lines, "n")
    rows, cols, vals = [], [], []
    for lineno, toks in lines:
        if len(toks) != 3:
            raise ParseError(lineno)
        r, c = _parse_int(toks[0], lineno), _parse_int(toks[1], lineno)
        x = _parse_float(toks[2], lineno)
        if not (0 <= r < n and 0 <= c < n):
            raise ParseError(lineno, "index out of range")
        if x < 0 or x > 1 + ROW_SUM_TOL:
            raise ParseError(lineno, f"probability {x!r} outside [0, 1]")
        if x > 0:
            rows.append(r)
            cols.append(c)
            vals.append(x)
    P = sp.csr_matrix((vals, (rows, cols)), shape=(n, n))
    P.sum_duplicates()
    P.sort_indices()
    sums = np.asarray(P.sum(axis=1)).ravel()
    bad = np.flatnonzero(np.abs(sums - 1.0) > ROW_SUM_TOL)
    if bad.size:
        raise RowSumViolation(int(bad[0]), float(sums[bad[0]]))
    rows = np.repeat(np.arange(n), np.diff(P.indptr))
    data = P.data / sums[rows]
    return n, P.indptr, P.indices, data


def load_transition_matrix(path, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> TransitionSystem:
    """Build a :class:`TransitionSystem` from an explicit P-matrix file."""
    n, indptr, indices, data = read_transition_csr(path)
    return TransitionSystem.from_csr(n, indptr, indices, data, tol=tol, max_iter=max_iter)


def write_transition_matrix(ts: TransitionSystem, path):
    out = [f"n {ts.n}"]
    out.extend(f"{u} {v} {x!r}" for u, v, x in zip(ts.row_of.tolist(), ts.indices.tolist(), ts.data.tolist()))
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")
