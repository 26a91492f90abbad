"""Hypergraphs with edge-dependent vertex weights (EDVW) and their random walk.

From vertex ``u`` the walk picks an incident hyperedge ``e`` with probability
``omega(e) / d(u)``, then a member ``v`` of ``e`` with probability
``gamma_e(v) / delta(e)``, where ``d(u)`` sums ``omega`` over the hyperedges of
``u`` and ``delta(e)`` sums ``gamma_e`` over the members of ``e``.
"""
from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from . import kernels
from .errors import (
    DuplicateAuthor,
    EmptyHyperedge,
    InvalidVertex,
    IsolatedVertex,
    NotConnected,
    ParseError,
    ValidationError,
)
from .graph_core import TransitionSystem, _content_lines, _parse_float, _parse_int, _read_header
from .markov import DEFAULT_MAX_ITER, DEFAULT_TOL

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class Hyperedge:
    edge_id: int
    omega: float
    members: tuple  # ((vertex, gamma), ...) in listed order


@dataclass(frozen=True)
class EdvwHypergraph:
    n: int
    hyperedges: tuple

    @classmethod
    def from_edges(cls, n, hyperedges):
        """Build from ``(edge_id, omega, [(vertex, gamma), ...])`` triples.

        Validates everything except connectivity, which is checked when the
        transition system is built.
        """
        n = int(n)
        if n < 1:
            raise ValidationError("hypergraph needs at least one vertex")
        out = []
        seen_ids = set()
        for edge_id, omega, members in hyperedges:
            edge_id = int(edge_id)
            if edge_id in seen_ids:
                raise ValidationError(f"duplicate hyperedge id {edge_id}")
            seen_ids.add(edge_id)
            if not (np.isfinite(omega) and omega > 0):
                raise ValidationError(f"hyperedge {edge_id}: omega must be positive")
            members = tuple((int(v), float(g)) for v, g in members)
            if len({v for v, _ in members}) < 2:
                if len(members) >= 2:
                    raise DuplicateAuthor(edge_id, members[0][0])
                raise EmptyHyperedge(edge_id)
            listed = set()
            for v, g in members:
                if not 0 <= v < n:
                    raise InvalidVertex(v, n)
                if v in listed:
                    raise DuplicateAuthor(edge_id, v)
                listed.add(v)
                if not (np.isfinite(g) and g > 0):
                    raise ValidationError(f"hyperedge {edge_id}: gamma of vertex {v} must be positive")
            out.append(Hyperedge(edge_id, float(omega), members))
        return cls(n=n, hyperedges=tuple(out))

    @property
    def num_edges(self):
        return len(self.hyperedges)

    @property
    def m(self):
        """Number of hyperedge-vertex incidences."""
        return sum(len(e.members) for e in self.hyperedges)


@dataclass(frozen=True, eq=False)
class IncidenceSystem:
    """``R`` (|E| x |V|, gamma), ``W`` (|V| x |E|, omega) and the degree vectors."""

    R: sp.csr_matrix
    W: sp.csr_matrix
    dV: np.ndarray
    dE: np.ndarray
    edge_ids: tuple  # row of R -> hyperedge id


def _flat_incidence(h: EdvwHypergraph):
    e_indptr = np.zeros(h.num_edges + 1, dtype=np.int64)
    members, gammas = [], []
    for i, e in enumerate(h.hyperedges):
        members.extend(v for v, _ in e.members)
        gammas.extend(g for _, g in e.members)
        e_indptr[i + 1] = len(members)
    omega = np.array([e.omega for e in h.hyperedges], dtype=np.float64)
    return e_indptr, np.array(members, dtype=np.int64), np.array(gammas, dtype=np.float64), omega


def build_incidence(h: EdvwHypergraph) -> IncidenceSystem:
    e_indptr, members, gammas, omega = _flat_incidence(h)
    n_e = h.num_edges
    e_of = np.repeat(np.arange(n_e), np.diff(e_indptr))
    R = sp.csr_matrix((gammas, (e_of, members)), shape=(n_e, h.n))
    W = sp.csr_matrix((omega[e_of], (members, e_of)), shape=(h.n, n_e))
    dV = np.asarray(W.sum(axis=1)).ravel()
    isolated = np.flatnonzero(dV == 0)
    if isolated.size:
        raise IsolatedVertex(int(isolated[0]))
    dE = np.asarray(R.sum(axis=1)).ravel()
    return IncidenceSystem(R=R, W=W, dV=dV, dE=dE, edge_ids=tuple(e.edge_id for e in h.hyperedges))


def component_count(h: EdvwHypergraph):
    """Connected components of the bipartite vertex/hyperedge incidence graph."""
    by_vertex = [[] for _ in range(h.n)]
    for i, e in enumerate(h.hyperedges):
        for v, _ in e.members:
            by_vertex[v].append(i)
    seen_v = np.zeros(h.n, dtype=bool)
    seen_e = np.zeros(h.num_edges, dtype=bool)
    comps = 0
    for root in range(h.n):
        if seen_v[root]:
            continue
        comps += 1
        seen_v[root] = True
        queue = deque([root])
        while queue:
            u = queue.popleft()
            for i in by_vertex[u]:
                if seen_e[i]:
                    continue
                seen_e[i] = True
                for v, _ in h.hyperedges[i].members:
                    if not seen_v[v]:
                        seen_v[v] = True
                        queue.append(v)
    return comps


def hyper_transition_csr(h: EdvwHypergraph, inc: IncidenceSystem | None = None):
    """CSR triple of the hypergraph walk, without stationary distribution."""
    inc = inc if inc is not None else build_incidence(h)
    e_indptr, members, gammas, omega = _flat_incidence(h)
    # vertex -> incident hyperedges, ascending edge index
    Wc = inc.W.tocsr()
    Wc.sort_indices()
    return kernels.hyper_transition(
        h.n,
        Wc.indptr.astype(np.int64),
        Wc.indices.astype(np.int64),
        e_indptr,
        members,
        gammas,
        omega,
        inc.dV,
        inc.dE,
    )


def build_hyper_transition(h: EdvwHypergraph, *, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> TransitionSystem:
    inc = build_incidence(h)
    comps = component_count(h)
    if comps > 1:
        raise NotConnected(comps)
    indptr, indices, data = hyper_transition_csr(h, inc)
    # connectivity already established on the incidence graph
    return TransitionSystem.from_csr(h.n, indptr, indices, data, tol=tol, max_iter=max_iter, check_connected=False)


def author_gammas(count):
    """Position weights for an ordered author list of length ``count``.

    Weight 1 in the middle, doubling per step towards either end. For an
    even count ``2k`` the two middle authors ``k-1`` and ``k`` both get 1.
    """
    if count % 2:
        k = count // 2
        return [2.0 ** abs(x - k) for x in range(count)]
    k = count // 2
    return [2.0 ** (k - 1 - x) if x < k else 2.0 ** (x - k) for x in range(count)]


def assign_edvw_author_weights(author_lists, citations, n=None) -> EdvwHypergraph:
    """Citation hypergraph: one hyperedge per publication.

    ``omega = citations + 1``; gammas from :func:`author_gammas`. Single-author
    publications cannot form a hyperedge and are skipped with a warning.
    """
    author_lists = [list(map(int, a)) for a in author_lists]
    citations = list(citations)
    if len(author_lists) != len(citations):
        raise ValidationError("author_lists and citations differ in length")
    if n is None:
        n = 1 + max((max(a) for a in author_lists if a), default=-1)
    edges = []
    skipped = 0
    for eid, (authors, cites) in enumerate(zip(author_lists, citations)):
        if not authors:
            raise ValidationError(f"publication {eid} has no authors")
        if cites < 0:
            raise ValidationError(f"publication {eid} has negative citations")
        if len(set(authors)) != len(authors):
            dup = next(v for i, v in enumerate(authors) if v in authors[:i])
            raise DuplicateAuthor(eid, dup)
        if len(authors) < 2:
            skipped += 1
            continue
        edges.append((eid, float(cites) + 1.0, list(zip(authors, author_gammas(len(authors))))))
    if skipped:
        log.warning("skipped %d single-author publications", skipped)
    return EdvwHypergraph.from_edges(n, edges)


# ---------------------------------------------------------------------------
# Text formats


def read_hypergraph(path) -> EdvwHypergraph:
    """Parse ``v <n>`` followed by ``h <edge_id> <omega> <vid>:<gamma> ...`` lines."""
    lines = _content_lines(path)
    n = _read_header(lines, "v")
    edges = []
    for lineno, toks in lines:
        if toks[0] != "h" or len(toks) < 4:
            raise ParseError(lineno)
        eid = _parse_int(toks[1], lineno)
        omega = _parse_float(toks[2], lineno)
        members = []
        for tok in toks[3:]:
            vid, sep, gamma = tok.partition(":")
            if not sep:
                raise ParseError(lineno, f"expected vid:gamma, got {tok!r}")
            members.append((_parse_int(vid, lineno), _parse_float(gamma, lineno)))
        edges.append((eid, omega, members))
    return EdvwHypergraph.from_edges(n, edges)


def write_hypergraph(h: EdvwHypergraph, path):
    out = [f"v {h.n}"]
    for e in h.hyperedges:
        body = " ".join(f"{v}:{g!r}" for v, g in e.members)
        out.append(f"h {e.edge_id} {e.omega!r} {body}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def read_author_lists(path):
    """Parse ``<citations> <vid> <vid> ...`` lines; returns ``(author_lists, citations)``."""
    lists, cites = [], []
    for lineno, toks in _content_lines(path):
        if len(toks) < 2:
            raise ParseError(lineno, "expected citations followed by at least one author")
        c = _parse_int(toks[0], lineno)
        if c < 0:
            raise ParseError(lineno, "negative citation count")
        cites.append(c)
        lists.append([_parse_int(t, lineno) for t in toks[1:]])
    return lists, cites
