"""Hypergraph-to-graph reductions used as baselines.

* clique: every pair ``u != v`` of a hyperedge ``e`` gets an undirected edge of
  weight ``omega(e)``; parallel contributions add up. Vertex weights ``gamma``
  are ignored.
* star: each hyperedge ``e`` becomes a new vertex ``v_e`` joined to every
  member by an undirected edge of weight ``omega(e) / |e|``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .graph_core import GeneralGraph
from .hyper_core import EdvwHypergraph


@dataclass(frozen=True)
class ReductionReport:
    mode: str
    vertices_out: int
    edges_out: int  # stored directed edges after merging
    star_vertex_map: dict = field(default_factory=dict)  # edge_id -> new vertex

    def to_json(self):
        return json.dumps(
            {
                "mode": self.mode,
                "vertices_out": self.vertices_out,
                "edges_out": self.edges_out,
                "star_vertex_map": {str(k): v for k, v in self.star_vertex_map.items()},
            },
            indent=2,
            sort_keys=True,
        )


def clique_expand(h: EdvwHypergraph) -> GeneralGraph:
    edges = []
    for e in h.hyperedges:
        members = [v for v, _ in e.members]
        for i, u in enumerate(members):
            for v in members[i + 1:]:
                edges.append((u, v, e.omega))
                edges.append((v, u, e.omega))
    return GeneralGraph.from_edges(h.n, edges)


def clique_report(h: EdvwHypergraph, g: GeneralGraph) -> ReductionReport:
    return ReductionReport(mode="clique", vertices_out=g.n, edges_out=len(g.src))


def star_expand(h: EdvwHypergraph):
    """Returns ``(graph, report)``; original vertices keep their ids."""
    edges = []
    id_map = {}
    for i, e in enumerate(h.hyperedges):
        ve = h.n + i
        id_map[e.edge_id] = ve
        w = e.omega / len(e.members)
        for u, _ in e.members:
            edges.append((u, ve, w))
            edges.append((ve, u, w))
    g = GeneralGraph.from_edges(h.n + h.num_edges, edges)
    return g, ReductionReport(mode="star", vertices_out=g.n, edges_out=len(g.src), star_vertex_map=id_map)


def project_cluster(cluster, n_original):
    """Drop auxiliary star vertices from a cluster found on the star graph."""
    return tuple(v for v in cluster if v < n_original)


def write_idmap(report: ReductionReport, path):
    Path(path).write_text(report.to_json() + "\n", encoding="utf-8")
