"""Planted-partition EDVW hypergraphs for desk-scale experiments.

Randomness comes from numpy's PCG64 bit generator seeded with ``rng_seed``,
so a given spec always yields the same hypergraph.
"""
from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..errors import ConfigError, InfeasibleSpec
from ..hyper_core import EdvwHypergraph, component_count


@dataclass(frozen=True)
class PlantedHypergraphSpec:
    clusters: int
    cluster_size: int
    edges_within: int
    edges_across: int
    arity: int
    omega_range: tuple = (1.0, 1.0)
    gamma_range: tuple = (1.0, 1.0)
    rng_seed: int = 0
    # omega range for bridging and repair edges; None reuses omega_range
    across_omega_range: tuple | None = None

    @property
    def n(self):
        return self.clusters * self.cluster_size

    def validate(self):
        if self.clusters < 1 or self.cluster_size < 2:
            raise InfeasibleSpec("need at least one cluster of at least two vertices")
        if self.arity < 2:
            raise InfeasibleSpec("arity must be at least 2")
        if self.arity > self.cluster_size:
            raise InfeasibleSpec(f"arity {self.arity} exceeds cluster size {self.cluster_size}")
        if self.edges_within < 0 or self.edges_across < 0:
            raise InfeasibleSpec("edge counts must be nonnegative")
        if self.edges_across and self.clusters < 2:
            raise InfeasibleSpec("bridging hyperedges need at least two clusters")
        for name in ("omega_range", "gamma_range", "across_omega_range"):
            if getattr(self, name) is None:
                continue
            lo, hi = getattr(self, name)
            if not 0 < lo <= hi:
                raise InfeasibleSpec(f"{name} must satisfy 0 < low <= high")

    @classmethod
    def from_dict(cls, d):
        known = set(cls.__dataclass_fields__)
        extra = set(d) - known
        if extra:
            raise ConfigError(f"unknown planted-spec keys: {sorted(extra)}")
        d = dict(d)
        for name in ("omega_range", "gamma_range", "across_omega_range"):
            if d.get(name) is not None:
                d[name] = tuple(float(x) for x in d[name])
        try:
            return cls(**d)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_json(cls, path):
        return cls.from_dict(json.loads(Path(path).read_text(encoding="utf-8")))

    def to_dict(self):
        d = asdict(self)
        d["omega_range"] = list(self.omega_range)
        d["gamma_range"] = list(self.gamma_range)
        if self.across_omega_range is None:
            del d["across_omega_range"]
        else:
            d["across_omega_range"] = list(self.across_omega_range)
        return d


def planted_labels(spec: PlantedHypergraphSpec):
    """Ground-truth clusters: cluster ``c`` is ``c*s .. (c+1)*s - 1``."""
    s = spec.cluster_size
    return [tuple(range(c * s, (c + 1) * s)) for c in range(spec.clusters)]


def _components(n, edges):
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for _, _, members in edges:
        root = find(members[0][0])
        for v, _ in members[1:]:
            parent[find(v)] = root
    groups = {}
    for v in range(n):
        groups.setdefault(find(v), []).append(v)
    return sorted(groups.values(), key=lambda g: g[0])


def generate_planted(spec: PlantedHypergraphSpec) -> EdvwHypergraph:
    spec.validate()
    rng = np.random.Generator(np.random.PCG64(spec.rng_seed))
    s, k = spec.cluster_size, spec.clusters
    edges = []

    across_range = spec.across_omega_range or spec.omega_range

    def draw(members, omega_range=spec.omega_range):
        omega = float(rng.uniform(*omega_range))
        gammas = rng.uniform(*spec.gamma_range, size=len(members))
        edges.append((len(edges), omega, [(int(v), float(g)) for v, g in zip(members, gammas)]))

    for c in range(k):
        pool = np.arange(c * s, (c + 1) * s)
        for _ in range(spec.edges_within):
            draw(sorted(rng.choice(pool, size=spec.arity, replace=False).tolist()))
    for _ in range(spec.edges_across):
        c1, c2 = rng.choice(k, size=2, replace=False)
        a = int(rng.integers(c1 * s, (c1 + 1) * s))
        b = int(rng.integers(c2 * s, (c2 + 1) * s))
        rest = np.setdiff1d(np.arange(spec.n), [a, b])
        extra = rng.choice(rest, size=spec.arity - 2, replace=False).tolist() if spec.arity > 2 else []
        draw(sorted([a, b] + extra), across_range)

    comps = _components(spec.n, edges)
    if len(comps) > 1:
        # link components in a cycle (a single edge when there are two)
        reps = [g[0] for g in comps]
        links = list(zip(reps, reps[1:]))
        if len(reps) > 2:
            links.append((reps[-1], reps[0]))
        for a, b in links:
            draw([a, b], across_range)
    h = EdvwHypergraph.from_edges(spec.n, edges)
    assert component_count(h) == 1
    return h
