"""Local-clustering comparison runs: HyperACL against CLIQUE++ and STAR++.

Conductance is always measured on the *hypergraph* transition system so the
methods are comparable; baselines additionally report the conductance on
their own expanded graph (``conductance_expanded``).
"""
from __future__ import annotations

import csv
import json
import math
import time
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..acl import AUTO, ClusterQuery, general_acl
from ..errors import ConfigError
from ..graph_core import build_graph_transition
from ..hyper_core import build_hyper_transition, read_hypergraph
from ..markov import DEFAULT_MAX_ITER, DEFAULT_TOL
from ..reduce import clique_expand, project_cluster, star_expand
from ..sweep import conductance
from .generate import PlantedHypergraphSpec, generate_planted, planted_labels
from .io import read_label_sets
from .metrics import f1_score

SCHEMA = 1
METHODS = ("hyperacl", "clique++", "star++")
CONFIG_KEYS = {
    "hypergraph", "observations", "methods", "alpha", "seeds_per_obs",
    "rng_seed", "tol", "max_iter", "patience",
}


@dataclass(frozen=True)
class Observation:
    seed_set: tuple
    label_set: tuple
    rng_seed: int


def sample_observations(label_sets, count, seeds_per_obs, rng_seed):
    """Pick a label set uniformly, then ``seeds_per_obs`` distinct seeds from it."""
    out = []
    for i in range(count):
        seed = int(np.random.SeedSequence([rng_seed, i]).generate_state(1)[0])
        rng = np.random.Generator(np.random.PCG64(seed))
        label = tuple(sorted(label_sets[int(rng.integers(len(label_sets)))]))
        k = min(seeds_per_obs, len(label))
        seeds = tuple(sorted(rng.choice(np.array(label), size=k, replace=False).tolist()))
        out.append(Observation(seed_set=seeds, label_set=label, rng_seed=seed))
    return out


def _validate(config):
    if not isinstance(config, dict):
        raise ConfigError("experiment config must be a JSON object")
    extra = set(config) - CONFIG_KEYS
    if extra:
        raise ConfigError(f"unknown config keys: {sorted(extra)}")
    methods = config.get("methods", list(METHODS))
    bad = [m for m in methods if m not in METHODS]
    if bad:
        raise ConfigError(f"unknown methods: {bad}")
    if "hypergraph" not in config:
        raise ConfigError("config needs a 'hypergraph' entry")
    alpha = config.get("alpha", AUTO)
    if alpha != AUTO and not (isinstance(alpha, (int, float)) and 0 < alpha <= 1):
        raise ConfigError("alpha must be 'auto' or a number in (0, 1]")
    if int(config.get("observations", 50)) < 0:
        raise ConfigError("observations must be nonnegative")
    return methods


def _load_hypergraph(entry, base_dir):
    if "planted" in entry:
        spec = PlantedHypergraphSpec.from_dict(entry["planted"])
        return generate_planted(spec), planted_labels(spec)
    if "file" in entry:
        path = Path(base_dir, entry["file"])
        if "labels" not in entry:
            raise ConfigError("file hypergraphs need a 'labels' file")
        return read_hypergraph(path), [tuple(x) for x in read_label_sets(Path(base_dir, entry["labels"]))]
    raise ConfigError("hypergraph entry needs 'planted' or 'file'")


def run_experiment(config, out_dir=None, timing=True, base_dir="."):
    """Run every method on every observation; returns the report dict.

    ``config`` is a dict or a path to a JSON file. When ``out_dir`` is given,
    ``report.json`` and ``report.csv`` are written there.
    """
    if not isinstance(config, dict):
        path = Path(config)
        base_dir = path.parent
        try:
            config = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}") from None
    methods = _validate(config)
    tol = float(config.get("tol", DEFAULT_TOL))
    max_iter = int(config.get("max_iter", DEFAULT_MAX_ITER))
    patience = int(config.get("patience", 0))
    alpha_policy = config.get("alpha", AUTO)
    n_obs = int(config.get("observations", 50))
    seeds_per_obs = int(config.get("seeds_per_obs", 5))
    rng_seed = int(config.get("rng_seed", 0))

    h, labels = _load_hypergraph(config["hypergraph"], base_dir)
    observations = sample_observations(labels, n_obs, seeds_per_obs, rng_seed)

    t0 = time.perf_counter()
    ts_h = build_hyper_transition(h, tol=tol, max_iter=max_iter)
    setup = {"hyperacl": time.perf_counter() - t0}
    graphs = {}
    if "clique++" in methods:
        t0 = time.perf_counter()
        graphs["clique++"] = build_graph_transition(clique_expand(h), tol=tol, max_iter=max_iter)
        setup["clique++"] = time.perf_counter() - t0
    if "star++" in methods:
        t0 = time.perf_counter()
        g, _ = star_expand(h)
        graphs["star++"] = build_graph_transition(g, tol=tol, max_iter=max_iter)
        setup["star++"] = time.perf_counter() - t0

    rows = []
    for i, obs in enumerate(observations):
        q = ClusterQuery(seeds=obs.seed_set, alpha=alpha_policy, tol=tol, max_iter=max_iter, patience=patience)
        hyper = None
        if "hyperacl" in methods or alpha_policy == AUTO:
            t0 = time.perf_counter()
            hyper = general_acl(ts_h, q)
            # the alpha-discovery pass is not part of the timed execution
            elapsed = time.perf_counter() - t0 - hyper.timings.get("alpha_discovery", 0.0)
        alpha = hyper.alpha_used if hyper is not None else float(alpha_policy)
        for method in methods:
            if method == "hyperacl":
                rows.append(_row(i, obs, method, hyper.cluster, hyper.conductance, hyper.conductance, alpha, elapsed))
                continue
            ts_g = graphs[method]
            t0 = time.perf_counter()
            res = general_acl(ts_g, ClusterQuery(seeds=obs.seed_set, alpha=alpha, tol=tol,
                                                 max_iter=max_iter, patience=patience))
            elapsed_b = time.perf_counter() - t0
            cluster = project_cluster(res.cluster, h.n) if method == "star++" else res.cluster
            rows.append(_row(i, obs, method, cluster, _hyper_phi(ts_h, cluster), res.conductance, alpha, elapsed_b))

    report = {
        "schema": SCHEMA,
        "config": config,
        "n": h.n,
        "num_hyperedges": h.num_edges,
        "rows": [_strip(r, timing) for r in rows],
        "summary": _summary(rows, methods, timing),
    }
    if timing:
        report["setup_seconds"] = setup
    if out_dir is not None:
        _write(report, Path(out_dir), timing)
    return report


def _hyper_phi(ts_h, cluster):
    if 0 < len(cluster) < ts_h.n:
        return conductance(ts_h, cluster), False
    return 1.0, True


def _row(i, obs, method, cluster, phi, phi_expanded, alpha, seconds):
    degenerate = False
    if isinstance(phi, tuple):
        phi, degenerate = phi
    return {
        "observation": i,
        "method": method,
        "seeds": list(obs.seed_set),
        "cluster": list(cluster),
        "cluster_size": len(cluster),
        "conductance": phi,
        "conductance_expanded": phi_expanded,
        "degenerate": degenerate,
        "f1": f1_score(cluster, obs.label_set),
        "alpha": alpha,
        "seconds": seconds,
    }


def _strip(row, timing):
    if timing:
        return row
    return {k: v for k, v in row.items() if k != "seconds"}


def _summary(rows, methods, timing):
    out = {}
    for m in methods:
        mine = [r for r in rows if r["method"] == m]
        if not mine:
            out[m] = {"count": 0}
            continue
        entry = {
            "count": len(mine),
            "mean_conductance": math.fsum(r["conductance"] for r in mine) / len(mine),
            "mean_f1": math.fsum(r["f1"] for r in mine) / len(mine),
            "degenerate": sum(r["degenerate"] for r in mine),
        }
        if timing:
            entry["mean_seconds"] = math.fsum(r["seconds"] for r in mine) / len(mine)
        out[m] = entry
    return out


CSV_FIELDS = ["observation", "method", "cluster_size", "conductance", "conductance_expanded",
              "degenerate", "f1", "alpha", "seconds"]


def _write(report, out_dir, timing):
    out_dir.mkdir(parents=True, exist_ok=True)
    (out_dir / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    fields = CSV_FIELDS if timing else [f for f in CSV_FIELDS if f != "seconds"]
    with open(out_dir / "report.csv", "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=fields, extrasaction="ignore", lineterminator="\n")
        w.writeheader()
        for r in report["rows"]:
            w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in r.items()})
