"""Command-line entry point: ``lcluster <subcommand> ...``."""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .acl import AUTO, ClusterQuery, general_acl
from .errors import ConfigError, LClusterError, NoConvergence, ValidationError
from .graph_core import build_graph_transition, read_graph, write_graph
from .harness.experiment import run_experiment
from .harness.generate import PlantedHypergraphSpec, generate_planted, planted_labels
from .harness.io import load_any, parse_vertex_list, read_label_sets, read_vertex_set, write_label_sets
from .harness.metrics import set_scores
from .hyper_core import build_hyper_transition, read_hypergraph, write_hypergraph
from .markov import DEFAULT_MAX_ITER, DEFAULT_TOL
from .oracle import DEFAULT_N_CAP, optimal_conductance
from .reduce import clique_expand, clique_report, star_expand, write_idmap

DEFAULT_PATIENCE = 1000

log = logging.getLogger("lcluster")


def _dump(obj):
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False)


def _alpha(text):
    if text == AUTO:
        return AUTO
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"alpha must be a number or 'auto', got {text!r}") from None


def _seeds(args):
    p = Path(args.seeds)
    if p.is_file():
        return read_vertex_set(p)
    return parse_vertex_list(args.seeds)


def _cluster_cmd(args, hyper):
    if hyper:
        h = read_hypergraph(args.input)
        ts = build_hyper_transition(h, tol=args.tol, max_iter=args.max_iter)
    else:
        g = read_graph(args.input, symmetrize=args.symmetrize)
        ts = build_graph_transition(g, tol=args.tol, max_iter=args.max_iter)
    q = ClusterQuery(
        seeds=tuple(_seeds(args)),
        alpha=args.alpha,
        tol=args.tol,
        max_iter=args.max_iter,
        patience=args.early_stop or 0,
        require_seeds=args.require_seeds,
    )
    res = general_acl(ts, q)
    if args.output == "csv":
        return res.profile.to_csv()
    return _dump(res.to_dict(timing=not args.no_timing)) + "\n"


def cmd_graph(args):
    return _cluster_cmd(args, hyper=False)


def cmd_hyper(args):
    return _cluster_cmd(args, hyper=True)


def cmd_expand(args):
    h = read_hypergraph(args.input)
    if args.mode == "clique":
        g = clique_expand(h)
        report = clique_report(h, g)
    else:
        g, report = star_expand(h)
    write_graph(g, args.output)
    if args.idmap:
        if args.mode != "star":
            raise ValidationError("--idmap only applies to --mode star")
        write_idmap(report, args.idmap)
    return report.to_json() + "\n"


def cmd_oracle(args):
    _, _, ts = load_any(args.input, symmetrize=args.symmetrize)
    seeds = _seeds(args) if args.seeds else []
    res = optimal_conductance(ts, seeds, n_cap=args.n_cap)
    return _dump(res.to_dict()) + "\n"


def cmd_gen(args):
    spec = PlantedHypergraphSpec.from_json(args.spec)
    h = generate_planted(spec)
    write_hypergraph(h, args.out)
    out = {"n": h.n, "num_hyperedges": h.num_edges, "connections": h.m, "out": str(args.out)}
    if args.labels:
        write_label_sets(planted_labels(spec), args.labels)
        out["labels"] = str(args.labels)
    return _dump(out) + "\n"


def cmd_eval(args):
    found = read_vertex_set(args.cluster)
    labels = read_label_sets(args.labels)
    if not labels:
        raise ValidationError("label file is empty")
    rows = [dict(set_scores(found, lab), label=i) for i, lab in enumerate(labels)]
    best = max(rows, key=lambda r: (r["f1"], -r["label"]))
    return _dump({"best": best, "per_label": rows}) + "\n"


def cmd_experiment(args):
    try:
        config = json.loads(Path(args.config).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {args.config}: {exc}") from None
    report = run_experiment(config, out_dir=args.out, timing=not args.no_timing,
                            base_dir=Path(args.config).parent)
    return _dump(report["summary"]) + "\n"


def _add_numeric(p):
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.add_argument("--max-iter", type=int, default=DEFAULT_MAX_ITER)


def build_parser():
    parser = argparse.ArgumentParser(prog="lcluster", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, fn, help_ in (("graph", cmd_graph, "cluster on a weighted directed graph"),
                            ("hyper", cmd_hyper, "cluster on an EDVW hypergraph")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--input", required=True)
        p.add_argument("--seeds", required=True, help="comma/space separated ids, or a file")
        p.add_argument("--alpha", type=_alpha, default=AUTO)
        _add_numeric(p)
        p.add_argument("--early-stop", type=int, nargs="?", const=DEFAULT_PATIENCE, default=None,
                       metavar="P")
        p.add_argument("--output", choices=("json", "csv"), default="json")
        p.add_argument("--require-seeds", action="store_true")
        p.add_argument("--no-timing", action="store_true")
        if name == "graph":
            p.add_argument("--symmetrize", action="store_true")
        else:
            p.set_defaults(symmetrize=False)
        p.set_defaults(func=fn)

    p = sub.add_parser("expand", help="CLIQUE++ / STAR++ reduction")
    p.add_argument("--input", required=True)
    p.add_argument("--mode", choices=("clique", "star"), required=True)
    p.add_argument("--output", required=True)
    p.add_argument("--idmap")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_expand)

    p = sub.add_parser("oracle", help="exhaustive minimum-conductance set")
    p.add_argument("--input", required=True)
    p.add_argument("--seeds", default="")
    p.add_argument("--n-cap", type=int, default=DEFAULT_N_CAP)
    p.add_argument("--symmetrize", action="store_true")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="planted-partition hypergraph")
    p.add_argument("--spec", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--labels", help="also write the planted clusters, one per line")
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("eval", help="precision/recall/F1 against label sets")
    p.add_argument("--cluster", required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("experiment", help="compare HyperACL with the baselines")
    p.add_argument("--config", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--no-timing", action="store_true")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="lcluster: %(levelname)s: %(message)s")
    try:
        out = args.func(args)
    except NoConvergence as exc:
        print(f"lcluster: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except LClusterError as exc:
        print(f"lcluster: error: {exc}", file=sys.stderr)
        return exc.exit_code
    except (OSError, ValueError) as exc:
        print(f"lcluster: error: {exc}", file=sys.stderr)
        return 2
    sys.stdout.write(out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
