"""Input sniffing and small vertex-set file helpers."""
from pathlib import Path

from ..errors import ParseError
from ..graph_core import _content_lines, build_graph_transition, load_transition_matrix, read_graph
from ..hyper_core import build_hyper_transition, read_hypergraph


def sniff(path):
    """``"graph"``, ``"hyper"`` or ``"pmatrix"`` from the first content lines."""
    lines = _content_lines(path)
    try:
        _, first = next(lines)
    except StopIteration:
        raise ParseError(0, "empty file") from None
    if first[0] == "n":
        return "pmatrix"
    if first[0] != "v":
        raise ParseError(0, "unrecognised file format")
    for _, toks in lines:
        return "hyper" if toks[0] == "h" else "graph"
    return "graph"


def load_any(path, symmetrize=False, tol=None, max_iter=None):
    """Returns ``(kind, source_object, transition_system)``."""
    kw = {}
    if tol is not None:
        kw["tol"] = tol
    if max_iter is not None:
        kw["max_iter"] = max_iter
    kind = sniff(path)
    if kind == "pmatrix":
        return kind, None, load_transition_matrix(path, **kw)
    if kind == "hyper":
        h = read_hypergraph(path)
        return kind, h, build_hyper_transition(h, **kw)
    g = read_graph(path, symmetrize=symmetrize)
    return kind, g, build_graph_transition(g, **kw)


def parse_vertex_list(text):
    toks = text.replace(",", " ").split()
    try:
        return [int(t) for t in toks]
    except ValueError as exc:
        raise ParseError(0, f"bad vertex id: {exc}") from None


def read_vertex_set(path):
    return parse_vertex_list(Path(path).read_text(encoding="utf-8"))


def read_label_sets(path):
    """One label set per nonblank line."""
    out = []
    for lineno, toks in _content_lines(path):
        out.append(parse_vertex_list(" ".join(toks)))
    return out


def write_label_sets(sets, path):
    Path(path).write_text("".join(" ".join(map(str, s)) + "\n" for s in sets), encoding="utf-8")
