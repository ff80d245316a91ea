"""Command-line front end.

Exit status: 0 on success, 1 on bad input (an error record is written to
stderr as JSON), 2 when a computed tree misses one of its guarantees.
"""
from __future__ import annotations

import argparse
import json
import math
import sys
from collections import namedtuple
from pathlib import Path
from typing import Any, List, Optional, Sequence, Tuple

import numpy as np

from . import __version__
from .cutlib import SortedValues, constrained_cut, optimal_cut, scan
from .errors import DuplicatePoints, NotSpanning, ParseError, TreeStretchError, UsageError
from .euclid import DEFAULT_ALPHA, CutPlane, SpanningTree, euclidean_spanning_tree, verify_euclidean
from .generators import FAMILIES_1D, graph_closure_metric, random_points, random_values
from .hst import (
    WeightedTree,
    build_hst,
    hierarchical_decompose,
    recursive_cut_tree,
    verify,
)
from .metric import Metric, PointSet, euclidean_distances, metric_from_points, validate_metric
from .oracles import line_dp_optimal, path_cut_ratios, path_values

SIG_DIGITS = 12
EXIT_OK, EXIT_INPUT, EXIT_BOUND = 0, 1, 2

TREE_FORMAT = "treestretch.tree"
SPANTREE_FORMAT = "treestretch.spantree"

Split = namedtuple("Split", "left right")


# --- output ---------------------------------------------------------------


def _clean(x: Any) -> Any:
    if isinstance(x, dict):
        return {str(k): _clean(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_clean(v) for v in x]
    if isinstance(x, (bool, np.bool_)):
        return bool(x)
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if not math.isfinite(x):
            return str(x)
        return float(f"{x:.{SIG_DIGITS}g}")
    if isinstance(x, np.ndarray):
        return _clean(x.tolist())
    return x


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, floats cut to 12 significant digits."""
    return json.dumps(_clean(obj), sort_keys=True, indent=2) + "\n"


def _emit(obj: Any, path: Optional[str]) -> None:
    text = dumps(obj)
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


# --- input ----------------------------------------------------------------


def _read_text(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from e


def _floats(tokens: Sequence[str], where: str) -> List[float]:
    try:
        return [float(t) for t in tokens]
    except ValueError as e:
        raise ParseError(f"{where}: {e}") from e


def parse_matrix(text: str) -> np.ndarray:
    rows = [ln for ln in text.splitlines() if ln.strip()]
    if not rows:
        raise ParseError("empty distance matrix")
    mat = [_floats([t.strip() for t in ln.split(",")], f"line {i + 1}") for i, ln in enumerate(rows)]
    n = len(mat)
    for i, r in enumerate(mat):
        if len(r) != n:
            raise ParseError(f"line {i + 1} has {len(r)} entries, expected {n}")
    return np.array(mat)


def parse_points(text: str) -> PointSet:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty point file")
    head = lines[0].split()
    if len(head) != 2:
        raise ParseError('point file must start with a "d n" header')
    try:
        d, n = int(head[0]), int(head[1])
    except ValueError as e:
        raise ParseError(f"bad header: {e}") from e
    if d < 1 or n < 1:
        raise ParseError(f"header needs d >= 1 and n >= 1, got {d} {n}")
    body = lines[1:]
    if len(body) != n:
        raise ParseError(f"header promises {n} points, found {len(body)}")
    pts = []
    for i, ln in enumerate(body):
        row = _floats(ln.split(), f"line {i + 2}")
        if len(row) != d:
            raise ParseError(f"line {i + 2} has {len(row)} coordinates, expected {d}")
        pts.append(row)
    return PointSet(np.array(pts))


def parse_values(text: str) -> np.ndarray:
    vals = _floats(text.split(), "values")
    if not vals:
        raise ParseError("no values given")
    return np.array(vals)


def read_source(path: str, fmt: str = "auto"):
    """``("matrix", Metric)`` or ``("points", PointSet)``; auto-detects CSV by its commas."""
    text = _read_text(path)
    if fmt == "auto":
        fmt = "matrix" if "," in text else "points"
    if fmt == "matrix":
        return "matrix", validate_metric(parse_matrix(text))
    return "points", parse_points(text)


def _metric_of(kind: str, src) -> Metric:
    return src if kind == "matrix" else metric_from_points(src)


def _interval(text: Optional[str]) -> Optional[Tuple[float, float]]:
    if text is None:
        return None
    parts = text.split(":")
    if len(parts) != 2:
        raise UsageError(f"--interval expects lo:hi, got {text!r}")
    lo, hi = _floats(parts, "--interval")
    return lo, hi


# --- (de)serialization of trees -------------------------------------------


def tree_to_json(t: WeightedTree) -> dict:
    s = t.scale
    nodes = []
    for v in range(t.n_nodes):
        node = {
            "id": v,
            "parent": t.parent[v],
            "edge_length": t.edge_length[v] / s,
            "point": t.point[v] if t.point[v] >= 0 else None,
        }
        if t.kind == "hst":
            node["level"] = t.level[v]
        else:
            node["label"] = t.label[v] / s
        nodes.append(node)
    return {
        "format": TREE_FORMAT,
        "mode": t.kind,
        "root": t.root,
        "scale": s,
        "delta": t.delta,
        "nodes": nodes,
        "cuts": [
            {"center": c.center, "left": list(c.left), "right": list(c.right), "level": c.level}
            for c in t.cuts
        ],
    }


def _need(obj: dict, key: str):
    try:
        return obj[key]
    except (KeyError, TypeError) as e:
        raise ParseError(f"tree file is missing {key!r}") from e


def tree_from_json(obj: dict, m: Metric) -> Tuple[WeightedTree, List[Split]]:
    """Rebuild a tree in the normalized units of ``m`` (lengths are stored unscaled)."""
    mode = _need(obj, "mode")
    if mode not in ("hst", "ultra"):
        raise ParseError(f"unknown tree mode {mode!r}")
    nodes = sorted(_need(obj, "nodes"), key=lambda nd: _need(nd, "id"))
    if [nd["id"] for nd in nodes] != list(range(len(nodes))):
        raise ParseError("node ids must be 0..N-1")
    s = m.scale
    try:
        parent = [int(nd["parent"]) for nd in nodes]
        edge = [float(nd["edge_length"]) * s for nd in nodes]
        point = [-1 if nd.get("point") is None else int(nd["point"]) for nd in nodes]
        if mode == "hst":
            level = [nd.get("level") for nd in nodes]
            label = [None] * len(nodes)
        else:
            level = [None] * len(nodes)
            label = [float(nd["label"]) * s for nd in nodes]
        root = int(_need(obj, "root"))
        splits = [Split(tuple(c["left"]), tuple(c["right"])) for c in obj.get("cuts", [])]
    except (KeyError, TypeError, ValueError) as e:
        raise ParseError(f"malformed node or cut record: {e}") from e
    if not 0 <= root < len(nodes) or parent[root] != -1:
        raise NotSpanning("root must be a node without a parent")
    if any(not -1 <= p < len(nodes) for p in parent):
        raise NotSpanning("parent id out of range")
    t = WeightedTree(
        kind=mode, parent=parent, edge_length=edge, point=point, root=root,
        level=level, label=label, scale=s, delta=obj.get("delta"),
    )
    if len(t.preorder()) != t.n_nodes:
        raise NotSpanning("parent links do not form a single tree")
    for sp in splits:
        if not sp.left or not sp.right or any(not 0 <= p < m.n for p in sp.left + sp.right):
            raise ParseError("cut record refers to points outside the source")
    return t, splits


def spantree_to_json(t: SpanningTree) -> dict:
    return {
        "format": SPANTREE_FORMAT,
        "n": t.n,
        "root": t.root,
        "alpha": t.alpha,
        "edges": [[u, v, w] for u, v, w in t.edges],
        "cuts": [
            {
                "axis": c.axis,
                "interval": list(c.interval),
                "position": c.position,
                "left": list(c.left),
                "right": list(c.right),
            }
            for c in t.cuts
        ],
    }


def spantree_from_json(obj: dict) -> SpanningTree:
    try:
        edges = [(int(u), int(v), float(w)) for u, v, w in obj["edges"]]
        cuts = [
            CutPlane(
                axis=int(c["axis"]),
                interval=(float(c["interval"][0]), float(c["interval"][1])),
                position=float(c["position"]),
                left_count=len(c["left"]),
                size=len(c["left"]) + len(c["right"]),
                l_max=math.nan,
                ratio=math.nan,
                left=tuple(c["left"]),
                right=tuple(c["right"]),
            )
            for c in obj.get("cuts", [])
        ]
        return SpanningTree(
            n=int(obj["n"]), edges=edges, root=int(obj["root"]),
            alpha=float(obj.get("alpha", DEFAULT_ALPHA)), cuts=cuts,
        )
    except (KeyError, TypeError, ValueError, IndexError) as e:
        raise ParseError(f"malformed spanning tree file: {e}") from e


# --- commands -------------------------------------------------------------


def _finish(report, args) -> int:
    out = report.as_dict()
    if args.report not in (None, "-"):
        _emit(out, args.report)
    _emit(out, None)
    return EXIT_OK if report.ok else EXIT_BOUND


def cmd_embed(args) -> int:
    kind, src = read_source(args.input, args.input_format)
    m = _metric_of(kind, src)
    if args.mode == "hst":
        t = build_hst(hierarchical_decompose(m))
    else:
        t = recursive_cut_tree(m)
    report = verify(m, t)
    if args.out:
        _emit(tree_to_json(t), args.out)
    return _finish(report, args)


def _warn(msg: str) -> None:
    sys.stderr.write(dumps({"warning": msg}))


def _first_duplicate(ps: PointSet) -> None:
    seen = {}
    for i, row in enumerate(map(tuple, ps.points)):
        if row in seen:
            raise DuplicatePoints(seen[row], i)
        seen[row] = i


def cmd_spantree(args) -> int:
    kind, src = read_source(args.input, args.input_format)
    if kind != "points":
        raise ParseError("spantree needs a point file, not a distance matrix")
    _first_duplicate_warning(src)
    t = euclidean_spanning_tree(src, alpha=args.alpha)
    report = verify_euclidean(src, t)
    if args.out:
        _emit(spantree_to_json(t), args.out)
    return _finish(report, args)


def _first_duplicate_warning(ps: PointSet) -> None:
    try:
        _first_duplicate(ps)
    except DuplicatePoints as e:
        _warn(f"{e}; coincident points are joined by zero-length edges")


def cmd_verify(args) -> int:
    try:
        obj = json.loads(_read_text(args.tree))
    except json.JSONDecodeError as e:
        raise ParseError(f"tree file is not JSON: {e}") from e
    fmt = obj.get("format") if isinstance(obj, dict) else None
    kind, src = read_source(args.source, args.input_format)
    if fmt == SPANTREE_FORMAT:
        if kind != "points":
            raise ParseError("a spanning tree must be verified against its point file")
        report = verify_euclidean(src, spantree_from_json(obj))
    elif fmt == TREE_FORMAT:
        m = _metric_of(kind, src)
        t, splits = tree_from_json(obj, m)
        report = verify(m, t, cuts=splits)
    else:
        raise ParseError(f"unrecognized tree format {fmt!r}")
    return _finish(report, args)


def cmd_lowerbound(args) -> int:
    n = args.n
    if n < 2:
        raise UsageError("lowerbound needs n >= 2")
    target = 2 * (n - 1) / n
    ratios = path_cut_ratios(n)
    equal = bool(np.allclose(ratios, target, rtol=1e-9, atol=0))
    out = {
        "n": n,
        "cut_ratio": target,
        "dp_ratio": line_dp_optimal(path_values(n)).ratio,
        "all_cuts_equal": "PASS" if equal else "FAIL",
    }
    _emit(out, args.out)
    return EXIT_OK if equal else EXIT_BOUND


def cmd_cutscan(args) -> int:
    sv = SortedValues.from_unsorted(parse_values(_read_text(args.input)))
    cs = scan(sv)
    iv = _interval(args.interval)
    res = optimal_cut(sv) if iv is None else constrained_cut(sv, iv)
    out = {
        "values": sv.values,
        "LS": cs.LS,
        "RS": cs.RS,
        "RC": cs.RC,
        "interval": None if iv is None else list(iv),
        "cut": {
            "k": res.k,
            "ratio": res.ratio,
            "position": res.position,
            "width": res.width,
            "cross": res.cross,
        },
    }
    _emit(out, args.out)
    return EXIT_OK


def _fmt(x: float) -> str:
    return repr(float(x))


def cmd_generate(args) -> int:
    if args.what == "points":
        pts = random_points(args.n, args.d, args.seed)
        text = f"{args.d} {args.n}\n" + "".join(" ".join(map(_fmt, p)) + "\n" for p in pts)
    elif args.what == "matrix":
        if args.kind == "planar":
            d = euclidean_distances(PointSet(random_points(args.n, 2, args.seed)))
        else:
            m = graph_closure_metric(args.n, args.seed)
            d = m.dist / m.scale
        text = "".join(",".join(map(_fmt, row)) + "\n" for row in d)
    else:
        text = "".join(_fmt(v) + "\n" for v in random_values(args.family, args.n, args.seed))
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text)
    return EXIT_OK


# --- argument parsing -----------------------------------------------------


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on bad usage, which would read as a bound violation
    def error(self, message):
        raise UsageError(message)


def _alpha(text: str) -> float:
    try:
        a = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0 < a < 0.5:
        raise argparse.ArgumentTypeError(f"alpha must lie in (0, 1/2), got {a}")
    return a


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="treestretch", description="Dominating trees with small routing-cost stretch.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)
    sub.required = True

    def common(sp, report=True):
        sp.add_argument("--format", choices=["json"], default="json")
        if report:
            sp.add_argument("--report", help="also write the stretch report here")

    fmt_help = "input layout; auto treats text containing commas as a CSV matrix"

    e = sub.add_parser("embed", help="HST or ultrametric for a metric")
    e.add_argument("input", help="CSV distance matrix or point file ('-' for stdin)")
    e.add_argument("--mode", choices=["hst", "ultra"], required=True)
    e.add_argument("--out", help="write the tree JSON here")
    e.add_argument("--input-format", choices=["auto", "matrix", "points"], default="auto", help=fmt_help)
    common(e)
    e.set_defaults(func=cmd_embed)

    s = sub.add_parser("spantree", help="spanning tree of a Euclidean point set")
    s.add_argument("input", help="point file: 'd n' header then n rows")
    s.add_argument("--alpha", type=_alpha, default=DEFAULT_ALPHA)
    s.add_argument("--out", help="write the edge list JSON here")
    s.add_argument("--input-format", choices=["auto", "points"], default="points", help=fmt_help)
    common(s)
    s.set_defaults(func=cmd_spantree)

    v = sub.add_parser("verify", help="recheck a tree file against its source")
    v.add_argument("tree")
    v.add_argument("source")
    v.add_argument("--input-format", choices=["auto", "matrix", "points"], default="auto", help=fmt_help)
    common(v)
    v.set_defaults(func=cmd_verify)

    lb = sub.add_parser("lowerbound", help="cut scores and optimal ultrametric of the path 1..n")
    lb.add_argument("n", type=int)
    lb.add_argument("--out")
    common(lb, report=False)
    lb.set_defaults(func=cmd_lowerbound)

    c = sub.add_parser("cutscan", help="prefix sums and best cut of a list of reals")
    c.add_argument("input", help="whitespace-separated reals ('-' for stdin)")
    c.add_argument("--interval", help="restrict the cut to lo:hi")
    c.add_argument("--out")
    common(c, report=False)
    c.set_defaults(func=cmd_cutscan)

    g = sub.add_parser("generate", help="write a seeded random input file")
    g.add_argument("what", choices=["points", "matrix", "values"])
    g.add_argument("--n", type=int, default=64)
    g.add_argument("--d", type=int, default=2)
    g.add_argument("--kind", choices=["planar", "graph"], default="planar")
    g.add_argument("--family", choices=FAMILIES_1D, default="uniform")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except TreeStretchError as e:
        sys.stderr.write(dumps({"error": e.kind, "type": type(e).__name__, "message": str(e)}))
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
