"""Command-line interface.

Subcommands: validate-category, eval-graph, labelings, invariant,
partition, dw, pachner, hqft-rank, cobordism-map.  Reports are structured
text (or JSON with --json) containing the exact results, input digests and
the convention version; timing lives in a separate field so repeated runs
are otherwise byte-identical.  Exit codes: 0 success, 2 validation
failure, 3 domain error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from importlib import resources

from . import catdata, complexes, gauge, graphcalc, hqft, oracle, statesum

CONVENTION_VERSION = "statesum3d-conventions-1"

__all__ = ["main", "run"]


class _Report:
    def __init__(self, command):
        self.data = {"command": command, "convention": CONVENTION_VERSION,
                     "inputs": {}, "results": {}, "counts": {}}
        self.t0 = time.perf_counter()

    def digest(self, label, text):
        self.data["inputs"][label] = hashlib.sha256(text.encode()).hexdigest()[:16]

    def done(self):
        self.data["wall_seconds"] = round(time.perf_counter() - self.t0, 3)
        return self.data

    def render(self, as_json: bool) -> str:
        data = self.done()
        if as_json:
            return json.dumps(data, indent=2, sort_keys=True) + "\n"
        lines = [f"command: {data['command']}", f"convention: {data['convention']}"]
        for k, v in sorted(data["inputs"].items()):
            lines.append(f"input {k}: {v}")
        for k, v in sorted(data["counts"].items()):
            lines.append(f"count {k}: {v}")
        for k, v in sorted(data["results"].items()):
            if isinstance(v, list):
                lines.append(f"{k}:")
                lines.extend(f"  {item}" for item in v)
            else:
                lines.append(f"{k}: {v}")
        lines.append(f"wall_seconds: {data['wall_seconds']}")
        return "\n".join(lines) + "\n"


class _CliError(Exception):
    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


def _data_text(kind: str, name: str) -> str:
    """Load an input by shipped name or by path."""
    if os.path.exists(name):
        try:
            with open(name) as fh:
                return fh.read()
        except OSError as exc:
            raise _CliError(4, f"cannot read {name}: {exc}") from None
    sub = {"triangulation": "triangulations", "skeleton": "skeletons",
           "surface": "surfaces"}[kind]
    suffix = {"triangulation": ".tri", "skeleton": ".skel", "surface": ".surf"}[kind]
    try:
        root = resources.files("statesum3d").joinpath("data", sub, name + suffix)
        return root.read_text()
    except (FileNotFoundError, OSError):
        raise _CliError(4, f"no shipped {kind} named {name!r} and no such file") from None


def _load_category(name: str) -> catdata.GFusionData:
    if os.path.exists(name):
        try:
            with open(name) as fh:
                return catdata.load_category(fh.read())
        except OSError as exc:
            raise _CliError(4, str(exc)) from None
    try:
        return catdata.builtin_category(name)
    except ValueError:
        raise _CliError(4, f"unknown category {name!r}") from None


def _load_triangulation(name: str):
    return complexes.parse_triangulation(_data_text("triangulation", name))


def _skeleton_for(args):
    if getattr(args, "skeleton", None):
        return complexes.parse_skeleton(_data_text("skeleton", args.skeleton))
    if getattr(args, "triangulation", None):
        return complexes.dual_skeleton(_load_triangulation(args.triangulation))
    raise _CliError(4, "need --triangulation or --skeleton")


def _cmd_validate_category(args, rep):
    cat = _load_category(args.category)
    rep.digest("category", catdata.save_category(cat))
    report = catdata.validate_category(cat)
    rep.data["results"]["checks"] = report.lines()
    rep.data["results"]["passed"] = report.passed()
    nd = catdata.neutral_dimension(cat)
    rep.data["results"]["neutral_dimension"] = nd.to_text()
    return 0 if report.passed() else 2


def _cmd_eval_graph(args, rep):
    cat = _load_category(args.category)
    try:
        with open(args.graph) as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliError(4, str(exc)) from None
    rep.digest("graph", text)
    graph = graphcalc.parse_graph(text)
    tensor = graphcalc.evaluate_graph(cat, graph, outer_face=args.outer_face)
    rep.data["counts"]["vertices"] = graph.nvertices
    rep.data["counts"]["entries"] = len(tensor.entries)
    rep.data["results"]["dims"] = list(tensor.dims())
    rep.data["results"]["entries"] = [
        f"{idx} -> {val.to_text()}" for idx, val in sorted(tensor.entries.items())]
    return 0


def _cmd_labelings(args, rep):
    sk = _skeleton_for(args)
    group = catdata.FiniteGroup.by_name(args.group)
    labs = gauge.enumerate_labelings(sk, group)
    orbits = gauge.gauge_orbits(sk, group, labs)
    rep.data["counts"]["labelings"] = len(labs)
    rep.data["counts"]["orbits"] = len(orbits)
    rows = []
    for k, (rep_lab, members) in enumerate(orbits):
        key = " ".join(str(rep_lab[r]) for r in range(sk.nregions()))
        rows.append(f"orbit {k}: size {len(members)} representative [{key}]")
    rep.data["results"]["orbits"] = rows
    return 0


def _cmd_invariant(args, rep):
    sk = _skeleton_for(args)
    cat = _load_category(args.category)
    group = cat.group
    labs = gauge.enumerate_labelings(sk, group)
    orbits = gauge.gauge_orbits(sk, group, labs)
    rep.data["counts"]["orbits"] = len(orbits)
    wanted = range(len(orbits)) if args.all_orbits else [args.orbit]
    rows = []
    for k in wanted:
        if not (0 <= k < len(orbits)):
            raise _CliError(3, f"orbit index {k} out of range")
        rep_lab, members = orbits[k]
        res = statesum.closed_invariant(sk, rep_lab, cat)
        rows.append(f"orbit {k}: size {len(members)} value {res.value.to_text()}")
        rep.data["counts"][f"colorings_orbit_{k}"] = res.colorings_admissible
    rep.data["results"]["invariants"] = rows
    return 0


def _cmd_partition(args, rep):
    sk = _skeleton_for(args)
    cat = _load_category(args.category)
    table = statesum.partition_all_classes(sk, cat)
    rows = [f"orbit {k}: size {size} value {val.to_text()}"
            for k, (_, size, val) in enumerate(table.rows)]
    rep.data["results"]["orbits"] = rows
    rep.data["results"]["aggregate"] = table.aggregate.to_text()
    rep.data["counts"]["orbits"] = len(table.rows)
    return 0


def _cmd_dw(args, rep):
    tri = _load_triangulation(args.triangulation)
    group = catdata.FiniteGroup.by_name(args.group)
    if not args.group.startswith("Z"):
        raise _CliError(3, "dw shipped cocycles are for cyclic groups")
    theta = catdata.CocycleTable.cyclic_rep(group.order, args.theta)
    try:
        ot = oracle.find_branching(tri)
        rep.data["results"]["branching"] = "direct"
    except ValueError:
        ot = oracle.subdivide(tri)
        rep.data["results"]["branching"] = "subdivided"
    value = oracle.dw_partition(ot, group, theta)
    rep.data["results"]["partition"] = value.to_text()
    if args.per_class:
        table = oracle.dw_class_table(ot, group, theta)
        rep.data["results"]["classes"] = [
            f"class {i}: value {v.to_text()}" for i, (_, v) in enumerate(table)]
    return 0


def _cmd_pachner(args, rep):
    tri = _load_triangulation(args.triangulation)
    if args.move in ("1-4", "4-1"):
        location = int(args.location)
    elif args.move == "3-2":
        location = int(args.location)
    else:
        t, f = args.location.split(",")
        location = (int(t), int(f))
    out = complexes.pachner(tri, args.move, location)
    text = complexes.save_triangulation(out, name=f"{args.triangulation}_{args.move}")
    rep.data["results"]["summary"] = str(out.summary())
    if args.out:
        try:
            with open(args.out, "w") as fh:
                fh.write(text)
        except OSError as exc:
            raise _CliError(4, str(exc)) from None
        rep.data["results"]["written"] = args.out
    else:
        rep.data["results"]["triangulation"] = text.splitlines()
    return 0


def _cmd_hqft_rank(args, rep):
    cat = _load_category(args.category)
    if args.surface == "empty":
        rep.data["results"]["rank"] = 1
        return 0
    if os.path.exists(args.surface):
        surf = hqft.parse_surface(_data_text("surface", args.surface), cat.group)
    else:
        surf = hqft.builtin_surface(args.surface, cat.group)
    space = hqft.cylinder_projector(surf, cat)
    rep.data["results"]["rank"] = space.rank
    rep.data["counts"]["block_space_dim"] = len(space.matrix)
    rep.data["counts"]["colorings"] = len(space.colorings)
    return 0


def _cmd_cobordism_map(args, rep):
    cat = _load_category(args.category)
    try:
        with open(args.cobordism) as fh:
            text = fh.read()
    except OSError as exc:
        raise _CliError(4, str(exc)) from None
    rep.digest("cobordism", text)
    cob = hqft.parse_cobordism(text, cat.group)
    matrix, bot_cols, bot_dims, top_cols, top_dims = hqft.assemble_block_matrix(cob, cat)
    rep.data["counts"]["rows"] = len(matrix)
    rep.data["counts"]["cols"] = len(matrix[0]) if matrix else 0
    rep.data["results"]["bot_colorings"] = [str(c) for c in bot_cols]
    rep.data["results"]["top_colorings"] = [str(c) for c in top_cols]
    rep.data["results"]["matrix"] = [
        "[" + ", ".join(x.to_text() for x in row) + "]" for row in matrix]
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="statesum3d",
        description="Exact state-sum invariants of labeled 3-manifolds.",
        epilog="Inputs may be shipped names (see the data directory) or file "
               "paths. File formats are line-based; see README.md.")
    ap.add_argument("--json", action="store_true", help="emit the report as JSON")
    ap.add_argument("--workers", default="auto",
                    help="worker count hint; results are independent of it")
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate-category", help="run all category checks")
    p.add_argument("--category", required=True)

    p = sub.add_parser("eval-graph", help="evaluate a colored graph on the sphere")
    p.add_argument("--graph", required=True)
    p.add_argument("--category", required=True)
    p.add_argument("--outer-face", type=int, default=0)

    p = sub.add_parser("labelings", help="enumerate labelings and gauge orbits")
    p.add_argument("--triangulation")
    p.add_argument("--skeleton")
    p.add_argument("--group", required=True)

    p = sub.add_parser("invariant", help="closed state-sum invariant per orbit")
    p.add_argument("--triangulation")
    p.add_argument("--skeleton")
    p.add_argument("--category", required=True)
    p.add_argument("--orbit", type=int, default=0)
    p.add_argument("--all-orbits", action="store_true")

    p = sub.add_parser("partition", help="per-orbit table and aggregate")
    p.add_argument("--triangulation")
    p.add_argument("--skeleton")
    p.add_argument("--category", required=True)

    p = sub.add_parser("dw", help="simplicial cocycle partition oracle")
    p.add_argument("--triangulation", required=True)
    p.add_argument("--group", required=True)
    p.add_argument("--theta", type=int, default=0)
    p.add_argument("--per-class", action="store_true")

    p = sub.add_parser("pachner", help="apply a bistellar move")
    p.add_argument("--triangulation", required=True)
    p.add_argument("--move", required=True, choices=["1-4", "2-3", "3-2", "4-1"])
    p.add_argument("--location", required=True,
                   help="tet index, 'tet,face', edge class, or vertex class")
    p.add_argument("--out")

    p = sub.add_parser("hqft-rank", help="state space rank of a surface")
    p.add_argument("--surface", required=True,
                   help="empty, a shipped skeleton name, or a file")
    p.add_argument("--category", required=True)

    p = sub.add_parser("cobordism-map", help="block matrix of a cobordism file")
    p.add_argument("--cobordism", required=True)
    p.add_argument("--category", required=True)
    return ap


_HANDLERS = {
    "validate-category": _cmd_validate_category,
    "eval-graph": _cmd_eval_graph,
    "labelings": _cmd_labelings,
    "invariant": _cmd_invariant,
    "partition": _cmd_partition,
    "dw": _cmd_dw,
    "pachner": _cmd_pachner,
    "hqft-rank": _cmd_hqft_rank,
    "cobordism-map": _cmd_cobordism_map,
}


def run(argv) -> int:
    """Dispatch a CLI invocation; returns the exit code."""
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    os.environ.setdefault("STATESUM3D_CACHE_DIR", "")  # reserved, in-memory in v1
    rep = _Report(" ".join(argv))
    try:
        code = _HANDLERS[args.cmd](args, rep)
    except _CliError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.code
    except (ValueError, AssertionError) as exc:
        sys.stderr.write(f"domain error ({args.cmd}): {exc}\n")
        return 3
    sys.stdout.write(rep.render(args.json))
    return code


def main() -> None:
    sys.exit(run(sys.argv[1:]))
