"""Command-line front end.

Subcommands: closure, domtree, query, oracle, bench.  Vertex ids are
1-based at this boundary.  Closure cells print as "T", "B", or "x>y"
("CUTV:x" / "CUTE:x>y" in vertex-disjoint mode).  Exit codes: 0 success,
1 failed validation verdict, 2 user error, 3 internal invariant
violation.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import _kernels
from .algebra import BOT_CODE, TOP_CODE, Side
from .apps import (
    all_edge_dominator_trees,
    all_vertex_dominator_trees,
    avoid_edge_query,
    avoid_vertex_query,
    junction_test,
)
from .closure import TwoVertexClosure, closure, two_vertex_closure
from .closure_dag import GENERIC, LEFT_CANONICAL, RIGHT_CANONICAL, ClosureMatrix, recover
from .dominators import dominator_tree
from .errors import InternalInvariantError, ParseError, Reach2Error
from .graph import Digraph, load_graph
from .oracle import (
    TWO_REACH,
    UNREACHABLE,
    WITNESSES,
    oracle_separators,
    oracle_vertex_separators,
    validate_pair,
)

_FLAVOR_SIDE = {"left": Side.LEFT, "right": Side.RIGHT}


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def _edge_token(code: int, n0: int) -> str:
    if code == BOT_CODE:
        return "B"
    if code == TOP_CODE:
        return "T"
    return f"{code // n0 + 1}>{code % n0 + 1}"


def _vertex_token(code: int, n2: int) -> str:
    if code == BOT_CODE:
        return "B"
    if code == TOP_CODE:
        return "T"
    tail, head = code // n2, code % n2
    if tail % 2 == 0:
        return f"CUTV:{tail // 2 + 1}"
    return f"CUTE:{tail // 2 + 1}>{head // 2 + 1}"


def _emit_rows(rows: list[list[str]], fmt: str, mode: str, flavor: str) -> None:
    if fmt == "json":
        print(json.dumps({"n": len(rows), "mode": mode, "flavor": flavor, "rows": rows}))
    else:
        for row in rows:
            print(" ".join(row))


def _closure_rows(g: Digraph, flavor: str, vertex_mode: bool) -> list[list[str]]:
    if vertex_mode:
        ghat_closure = two_vertex_closure(g)
        codes = ghat_closure.split_codes
        if flavor != GENERIC:
            hidden = ClosureMatrix(codes, 2 * g.n, GENERIC)
            codes = recover(hidden, _FLAVOR_SIDE[flavor]).codes
        tvc = TwoVertexClosure(codes, ghat_closure.split_map, g.n)
        n2 = 2 * g.n
        rows = []
        for u in range(g.n):
            row = []
            for v in range(g.n):
                if u == v:
                    row.append("T")
                else:
                    row.append(_vertex_token(
                        int(codes[tvc.split_map.plus[u], tvc.split_map.minus[v]]), n2))
            rows.append(row)
        return rows
    c = closure(g)
    if flavor != GENERIC:
        c = recover(c, _FLAVOR_SIDE[flavor])
    return [[_edge_token(int(c.codes[u, v]), g.n) for v in range(g.n)] for u in range(g.n)]


def cmd_closure(args) -> int:
    g = load_graph(_read_input(args.input))
    rows = _closure_rows(g, args.flavor, args.vertex_disjoint)
    mode = "vertex" if args.vertex_disjoint else "edge"
    _emit_rows(rows, args.format, mode, args.flavor)
    return 0


def _domtree_lines(g: Digraph, source: int, kind: str) -> list[str]:
    lines = []
    if kind == "vertex":
        tree = dominator_tree(g, source)
        for v in range(g.n):
            if v == source:
                continue
            p = int(tree.parent[v])
            lines.append(f"{v + 1} {'-' if p < 0 else p + 1}")
    else:
        right = recover(closure(g), Side.RIGHT)
        tree = all_edge_dominator_trees(right)[source]
        for v in range(g.n):
            if v == source:
                continue
            r = int(tree.root[v])
            if r < 0:
                lines.append(f"{v + 1} -")
            elif r != v:
                lines.append(f"{v + 1} {r + 1}")
            else:
                lines.append(f"{v + 1} {int(tree.parent_root[v]) + 1}")
    return lines


def cmd_domtree(args) -> int:
    g = load_graph(_read_input(args.input))
    if args.source is None and not args.all:
        raise ParseError("domtree needs --source or --all")
    if args.all:
        if args.kind == "vertex":
            trees = all_vertex_dominator_trees(g)
            for s in range(g.n):
                for v in range(g.n):
                    if v == s:
                        continue
                    p = int(trees[s].parent[v])
                    print(f"{s + 1} {v + 1} {'-' if p < 0 else p + 1}")
        else:
            right = recover(closure(g), Side.RIGHT)
            trees = all_edge_dominator_trees(right)
            for s in range(g.n):
                tree = trees[s]
                for v in range(g.n):
                    if v == s:
                        continue
                    r = int(tree.root[v])
                    if r < 0:
                        print(f"{s + 1} {v + 1} -")
                    elif r != v:
                        print(f"{s + 1} {v + 1} {r + 1}")
                    else:
                        print(f"{s + 1} {v + 1} {int(tree.parent_root[v]) + 1}")
        return 0
    s = _to_internal(args.source, g.n)
    for line in _domtree_lines(g, s, args.kind):
        print(line)
    return 0


def _to_internal(external: int, n: int) -> int:
    if not (1 <= external <= n):
        raise ParseError(f"vertex id {external} out of range 1..{n}")
    return external - 1


def cmd_query(args) -> int:
    g = load_graph(_read_input(args.input))
    u = _to_internal(getattr(args, "from"), g.n)
    v = _to_internal(args.to, g.n)
    if args.avoid_edge is not None:
        try:
            xs, ys = args.avoid_edge.split(",")
            x, y = _to_internal(int(xs), g.n), _to_internal(int(ys), g.n)
        except ValueError:
            raise ParseError("--avoid-edge expects 'x,y'") from None
        right = recover(closure(g), Side.RIGHT)
        trees = all_edge_dominator_trees(right)
        print("YES" if avoid_edge_query(trees, u, v, (x, y)) else "NO")
        return 0
    if args.avoid_vertex is not None:
        w = _to_internal(args.avoid_vertex, g.n)
        trees = all_vertex_dominator_trees(g)
        print("YES" if avoid_vertex_query(trees, u, v, w) else "NO")
        return 0
    if args.junction is not None:
        s = _to_internal(args.junction, g.n)
        trees = all_vertex_dominator_trees(g)
        print("YES" if junction_test(trees, s, u, v) else "NO")
        return 0
    c = closure(g)
    code = int(c.codes[u, v])
    verdict = "YES" if code == TOP_CODE else "NO"
    print(f"{verdict} {_edge_token(code, g.n)}")
    return 0


def _parse_emitted(text: str) -> tuple[list[list[str]], str]:
    stripped = text.lstrip()
    if stripped.startswith("{"):
        doc = json.loads(text)
        return doc["rows"], doc.get("flavor", "generic")
    rows = [line.split() for line in text.splitlines() if line.strip()]
    return rows, "generic"


def _token_to_code(token: str, n0: int) -> int:
    if token == "B":
        return BOT_CODE
    if token == "T":
        return TOP_CODE
    try:
        xs, ys = token.split(">")
        x, y = int(xs) - 1, int(ys) - 1
    except ValueError:
        raise ParseError(f"bad closure token {token!r}") from None
    if not (0 <= x < n0 and 0 <= y < n0):
        raise ParseError(f"closure token {token!r} out of range")
    return x * n0 + y


def _validate_vertex_tokens(g: Digraph, rows: list[list[str]]) -> tuple[bool, str]:
    from .oracle import _adj, _reaches  # reuse the oracle's plain BFS

    adj = _adj(g)
    for u in range(g.n):
        for v in range(g.n):
            token = rows[u][v]
            if u == v:
                if token != "T":
                    return False, f"({u + 1},{v + 1}): diagonal must be T"
                continue
            entry = oracle_vertex_separators(g, u, v)
            if token == "B":
                ok = entry.status == UNREACHABLE
            elif token == "T":
                ok = entry.status == TWO_REACH
            elif token.startswith("CUTV:"):
                ok = entry.status == WITNESSES and int(token[5:]) - 1 in entry.items
            elif token.startswith("CUTE:"):
                xs, ys = token[5:].split(">")
                x, y = int(xs) - 1, int(ys) - 1
                ok = g.has_edge(x, y) and not _reaches(adj, u, v, banned_edge=(x, y))
            else:
                return False, f"({u + 1},{v + 1}): bad token {token!r}"
            if not ok:
                return False, f"({u + 1},{v + 1}): {token} contradicts the oracle"
    return True, ""


def cmd_oracle(args) -> int:
    g = load_graph(_read_input(args.input))
    if args.validate is not None:
        rows, emitted_flavor = _parse_emitted(_read_input(args.validate))
        if len(rows) != g.n or any(len(r) != g.n for r in rows):
            raise ParseError("validated matrix shape does not match the graph")
        flavor = args.flavor if args.flavor != GENERIC else emitted_flavor
        if args.vertex_disjoint:
            ok, why = _validate_vertex_tokens(g, rows)
        else:
            codes = np.array(
                [[_token_to_code(t, g.n) for t in row] for row in rows], np.int64
            )
            c = ClosureMatrix(codes, g.n, flavor)
            verdict = None
            ok = True
            for u in range(g.n):
                for v in range(g.n):
                    cell_ok, entry = validate_pair(g, c, u, v)
                    if not cell_ok:
                        ok, verdict = False, (u, v, rows[u][v], entry)
                        break
                if not ok:
                    break
            why = "" if ok else (
                f"({verdict[0] + 1},{verdict[1] + 1}): {verdict[2]} "
                f"contradicts the oracle ({verdict[3].status})"
            )
        if ok:
            print("OK")
            return 0
        print(f"MISMATCH at {why}")
        return 1

    rows = []
    for u in range(g.n):
        row = []
        for v in range(g.n):
            if args.vertex_disjoint:
                if u == v:
                    row.append("T")
                    continue
                entry = oracle_vertex_separators(g, u, v)
                if entry.status == UNREACHABLE:
                    row.append("B")
                elif entry.status == TWO_REACH:
                    row.append("T")
                else:
                    pick = entry.items[-1] if args.flavor == "right" else entry.items[0]
                    row.append(f"CUTV:{pick + 1}")
            else:
                entry = oracle_separators(g, u, v)
                if entry.status == UNREACHABLE:
                    row.append("B")
                elif entry.status == TWO_REACH:
                    row.append("T")
                else:
                    pick = entry.items[-1] if args.flavor == "right" else entry.items[0]
                    row.append(f"{pick.tail + 1}>{pick.head + 1}")
        rows.append(row)
    mode = "vertex" if args.vertex_disjoint else "edge"
    _emit_rows(rows, args.format, mode, args.flavor)
    return 0


# --------------------------------------------------------------------------
# Benchmark


def _gen_family(family: str, n: int, seed: int) -> Digraph:
    rng = np.random.default_rng([seed, n, {"random-dag": 0, "random-scc": 1, "layered": 2}[family]])
    edges: set[tuple[int, int]] = set()
    if family == "random-dag":
        perm = rng.permutation(n)
        mask = rng.random((n, n)) < 0.25
        for i in range(n):
            for j in range(i + 1, n):
                if mask[i, j]:
                    edges.add((int(perm[i]), int(perm[j])))
    elif family == "random-scc":
        cycle = rng.permutation(n)
        for i in range(n):
            edges.add((int(cycle[i]), int(cycle[(i + 1) % n])))
        mask = rng.random((n, n)) < 0.25
        xs, ys = np.nonzero(mask)
        for x, y in zip(xs, ys):
            if x != y:
                edges.add((int(x), int(y)))
    else:  # layered
        width = max(1, int(round(n ** 0.5)))
        layers = [list(range(i, min(i + width, n))) for i in range(0, n, width)]
        for a, b in zip(layers, layers[1:]):
            mask = rng.random((len(a), len(b))) < 0.5
            for i in range(len(a)):
                for j in range(len(b)):
                    if mask[i, j]:
                        edges.add((a[i], b[j]))
    return Digraph(n, edges)


def _bench_once(g: Digraph) -> list[tuple[str, float]]:
    t0 = time.perf_counter()
    c = closure(g)
    t1 = time.perf_counter()
    right = recover(c, Side.RIGHT)
    t2 = time.perf_counter()
    all_edge_dominator_trees(right)
    t3 = time.perf_counter()
    return [
        ("closure", (t1 - t0) * 1e3),
        ("recover", (t2 - t1) * 1e3),
        ("domtrees", (t3 - t2) * 1e3),
        ("total", (t3 - t0) * 1e3),
    ]


def cmd_bench(args) -> int:
    sizes = [int(s) for s in args.sizes.split(",") if s.strip()]
    backends = ["numba", "numpy"] if args.backend == "both" else [args.backend]
    print("n,m,stage,millis")
    for n in sizes:
        g = _gen_family(args.family, n, args.seed)
        for backend in backends:
            previous = os.environ.get(_kernels.ENV_BACKEND)
            if backend != "auto":
                os.environ[_kernels.ENV_BACKEND] = backend
            try:
                label = "" if args.backend != "both" else f"@{backend}"
                for stage, ms in _bench_once(g):
                    print(f"{n},{g.m},{stage}{label},{ms:.3f}")
            finally:
                if previous is None:
                    os.environ.pop(_kernels.ENV_BACKEND, None)
                else:
                    os.environ[_kernels.ENV_BACKEND] = previous
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="reach2",
        description="All-pairs 2-reachability closures and avoidance queries",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("closure", help="print the 2-reachability closure")
    p.add_argument("input", help="edge-list/JSON graph path, or - for stdin")
    p.add_argument("--vertex-disjoint", action="store_true")
    p.add_argument("--flavor", choices=["generic", "left", "right"], default="generic")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_closure)

    p = sub.add_parser("domtree", help="print (edge-)dominator trees")
    p.add_argument("input")
    p.add_argument("--source", type=int)
    p.add_argument("--all", action="store_true")
    p.add_argument("--kind", choices=["vertex", "edge"], default="vertex")
    p.set_defaults(func=cmd_domtree)

    p = sub.add_parser("query", help="2-reachability and avoidance queries")
    p.add_argument("input")
    p.add_argument("--from", type=int, required=True)
    p.add_argument("--to", type=int, required=True)
    group = p.add_mutually_exclusive_group()
    group.add_argument("--avoid-edge")
    group.add_argument("--avoid-vertex", type=int)
    group.add_argument("--junction", type=int)
    p.set_defaults(func=cmd_query)

    p = sub.add_parser("oracle", help="brute-force closure / validation")
    p.add_argument("input")
    p.add_argument("--validate", help="closure emission to check, or - for stdin")
    p.add_argument("--vertex-disjoint", action="store_true")
    p.add_argument("--flavor", choices=["generic", "left", "right"], default="generic")
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="CSV wall times per stage")
    p.add_argument("--family", choices=["random-dag", "random-scc", "layered"],
                   default="random-scc")
    p.add_argument("--sizes", default="128,256")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=["auto", "numba", "numpy", "both"], default="auto")
    p.set_defaults(func=cmd_bench)

    return parser


def _apply_thread_cap() -> None:
    raw = os.environ.get("REACH2_THREADS")
    if not raw:
        return
    try:
        cap = int(raw)
    except ValueError:
        raise ParseError(f"REACH2_THREADS must be an integer, got {raw!r}") from None
    if cap > 0 and _kernels.HAVE_NUMBA:
        import numba

        try:
            numba.set_num_threads(min(cap, numba.config.NUMBA_NUM_THREADS))
        except ValueError:
            pass


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_thread_cap()
        return args.func(args)
    except InternalInvariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except Reach2Error as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
