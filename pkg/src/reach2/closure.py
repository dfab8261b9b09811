"""2-reachability closure of arbitrary digraphs, plus the vertex variant.

Vertices are processed in SCC-grouped condensation-topological order.
Each recursion level either delegates a whole strongly connected block,
or splits at the component boundary closest to the middle (ties to the
smaller index) and joins the recovered child closures exactly like the
DAG recursion.  The vertex-disjoint closure reduces to the edge closure
of the split graph where every vertex v becomes v- -> v+."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import BOT, BOT_CODE, TOP, TOP_CODE, Side, TwoReach, bit_width
from .closure_dag import (
    GENERIC,
    ClosureMatrix,
    _recover_block,
    combine_blocks,
    positional_adjacency,
)
from .closure_scc import closure_scc
from .errors import InternalInvariantError, QueryError
from .graph import Digraph, EdgeRef, VertexSplitMap, scc_decompose, split_vertices


def _induced_subgraph(g: Digraph, verts: np.ndarray) -> Digraph:
    local = np.full(g.n, -1, np.int64)
    local[verts] = np.arange(len(verts))
    edges = []
    for i, u in enumerate(verts):
        for w in g.out_neighbors(int(u)):
            lw = local[int(w)]
            if lw >= 0:
                edges.append((i, int(lw)))
    return Digraph(len(verts), edges)


def _remap_codes(codes: np.ndarray, verts: np.ndarray, n_local: int, n0: int) -> np.ndarray:
    out = codes.copy()
    edge = codes >= 0
    if edge.any():
        tails = verts[codes[edge] // n_local]
        heads = verts[codes[edge] % n_local]
        out[edge] = tails * n0 + heads
    return out


def _cross_codes(adj_pos, order, lo, mid, hi, n0):
    tails = order[lo:mid].astype(np.int64)
    heads = order[mid:hi].astype(np.int64)
    labels = tails[:, None] * n0 + heads[None, :]
    return np.where(adj_pos[lo:mid, mid:hi], labels, BOT_CODE)


def closure(g: Digraph, stats: dict | None = None) -> ClosureMatrix:
    """Generic 2-reachability closure of any digraph, indexed by vertex id."""
    decomp = scc_decompose(g)
    order = decomp.order
    comp_pos = decomp.comp_id[order]
    adj_pos = positional_adjacency(g, order)
    k = bit_width(g.n)
    n0 = g.n
    if stats is not None:
        stats.setdefault("max_depth", 0)
        stats.setdefault("scc_leaves", 0)

    def rec(lo: int, hi: int, depth: int) -> np.ndarray:
        if stats is not None and depth > stats["max_depth"]:
            stats["max_depth"] = depth
        n = hi - lo
        if n == 1:
            return np.full((1, 1), TOP_CODE, np.int64)
        if comp_pos[lo] == comp_pos[hi - 1]:
            # One whole strongly connected component.
            verts = order[lo:hi]
            sub = _induced_subgraph(g, verts)
            local = closure_scc(sub)
            if stats is not None:
                stats["scc_leaves"] += 1
            return _remap_codes(local.codes, verts, n, n0)
        # Component boundary closest to the middle; ties to the smaller index.
        best = -1
        best_score = None
        for b in range(lo + 1, hi):
            if comp_pos[b - 1] != comp_pos[b]:
                score = abs(2 * (b - lo) - n)
                if best_score is None or score < best_score:
                    best, best_score = b, score
        if best < 0:
            raise InternalInvariantError("no component boundary in a mixed block")
        a = rec(lo, best, depth + 1)
        c = rec(best, hi, depth + 1)
        if not (best - lo < n and hi - best < n):
            raise InternalInvariantError("split must shrink both sides")
        a_left = _recover_block(a, order[lo:best], Side.LEFT, n0)
        c_right = _recover_block(c, order[best:hi], Side.RIGHT, n0)
        b_codes = _cross_codes(adj_pos, order, lo, best, hi, n0)
        return combine_blocks(a_left, c_right, b_codes, k, n0)

    pos_codes = rec(0, g.n, 1)
    out = np.empty((g.n, g.n), np.int64)
    out[np.ix_(order, order)] = pos_codes
    return ClosureMatrix(out, g.n, GENERIC)


def query(c: ClosureMatrix, u: int, v: int) -> TwoReach:
    """The closure cell for (u, v); O(1)."""
    if not (0 <= u < c.n and 0 <= v < c.n):
        raise QueryError(f"query pair ({u}, {v}) out of range")
    return c.cell(u, v)


@dataclass(frozen=True)
class CutVertex:
    v: int


@dataclass(frozen=True)
class CutEdge:
    edge: EdgeRef


# A vertex-disjointness witness is TOP, BOT, CutVertex, or CutEdge.


@dataclass(frozen=True)
class TwoVertexClosure:
    """Vertex-disjoint 2-reachability witnesses for every ordered pair."""

    split_codes: np.ndarray
    split_map: VertexSplitMap
    n: int

    def cell(self, u: int, v: int):
        if not (0 <= u < self.n and 0 <= v < self.n):
            raise QueryError(f"query pair ({u}, {v}) out of range")
        if u == v:
            return TOP
        code = int(self.split_codes[self.split_map.plus[u], self.split_map.minus[v]])
        if code == BOT_CODE:
            return BOT
        if code == TOP_CODE:
            return TOP
        n2 = 2 * self.n
        tail, head = code // n2, code % n2
        if tail % 2 == 0:
            if head != tail + 1:
                raise InternalInvariantError("split witness is not a split edge")
            return CutVertex(tail // 2)
        return CutEdge(EdgeRef(tail // 2, head // 2))


def two_vertex_closure(g: Digraph) -> TwoVertexClosure:
    """Witnesses for two internally vertex-disjoint paths per pair.

    A split-edge witness (x-, x+) names the cut vertex x; an original
    edge witness (x+, y-) means edge (x, y) lies on all paths, so both
    of its endpoints are cut vertices."""
    ghat, mapping = split_vertices(g)
    c = closure(ghat)
    return TwoVertexClosure(c.codes, mapping, g.n)
