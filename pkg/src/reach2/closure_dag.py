"""2-reachability closure of DAGs and first/last-witness recovery.

The closure of a graph is an n x n matrix over {TOP, BOT} plus edges: TOP
means two edge-disjoint paths, BOT means unreachable, an edge means that
edge lies on every path.  A generic closure may store any separating edge;
recovery rewrites every edge cell to the first ("left") or last ("right")
separating edge of its pair in overall O(n^2) through memoised chain
following.

The DAG algorithm splits the topological order in half, recovers the
child closures to left/right form, and joins them with two path-based
matrix products (the right product first, matching the projection's
right preference).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .algebra import (
    BOT_CODE,
    TOP_CODE,
    Side,
    TwoReach,
    bit_width,
    path_product,
    value_of,
)
from .errors import InternalInvariantError, InvalidClosureError, PreconditionError
from .graph import Digraph, scc_decompose

GENERIC = "generic"
LEFT_CANONICAL = "left"
RIGHT_CANONICAL = "right"

_FLAVOR_OF_SIDE = {Side.LEFT: LEFT_CANONICAL, Side.RIGHT: RIGHT_CANONICAL}


@dataclass(frozen=True)
class ClosureMatrix:
    """n x n cell codes over the vertex ids of the originating graph."""

    codes: np.ndarray
    n0: int
    flavor: str = GENERIC

    @property
    def n(self) -> int:
        return self.codes.shape[0]

    def cell(self, u: int, v: int) -> TwoReach:
        return value_of(int(self.codes[u, v]), self.n0)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClosureMatrix)
            and self.n0 == other.n0
            and self.flavor == other.flavor
            and np.array_equal(self.codes, other.codes)
        )


def _recover_python(in_codes, pos, n0, left_side):
    n = in_codes.shape[0]
    out = np.empty_like(in_codes)
    state = np.zeros(in_codes.shape, np.uint8)
    for a0 in range(n):
        for b0 in range(n):
            if state[a0, b0] == 2:
                continue
            chain = [b0 if left_side else a0]
            state[a0, b0] = 1
            while True:
                cur = chain[-1]
                u, v = (a0, cur) if left_side else (cur, b0)
                cv = in_codes[u, v]
                if cv == TOP_CODE or cv == BOT_CODE:
                    out[u, v] = cv
                    state[u, v] = 2
                    break
                nxt = pos[cv // n0] if left_side else pos[cv % n0]
                if nxt < 0:
                    return None, 2
                anchor = in_codes[a0, nxt] if left_side else in_codes[nxt, b0]
                if anchor == TOP_CODE:
                    out[u, v] = cv
                    state[u, v] = 2
                    break
                st = state[a0, nxt] if left_side else state[nxt, b0]
                if st == 2:
                    out[u, v] = out[a0, nxt] if left_side else out[nxt, b0]
                    state[u, v] = 2
                    break
                if st == 1:
                    return None, 1
                chain.append(nxt)
                if left_side:
                    state[a0, nxt] = 1
                else:
                    state[nxt, b0] = 1
            for t in range(len(chain) - 2, -1, -1):
                if left_side:
                    out[a0, chain[t]] = out[a0, chain[t + 1]]
                    state[a0, chain[t]] = 2
                else:
                    out[chain[t], b0] = out[chain[t + 1], b0]
                    state[chain[t], b0] = 2
    return out, 0


def _recover_block(codes: np.ndarray, verts: np.ndarray, side: Side, n0: int) -> np.ndarray:
    """Recover a closure block whose rows/cols stand for global ids verts."""
    n = codes.shape[0]
    pos = np.full(n0, -1, np.int64)
    pos[verts] = np.arange(n, dtype=np.int64)
    left_side = side is Side.LEFT
    if _kernels.use_numba():
        out = np.empty_like(codes)
        state = np.zeros(codes.shape, np.uint8)
        stack = np.empty(n + 2, np.int64)
        status = _kernels.recover_words(codes, pos, n0, left_side, out, state, stack)
    else:
        out, status = _recover_python(codes, pos, n0, left_side)
    if status == 1:
        raise InvalidClosureError("witness chain loops; input is not a valid closure")
    if status == 2:
        raise InternalInvariantError("witness endpoint missing from this matrix")
    return out


def recover(c: ClosureMatrix, side: Side) -> ClosureMatrix:
    """Rewrite edge cells to the first (LEFT) or last (RIGHT) separator."""
    verts = np.arange(c.n, dtype=np.int64)
    out = _recover_block(np.ascontiguousarray(c.codes), verts, side, c.n0)
    return ClosureMatrix(out, c.n0, _FLAVOR_OF_SIDE[side])


def combine_blocks(
    a_left: np.ndarray,
    c_right: np.ndarray,
    b_codes: np.ndarray,
    k: int,
    n0: int,
) -> np.ndarray:
    """Join recovered child closures across a forward-only split.

    Result layout: [[a_left, a_left o (b o c_right)], [BOT, c_right]]."""
    upper = path_product(b_codes, c_right, k, n0)
    upper = path_product(a_left, upper, k, n0)
    n_top, n_bot = a_left.shape[0], c_right.shape[0]
    out = np.full((n_top + n_bot, n_top + n_bot), BOT_CODE, np.int64)
    out[:n_top, :n_top] = a_left
    out[:n_top, n_top:] = upper
    out[n_top:, n_top:] = c_right
    return out


def _cross_block_codes(
    adj_pos: np.ndarray, order: np.ndarray, lo: int, mid: int, hi: int, n0: int
) -> np.ndarray:
    tails = order[lo:mid].astype(np.int64)
    heads = order[mid:hi].astype(np.int64)
    labels = tails[:, None] * n0 + heads[None, :]
    return np.where(adj_pos[lo:mid, mid:hi], labels, BOT_CODE)


def _closure_rec_halving(
    adj_pos: np.ndarray, order: np.ndarray, lo: int, hi: int, k: int, n0: int
) -> np.ndarray:
    n = hi - lo
    if n == 1:
        return np.full((1, 1), TOP_CODE, np.int64)
    mid = lo + n // 2
    a = _closure_rec_halving(adj_pos, order, lo, mid, k, n0)
    c = _closure_rec_halving(adj_pos, order, mid, hi, k, n0)
    a_left = _recover_block(a, order[lo:mid], Side.LEFT, n0)
    c_right = _recover_block(c, order[mid:hi], Side.RIGHT, n0)
    b = _cross_block_codes(adj_pos, order, lo, mid, hi, n0)
    return combine_blocks(a_left, c_right, b, k, n0)


def positional_adjacency(g: Digraph, order: np.ndarray) -> np.ndarray:
    """adj[i, j] = edge (order[i], order[j]) exists."""
    pos = np.empty(g.n, np.int64)
    pos[order] = np.arange(g.n)
    adj = np.zeros((g.n, g.n), bool)
    for u in range(g.n):
        adj[pos[u], pos[g.out_neighbors(u)]] = True
    return adj


def closure_dag(
    g: Digraph, order: np.ndarray | None = None, k: int | None = None
) -> ClosureMatrix:
    """Generic 2-reachability closure of a DAG, indexed by vertex ids.

    ``order`` must be a topological permutation; defaults to the
    SCC-decomposition order (which requires the graph to be acyclic)."""
    if order is None:
        decomp = scc_decompose(g)
        if not decomp.is_dag():
            raise PreconditionError("closure_dag needs an acyclic graph")
        order = decomp.order
    order = np.asarray(order, np.int64)
    if sorted(order.tolist()) != list(range(g.n)):
        raise PreconditionError("order must be a permutation of all vertices")
    adj_pos = positional_adjacency(g, order)
    if np.tril(adj_pos).any():
        raise PreconditionError("order is not topological for this graph")
    if k is None:
        k = bit_width(g.n)
    pos_codes = _closure_rec_halving(adj_pos, order, 0, g.n, k, g.n)
    out = np.empty((g.n, g.n), np.int64)
    out[np.ix_(order, order)] = pos_codes
    return ClosureMatrix(out, g.n, GENERIC)
