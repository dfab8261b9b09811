"""2-reachability closure of strongly connected graphs.

One fixed source s turns the all-pairs problem into two single-source
ones: a pair (u, v) misses two edge-disjoint paths only if the last
common edge toward v (the bridge entering v's tree of the bridge
decomposition) or the first common edge from u (same, in the reverse
flow graph) separates it.  An auxiliary graph H rewires each bridge
(p, q) by shortcut edges (p, y) for every edge escaping q's dominated
set, so plain reachability in H matches reachability in G minus the
per-target bridge; a second auxiliary graph H' does the same for the
per-source bridge on the reverse graph.  Cells then read off the two
precomputed transitive closures in O(1)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .algebra import TOP_CODE
from .bitmatrix import BitMatrix, pack_bool, transitive_closure
from .closure_dag import GENERIC, ClosureMatrix
from .dominators import bridges_of_flowgraph, dominator_tree
from .errors import InternalInvariantError, PreconditionError
from .graph import Digraph, scc_decompose

UNSET = -1


@dataclass(frozen=True)
class AuxGraph:
    """Reachability surrogate for one direction of one flow graph."""

    h_closure: BitMatrix
    witness: np.ndarray  # per-vertex bridge code tail*n+head, -1 inside s's tree
    h_adjacency: BitMatrix  # the rewired edge set itself (kept for checks)


def auxiliary_graph(g: Digraph, s: int) -> AuxGraph:
    if scc_decompose(g).num_components != 1:
        raise PreconditionError("auxiliary_graph needs a strongly connected graph")
    n = g.n
    tree = dominator_tree(g, s)
    decomp = bridges_of_flowgraph(tree, g)

    adj = g.adjacency_dense()
    h_dense = adj.copy()
    for p, q in decomp.bridges:
        h_dense[p, q] = False

    # Vertices sorted by dominator-tree entry time; a root's dominated set
    # is a contiguous slice of this.
    by_entry = np.argsort(tree.dfs_in, kind="stable")

    roots = [v for v in range(n) if decomp.tree_root[v] == v]
    roots.sort(key=lambda r: -int(tree.dfs_in[r]))  # bottom-up
    members: dict[int, list[int]] = {r: [] for r in roots}
    for v in range(n):
        members[int(decomp.tree_root[v])].append(v)

    child_roots: dict[int, list[int]] = {r: [] for r in roots}
    for q in roots:
        p = int(tree.parent[q])
        if p >= 0:
            child_roots[int(decomp.tree_root[p])].append(q)

    witness = np.full(n, UNSET, np.int64)
    escape: dict[int, np.ndarray] = {}
    for r in roots:
        mask = np.zeros(n, bool)
        for x in members[r]:
            mask |= adj[x]
        # fold in the escape sets of child trees hanging below this one
        for q in sorted(child_roots[r]):
            mask |= escape[q]
        dominated = by_entry[int(tree.dfs_in[r]):int(tree.dfs_out[r]) + 1]
        mask[dominated] = False
        escape[r] = mask
        if r != int(decomp.tree_root[s]):
            p = int(tree.parent[r])
            code = p * n + r
            for x in members[r]:
                witness[x] = code
            h_dense[p] |= mask

    h_adj = BitMatrix(n, n, pack_bool(h_dense))
    return AuxGraph(transitive_closure(h_adj), witness, h_adj)


def closure_scc(g: Digraph) -> ClosureMatrix:
    """Generic closure of a strongly connected graph; no cell is BOT.

    The start vertex is pinned to 0 for reproducible output.  Cells
    separated by both candidate bridges take the forward-side witness."""
    n = g.n
    fwd = auxiliary_graph(g, 0)
    rev = auxiliary_graph(g.reverse(), 0)

    reach_h = fwd.h_closure.to_dense()
    reach_hp = rev.h_closure.to_dense()

    w_by_col = np.broadcast_to(fwd.witness[None, :], (n, n))
    wp = rev.witness
    wp_rev = np.where(wp >= 0, (wp % n) * n + (wp // n), UNSET)
    wp_by_row = np.broadcast_to(wp_rev[:, None], (n, n))

    miss_h = ~reach_h
    miss_hp = ~reach_hp.T  # [i, j] : i not reachable from j in the reverse surrogate

    if bool((miss_h & (w_by_col == UNSET)).any()):
        raise InternalInvariantError("missing per-target witness for unreachable H pair")
    if bool((miss_hp & ~miss_h & (wp_by_row == UNSET)).any()):
        raise InternalInvariantError("missing per-source witness for unreachable H' pair")

    codes = np.where(miss_h, w_by_col, np.where(miss_hp, wp_by_row, TOP_CODE))
    return ClosureMatrix(codes.astype(np.int64), n, GENERIC)
