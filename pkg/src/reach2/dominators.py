"""Per-source dominator trees, flow-graph bridges, ancestor queries.

A vertex u dominates v (from source s) when every s->v path contains u;
the dominator tree makes that an ancestor relation answerable in O(1)
through DFS intervals.  An edge (x, y) is a bridge of the flow graph when
every s->y path uses that very edge; deleting bridges from the dominator
tree yields the bridge decomposition, whose per-vertex tree roots drive
the strongly-connected closure construction and the avoidance queries.

Immediate dominators come from the iterative data-flow scheme over
reverse postorder; the surrounding pipeline is quadratic per source, so
the near-linear simplicity wins over the classic linear-time algorithms.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import InternalInvariantError, QueryError
from .graph import Digraph, EdgeRef


@dataclass(frozen=True)
class DomTree:
    source: int
    parent: np.ndarray  # -1 for the source and unreachable vertices
    reachable: np.ndarray
    dfs_in: np.ndarray
    dfs_out: np.ndarray
    subtree_size: np.ndarray
    top: np.ndarray  # depth-1 ancestor (child of source); source maps to itself

    @property
    def n(self) -> int:
        return len(self.parent)

    @classmethod
    def from_parents(cls, source: int, parent: np.ndarray) -> "DomTree":
        """Build interval labels and sizes for a given parent function."""
        n = len(parent)
        parent = np.asarray(parent, np.int64)
        reachable = parent >= 0
        reachable[source] = True
        children: list[list[int]] = [[] for _ in range(n)]
        for v in range(n):
            p = parent[v]
            if p >= 0:
                children[p].append(v)
        dfs_in = np.full(n, -1, np.int64)
        dfs_out = np.full(n, -1, np.int64)
        size = np.zeros(n, np.int64)
        top = np.full(n, -1, np.int64)
        top[source] = source
        clock = 0
        visited = 0
        stack: list[tuple[int, int]] = [(source, 0)]
        while stack:
            v, ci = stack.pop()
            if ci == 0:
                dfs_in[v] = clock
                clock += 1
                visited += 1
                if v != source:
                    top[v] = v if parent[v] == source else top[parent[v]]
            if ci < len(children[v]):
                stack.append((v, ci + 1))
                stack.append((children[v][ci], 0))
            else:
                dfs_out[v] = clock - 1
                size[v] = dfs_out[v] - dfs_in[v] + 1
        if visited != int(reachable.sum()):
            raise InternalInvariantError("parent links do not form one tree")
        for arr in (parent, reachable, dfs_in, dfs_out, size, top):
            arr.setflags(write=False)
        return cls(source, parent, reachable, dfs_in, dfs_out, size, top)


def _reverse_postorder(g: Digraph, s: int) -> np.ndarray:
    seen = np.zeros(g.n, bool)
    seen[s] = True
    post: list[int] = []
    stack: list[tuple[int, int]] = [(s, 0)]
    while stack:
        v, ei = stack.pop()
        row = g.out_neighbors(v)
        pushed = False
        while ei < len(row):
            w = int(row[ei])
            ei += 1
            if not seen[w]:
                seen[w] = True
                stack.append((v, ei))
                stack.append((w, 0))
                pushed = True
                break
        if not pushed:
            post.append(v)
    return np.array(post[::-1], np.int64)


def _idom_python(rpo, rpo_num, in_indptr, in_indices, idom):
    changed = True
    while changed:
        changed = False
        for v in rpo[1:]:
            new_idom = -1
            for e in range(in_indptr[v], in_indptr[v + 1]):
                p = in_indices[e]
                if rpo_num[p] < 0 or idom[p] < 0:
                    continue
                if new_idom < 0:
                    new_idom = p
                    continue
                a, b = p, new_idom
                while a != b:
                    while rpo_num[a] > rpo_num[b]:
                        a = idom[a]
                    while rpo_num[b] > rpo_num[a]:
                        b = idom[b]
                new_idom = a
            if new_idom >= 0 and idom[v] != new_idom:
                idom[v] = new_idom
                changed = True


def dominator_tree(g: Digraph, s: int) -> DomTree:
    if not (0 <= s < g.n):
        raise QueryError(f"source {s} out of range")
    rpo = _reverse_postorder(g, s)
    rpo_num = np.full(g.n, -1, np.int64)
    rpo_num[rpo] = np.arange(len(rpo))
    in_indptr, in_indices = g.in_csr()
    idom = np.full(g.n, -1, np.int64)
    idom[s] = s
    if _kernels.use_numba():
        _kernels.idom_words(rpo, rpo_num, in_indptr, in_indices, idom)
    else:
        _idom_python(rpo, rpo_num, in_indptr, in_indices, idom)
    parent = idom.copy()
    parent[s] = -1
    return DomTree.from_parents(s, parent)


def is_ancestor(t: DomTree, u: int, v: int) -> bool:
    """True iff u dominates v; O(1) interval containment."""
    if not (0 <= u < t.n and 0 <= v < t.n):
        raise QueryError("vertex id out of range")
    if not (t.reachable[u] and t.reachable[v]):
        raise QueryError("is_ancestor arguments must be reachable")
    return bool(t.dfs_in[u] <= t.dfs_in[v] <= t.dfs_out[u])


@dataclass(frozen=True)
class BridgeDecomposition:
    bridges: frozenset[EdgeRef]
    is_bridge_head: np.ndarray
    tree_root: np.ndarray  # -1 for unreachable vertices


def bridges_of_flowgraph(t: DomTree, g: Digraph) -> BridgeDecomposition:
    """Exact bridges of the flow graph rooted at t.source, plus the root
    of each vertex's tree once bridges are deleted from the dominator tree.

    (d(y), y) is a bridge exactly when that edge exists and every other
    reachable in-edge of y starts inside y's dominator subtree."""
    n = g.n
    is_head = np.zeros(n, bool)
    bridges = []
    for y in range(n):
        if not t.reachable[y] or y == t.source:
            continue
        p = int(t.parent[y])
        if not g.has_edge(p, y):
            continue
        ok = True
        for z in g.in_neighbors(y):
            z = int(z)
            if z == p or not t.reachable[z]:
                continue
            if not (t.dfs_in[y] <= t.dfs_in[z] <= t.dfs_out[y]):
                ok = False
                break
        if ok:
            is_head[y] = True
            bridges.append(EdgeRef(p, y))
    root = np.full(n, -1, np.int64)
    by_entry = np.argsort(t.dfs_in, kind="stable")
    for v in by_entry:
        v = int(v)
        if not t.reachable[v]:
            continue
        if v == t.source or is_head[v]:
            root[v] = v
        else:
            root[v] = root[t.parent[v]]
    is_head.setflags(write=False)
    root.setflags(write=False)
    return BridgeDecomposition(frozenset(bridges), is_head, root)
