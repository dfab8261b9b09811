"""Everything built on top of the closure: all-sources edge- and
vertex-dominator trees, constant-time avoid-edge / avoid-vertex /
unreachable-count queries, junctions, and most-critical node/edge.

One scan of the right closure's row s yields, for each target v, either
unreachability, "no common edge" (v roots at s), or the last common edge
(x, y): y then roots v's tree and x's root becomes y's parent in the
contracted tree.  Ancestor intervals over that contracted tree answer
edge-avoidance in O(1); the vertex analogue runs on the split graph's
closure.  Criticality sums per-source dominator subtree sizes."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .closure import closure
from .closure_dag import RIGHT_CANONICAL, ClosureMatrix, recover
from .algebra import BOT_CODE, TOP_CODE, Side
from .dominators import DomTree, bridges_of_flowgraph, is_ancestor
from .errors import PreconditionError, QueryError
from .graph import Digraph, EdgeRef, split_vertices


@dataclass(frozen=True)
class EdgeDomTree:
    """Per-source edge-domination data.

    ``root`` maps each vertex to the root of its tree after deleting
    bridges (-1 when unreachable); ``bridge_tail``/``parent_root`` are,
    for marked roots y, the exact tail x of the bridge (x, y) and x's
    root; ``cin``/``cout`` are DFS intervals over the contracted tree
    (meaningful on roots only); ``weight`` counts, per root, the
    vertices whose reachability dies with that root's bridge."""

    source: int
    root: np.ndarray
    bridge_tail: np.ndarray
    parent_root: np.ndarray
    cin: np.ndarray
    cout: np.ndarray
    weight: np.ndarray

    @property
    def n(self) -> int:
        return len(self.root)

    def reachable(self, v: int) -> bool:
        return self.root[v] >= 0

    def is_bridge(self, e: EdgeRef | tuple[int, int]) -> bool:
        x, y = e
        return bool(self.root[y] == y and self.bridge_tail[y] == x)


def _contract(source: int, root: np.ndarray, bridge_tail: np.ndarray,
              parent_root: np.ndarray) -> EdgeDomTree:
    n = len(root)
    marked = [v for v in range(n) if root[v] == v and v != source]
    children: dict[int, list[int]] = {source: []}
    for y in marked:
        children.setdefault(y, [])
    for y in marked:  # ascending, so child lists stay sorted
        children[int(parent_root[y])].append(y)
    counts = np.zeros(n, np.int64)
    for v in range(n):
        if root[v] >= 0:
            counts[root[v]] += 1
    cin = np.full(n, -1, np.int64)
    cout = np.full(n, -1, np.int64)
    weight = np.zeros(n, np.int64)
    clock = 0
    stack: list[tuple[int, int]] = [(source, 0)]
    while stack:
        r, ci = stack.pop()
        if ci == 0:
            if cin[r] >= 0:
                raise PreconditionError("contracted tree links loop")
            cin[r] = clock
            clock += 1
        kids = children[r]
        if ci < len(kids):
            stack.append((r, ci + 1))
            stack.append((kids[ci], 0))
        else:
            cout[r] = clock - 1
            weight[r] = counts[r] + sum(weight[c] for c in kids)
    for arr in (root, bridge_tail, parent_root, cin, cout, weight):
        arr.setflags(write=False)
    return EdgeDomTree(source, root, bridge_tail, parent_root, cin, cout, weight)


def _edge_tree_from_row(row: np.ndarray, s: int, n0: int) -> EdgeDomTree:
    root = np.full(n0, -1, np.int64)
    bridge_tail = np.full(n0, -1, np.int64)
    parent_root = np.full(n0, -1, np.int64)
    root[s] = s
    tails = {}
    for v in range(n0):
        if v == s:
            continue
        code = int(row[v])
        if code == BOT_CODE:
            continue
        if code == TOP_CODE:
            root[v] = s
        else:
            x, y = code // n0, code % n0
            root[v] = y
            tails[y] = x
    for y, x in tails.items():
        bridge_tail[y] = x
        parent_root[y] = root[x]
    return _contract(s, root, bridge_tail, parent_root)


def all_edge_dominator_trees(right_closure: ClosureMatrix) -> list[EdgeDomTree]:
    """One row scan per source over the last-separator closure; O(n) each."""
    if right_closure.flavor != RIGHT_CANONICAL:
        raise PreconditionError("edge-dominator trees need the right closure")
    n = right_closure.n
    return [_edge_tree_from_row(right_closure.codes[s], s, n) for s in range(n)]


def all_vertex_dominator_trees(g: Digraph) -> list[DomTree]:
    """Per-source dominator trees read off the split graph's right closure."""
    ghat, mapping = split_vertices(g)
    right = recover(closure(ghat), Side.RIGHT)
    n = g.n
    n2 = 2 * n
    trees = []
    for s in range(n):
        row = right.codes[mapping.plus[s]]
        parent = np.full(n, -1, np.int64)
        for v in range(n):
            if v == s:
                continue
            code = int(row[mapping.minus[v]])
            if code == BOT_CODE:
                continue
            if code == TOP_CODE:
                parent[v] = s
            else:
                # Both witness forms name the dominator via their tail:
                # (x-, x+) and (x+, y-) give x.
                parent[v] = (code // n2) // 2
        trees.append(DomTree.from_parents(s, parent))
    return trees


def _check_ids(n: int, *ids: int) -> None:
    for i in ids:
        if not (0 <= i < n):
            raise QueryError(f"vertex id {i} out of range")


def avoid_edge_query(trees: list[EdgeDomTree], s: int, t: int,
                     e: EdgeRef | tuple[int, int]) -> bool:
    """True iff t stays reachable from s once edge e is deleted; O(1)."""
    tree = trees[s] if 0 <= s < len(trees) else None
    if tree is None:
        raise QueryError(f"vertex id {s} out of range")
    x, y = e
    _check_ids(tree.n, t, x, y)
    if not tree.reachable(t):
        return False
    if tree.is_bridge((x, y)) and tree.cin[y] <= tree.cin[tree.root[t]] <= tree.cout[y]:
        return False
    return True


def avoid_vertex_query(trees: list[DomTree], s: int, t: int, w: int) -> bool:
    """True iff t stays reachable from s once vertex w is deleted; O(1)."""
    tree = trees[s] if 0 <= s < len(trees) else None
    if tree is None:
        raise QueryError(f"vertex id {s} out of range")
    _check_ids(tree.n, t, w)
    if w == s or w == t:
        raise QueryError("avoided vertex must differ from both endpoints")
    if not tree.reachable[t]:
        return False
    if not tree.reachable[w]:
        return True
    return not is_ancestor(tree, w, t)


def unreachable_count(tree, element) -> int:
    """How many vertices lose reachability from the tree's source when
    the given edge (EdgeDomTree) or vertex (DomTree) is deleted."""
    if isinstance(tree, EdgeDomTree):
        x, y = element
        _check_ids(tree.n, x, y)
        return int(tree.weight[y]) if tree.is_bridge((x, y)) else 0
    if isinstance(tree, DomTree):
        w = element
        _check_ids(tree.n, w)
        if w == tree.source:
            raise QueryError("deleting the source empties the flow graph")
        return int(tree.subtree_size[w]) if tree.reachable[w] else 0
    raise PreconditionError("unreachable_count needs an EdgeDomTree or DomTree")


def junction_test(trees: list[DomTree], s: int, u: int, v: int) -> bool:
    """True iff s starts vertex-disjoint paths to u and to v (sharing
    only s): both reachable and under distinct children of s.  When u or
    v equals s, the trivial path makes the answer the other's
    reachability."""
    tree = trees[s] if 0 <= s < len(trees) else None
    if tree is None:
        raise QueryError(f"vertex id {s} out of range")
    _check_ids(tree.n, u, v)
    if u == s:
        return bool(tree.reachable[v])
    if v == s:
        return bool(tree.reachable[u])
    if not (tree.reachable[u] and tree.reachable[v]):
        return False
    return int(tree.top[u]) != int(tree.top[v])


def junctions_report(trees: list[DomTree], u: int, v: int) -> list[int]:
    """All junctions of the pair; O(1) per candidate source."""
    return [s for s in range(len(trees)) if junction_test(trees, s, u, v)]


@dataclass(frozen=True)
class CriticalityReport:
    """Reachable ordered pairs (u != w) surviving each candidate deletion."""

    kind: str  # "vertex" | "edge"
    candidates: tuple
    values: np.ndarray
    best: object  # argmin candidate after tie-breaking

    def value_of(self, candidate) -> int:
        return int(self.values[self.candidates.index(candidate)])


def _size_table(trees: list[DomTree]) -> np.ndarray:
    return np.stack([t.subtree_size for t in trees])


def critical_node(trees: list[DomTree]) -> CriticalityReport:
    """f(G minus v) for every v; ties broken toward the lowest index.

    Deleting v removes, from each source u, exactly v's subtree of u's
    dominator tree; reflexive pairs of the n-1 survivors are excluded."""
    n = len(trees)
    sizes = _size_table(trees)
    total = int(sizes.diagonal().sum())
    values = total - sizes.sum(axis=0) - (n - 1)
    best = int(np.argmin(values))
    return CriticalityReport("vertex", tuple(range(n)), values.astype(np.int64), best)


def critical_edge(g: Digraph, trees: list[DomTree]) -> CriticalityReport:
    """f(G minus e) for every edge; a deleted bridge of the flow graph of
    source u destroys exactly u's pairs into the bridge head's subtree.
    Ties break toward the lexicographically smallest edge."""
    n = len(trees)
    sizes = _size_table(trees)
    total = int(sizes.diagonal().sum())
    f_base = total - n
    loss: dict[EdgeRef, int] = {e: 0 for e in g.edges()}
    for u in range(n):
        decomp = bridges_of_flowgraph(trees[u], g)
        for e in decomp.bridges:
            loss[e] += int(sizes[u, e.head])
    candidates = tuple(sorted(loss))
    values = np.array([f_base - loss[e] for e in candidates], np.int64)
    best = candidates[int(np.argmin(values))] if candidates else None
    return CriticalityReport("edge", candidates, values, best)
