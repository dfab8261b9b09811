"""Brute-force reference implementations used as ground truth in tests.

Everything here is simple BFS over adjacency lists, deliberately sharing
no code with the packed-matrix fast path.  Separating edges for a pair
are found by banning, one at a time, every edge of one concrete path
(any separator must lie on every path, hence on that one); the result
list keeps the order of appearance along that path, which is total."""

from __future__ import annotations

from dataclasses import dataclass, field

from .closure_dag import ClosureMatrix, LEFT_CANONICAL, RIGHT_CANONICAL
from .errors import PreconditionError
from .graph import Digraph, EdgeRef

UNREACHABLE = "unreachable"
TWO_REACH = "two"
WITNESSES = "witnesses"


@dataclass(frozen=True)
class SeparatorSet:
    """Separators for one ordered pair: either unreachable, 2-reachable,
    or the full list of separating edges (or vertices) in path order."""

    status: str
    items: tuple = field(default_factory=tuple)


def _adj(g: Digraph) -> list[list[int]]:
    return [[int(w) for w in g.out_neighbors(u)] for u in range(g.n)]


def _path(adj, s, t, banned_edge=None, banned_vertex=None):
    """One shortest path s..t avoiding the banned element, else None."""
    if s == banned_vertex:
        return None
    prev = {s: None}
    queue = [s]
    qi = 0
    while qi < len(queue):
        u = queue[qi]
        qi += 1
        if u == t:
            path = [u]
            while prev[path[-1]] is not None:
                path.append(prev[path[-1]])
            return path[::-1]
        for v in adj[u]:
            if v in prev or v == banned_vertex:
                continue
            if banned_edge is not None and (u, v) == banned_edge:
                continue
            prev[v] = u
            queue.append(v)
    return None


def _reaches(adj, s, t, banned_edge=None, banned_vertex=None) -> bool:
    return _path(adj, s, t, banned_edge, banned_vertex) is not None


def oracle_separators(g: Digraph, u: int, v: int) -> SeparatorSet:
    """All edges separating u from v, in order along one path."""
    if u == v:
        return SeparatorSet(TWO_REACH)
    adj = _adj(g)
    path = _path(adj, u, v)
    if path is None:
        return SeparatorSet(UNREACHABLE)
    seps = []
    for a, b in zip(path, path[1:]):
        if not _reaches(adj, u, v, banned_edge=(a, b)):
            seps.append(EdgeRef(a, b))
    if not seps:
        return SeparatorSet(TWO_REACH)
    return SeparatorSet(WITNESSES, tuple(seps))


def oracle_vertex_separators(g: Digraph, u: int, v: int) -> SeparatorSet:
    """All intermediate vertices separating u from v, in path order."""
    if u == v:
        raise PreconditionError("vertex separators need distinct endpoints")
    adj = _adj(g)
    path = _path(adj, u, v)
    if path is None:
        return SeparatorSet(UNREACHABLE)
    seps = []
    for w in path[1:-1]:
        if not _reaches(adj, u, v, banned_vertex=w):
            seps.append(w)
    if not seps:
        return SeparatorSet(TWO_REACH)
    return SeparatorSet(WITNESSES, tuple(seps))


def oracle_reach_pairs(
    g: Digraph,
    deleted_edge: EdgeRef | tuple[int, int] | None = None,
    deleted_vertex: int | None = None,
) -> int:
    """Ordered non-reflexive reachable pairs after deleting one element."""
    adj = _adj(g)
    if deleted_edge is not None:
        a, b = deleted_edge
        adj[a] = [w for w in adj[a] if w != b]
    if deleted_vertex is not None:
        adj[deleted_vertex] = []
        adj = [[w for w in row if w != deleted_vertex] for row in adj]
    total = 0
    for s in range(g.n):
        if s == deleted_vertex:
            continue
        seen = {s}
        queue = [s]
        while queue:
            x = queue.pop()
            for y in adj[x]:
                if y not in seen:
                    seen.add(y)
                    queue.append(y)
        total += len(seen) - 1
    return total


# Cell-code contract of ClosureMatrix, restated here so the oracle needs
# nothing from the fast path's algebra module.
_BOT = -2
_TOP = -1


def validate_pair(g: Digraph, c: ClosureMatrix, u: int, v: int):
    """Check one cell; returns (ok, oracle entry)."""
    entry = oracle_separators(g, u, v)
    code = int(c.codes[u, v])
    if entry.status == UNREACHABLE:
        ok = code == _BOT
    elif entry.status == TWO_REACH:
        ok = code == _TOP
    elif code < 0:
        ok = False
    else:
        witness = EdgeRef(code // c.n0, code % c.n0)
        if c.flavor == LEFT_CANONICAL:
            ok = witness == entry.items[0]
        elif c.flavor == RIGHT_CANONICAL:
            ok = witness == entry.items[-1]
        else:
            ok = witness in entry.items
    return ok, entry


def validate_closure(g: Digraph, c: ClosureMatrix):
    """Check every cell of a claimed closure against the oracle.

    Returns (True, None) or (False, (u, v, cell, oracle entry))."""
    if c.n != g.n:
        raise PreconditionError("closure size does not match the graph")
    for u in range(g.n):
        for v in range(g.n):
            ok, entry = validate_pair(g, c, u, v)
            if not ok:
                return False, (u, v, c.cell(u, v), entry)
    return True, None
