"""Directed-graph representation, SCC decomposition, and graph transforms.

Vertices are dense 0-based integers.  External (text/JSON) formats use
1-based ids; the parsers shift them.  Graphs are immutable after
construction: adjacency is stored as CSR arrays with sorted neighbor
lists in both directions.
"""

from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, NamedTuple

import numpy as np

from .errors import ParseError, PreconditionError


class EdgeRef(NamedTuple):
    tail: int
    head: int

    def reversed(self) -> "EdgeRef":
        return EdgeRef(self.head, self.tail)


def _csr(n: int, pairs: np.ndarray, key_col: int, val_col: int):
    order = np.lexsort((pairs[:, val_col], pairs[:, key_col]))
    keys = pairs[order, key_col]
    vals = np.ascontiguousarray(pairs[order, val_col])
    indptr = np.zeros(n + 1, np.int64)
    np.add.at(indptr, keys + 1, 1)
    np.cumsum(indptr, out=indptr)
    return indptr, vals


class Digraph:
    """Simple digraph: no self-loops, at most one edge per ordered pair."""

    __slots__ = ("n", "m", "_out_indptr", "_out_indices", "_in_indptr", "_in_indices")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise PreconditionError("vertex count must be >= 1")
        pairs = np.array(sorted(set((int(u), int(v)) for u, v in edges)), np.int64)
        if pairs.size == 0:
            pairs = pairs.reshape(0, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise PreconditionError("edge endpoint out of range")
        if pairs.size and (pairs[:, 0] == pairs[:, 1]).any():
            raise PreconditionError("self-loops are not representable")
        self.n = n
        self.m = pairs.shape[0]
        self._out_indptr, self._out_indices = _csr(n, pairs, 0, 1)
        self._in_indptr, self._in_indices = _csr(n, pairs, 1, 0)
        for arr in (self._out_indptr, self._out_indices, self._in_indptr, self._in_indices):
            arr.setflags(write=False)

    def out_neighbors(self, u: int) -> np.ndarray:
        return self._out_indices[self._out_indptr[u]:self._out_indptr[u + 1]]

    def in_neighbors(self, v: int) -> np.ndarray:
        return self._in_indices[self._in_indptr[v]:self._in_indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.out_neighbors(u)
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def edges(self) -> Iterator[EdgeRef]:
        for u in range(self.n):
            for v in self.out_neighbors(u):
                yield EdgeRef(u, int(v))

    def reverse(self) -> "Digraph":
        return Digraph(self.n, ((int(v), int(u)) for u, v in self.edges()))

    def out_csr(self):
        return self._out_indptr, self._out_indices

    def in_csr(self):
        return self._in_indptr, self._in_indices

    def adjacency_dense(self) -> np.ndarray:
        dense = np.zeros((self.n, self.n), bool)
        for u in range(self.n):
            dense[u, self.out_neighbors(u)] = True
        return dense

    def __repr__(self) -> str:
        return f"Digraph(n={self.n}, m={self.m})"


def _build_checked(n: int, raw_edges: list[tuple[int, int]], where: list[str]) -> Digraph:
    seen: set[tuple[int, int]] = set()
    edges: list[tuple[int, int]] = []
    duplicates = 0
    for (u, v), loc in zip(raw_edges, where):
        if not (1 <= u <= n) or not (1 <= v <= n):
            raise ParseError(f"{loc}: vertex id out of range 1..{n}")
        if u == v:
            raise ParseError(f"{loc}: self-loop {u}->{v} is not allowed")
        e = (u - 1, v - 1)
        if e in seen:
            duplicates += 1
            continue
        seen.add(e)
        edges.append(e)
    if duplicates:
        warnings.warn(f"collapsed {duplicates} duplicate edge(s)", stacklevel=3)
    return Digraph(n, edges)


def parse_edge_list(text: str | bytes) -> Digraph:
    """Parse "n m" header plus m lines "u v" with 1-based vertex ids."""
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = text.splitlines()
    idx = 0
    while idx < len(lines) and not lines[idx].strip():
        idx += 1
    if idx >= len(lines):
        raise ParseError("line 1: missing 'n m' header")
    header = lines[idx].split()
    if len(header) != 2:
        raise ParseError(f"line {idx + 1}: header must be 'n m'")
    try:
        n, m = int(header[0]), int(header[1])
    except ValueError:
        raise ParseError(f"line {idx + 1}: header must hold two integers") from None
    if n < 1:
        raise ParseError(f"line {idx + 1}: vertex count must be >= 1")
    if m < 0:
        raise ParseError(f"line {idx + 1}: edge count must be >= 0")
    raw: list[tuple[int, int]] = []
    where: list[str] = []
    for off, line in enumerate(lines[idx + 1:], start=idx + 2):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"line {off}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {off}: expected two integers") from None
        raw.append((u, v))
        where.append(f"line {off}")
    if len(raw) != m:
        raise ParseError(f"header announced {m} edges but {len(raw)} lines followed")
    return _build_checked(n, raw, where)


def parse_json(text: str | bytes) -> Digraph:
    """Parse {"n": int, "edges": [[u, v], ...]} with 1-based ids."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "n" not in doc or "edges" not in doc:
        raise ParseError('JSON graph needs keys "n" and "edges"')
    n = doc["n"]
    if not isinstance(n, int) or n < 1:
        raise ParseError('"n" must be an integer >= 1')
    raw: list[tuple[int, int]] = []
    where: list[str] = []
    for i, pair in enumerate(doc["edges"]):
        if (
            not isinstance(pair, (list, tuple))
            or len(pair) != 2
            or not all(isinstance(x, int) for x in pair)
        ):
            raise ParseError(f"edge #{i + 1}: expected [u, v] integers")
        raw.append((pair[0], pair[1]))
        where.append(f"edge #{i + 1}")
    return _build_checked(n, raw, where)


def load_graph(text: str | bytes) -> Digraph:
    """Sniff edge-list vs JSON form and parse accordingly."""
    probe = text.decode("utf-8", "replace") if isinstance(text, bytes) else text
    if probe.lstrip().startswith("{"):
        return parse_json(text)
    return parse_edge_list(text)


@dataclass(frozen=True)
class SccDecomposition:
    """comp_id maps vertices to condensation-topological component ranks;
    order lists vertices grouped by component, ranks ascending, original
    index ascending inside each block."""

    comp_id: np.ndarray
    order: np.ndarray
    num_components: int

    def blocks(self) -> Iterator[np.ndarray]:
        start = 0
        for c in range(self.num_components):
            stop = start
            while stop < len(self.order) and self.comp_id[self.order[stop]] == c:
                stop += 1
            yield self.order[start:stop]
            start = stop

    def is_dag(self) -> bool:
        return self.num_components == len(self.order)


def scc_decompose(g: Digraph) -> SccDecomposition:
    """Tarjan's algorithm with an explicit stack; deterministic for a
    fixed input (roots and neighbors visited in ascending index order)."""
    n = g.n
    index = np.full(n, -1, np.int64)
    low = np.zeros(n, np.int64)
    on_stack = np.zeros(n, bool)
    comp_emit = np.full(n, -1, np.int64)
    stack: list[int] = []
    next_index = 0
    emitted = 0

    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, ei = work.pop()
            if ei == 0:
                index[v] = low[v] = next_index
                next_index += 1
                stack.append(v)
                on_stack[v] = True
            row = g.out_neighbors(v)
            advanced = False
            while ei < len(row):
                w = int(row[ei])
                if index[w] < 0:
                    work.append((v, ei + 1))
                    work.append((w, 0))
                    advanced = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
                ei += 1
            if advanced:
                continue
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp_emit[w] = emitted
                    if w == v:
                        break
                emitted += 1
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])

    # Tarjan emits components in reverse topological order of the condensation.
    comp_id = emitted - 1 - comp_emit
    order = np.lexsort((np.arange(n), comp_id))
    return SccDecomposition(comp_id, order.astype(np.int64), emitted)


def reachable_set(
    g: Digraph,
    s: int,
    banned_edge: EdgeRef | tuple[int, int] | None = None,
    banned_vertex: int | None = None,
) -> set[int]:
    """Vertices reachable from s by paths avoiding the banned element."""
    if banned_vertex is not None and banned_vertex == s:
        raise PreconditionError("banned vertex may not equal the source")
    be = tuple(banned_edge) if banned_edge is not None else None
    seen = np.zeros(g.n, bool)
    seen[s] = True
    frontier = [s]
    while frontier:
        u = frontier.pop()
        for v in g.out_neighbors(u):
            v = int(v)
            if seen[v] or v == banned_vertex:
                continue
            if be is not None and u == be[0] and v == be[1]:
                continue
            seen[v] = True
            frontier.append(v)
    return set(np.flatnonzero(seen).tolist())


@dataclass(frozen=True)
class VertexSplitMap:
    """Ids of the split twins: minus[v] takes v's in-edges, plus[v] its
    out-edges, connected by the edge (minus[v], plus[v])."""

    plus: np.ndarray
    minus: np.ndarray


def split_vertices(g: Digraph) -> tuple[Digraph, VertexSplitMap]:
    """Each vertex v becomes v- -> v+; each edge (u, v) becomes (u+, v-)."""
    n = g.n
    edges: list[tuple[int, int]] = [(2 * v, 2 * v + 1) for v in range(n)]
    edges.extend((2 * u + 1, 2 * v) for u, v in g.edges())
    mapping = VertexSplitMap(
        plus=np.arange(1, 2 * n, 2, dtype=np.int64),
        minus=np.arange(0, 2 * n, 2, dtype=np.int64),
    )
    return Digraph(2 * n, edges), mapping


def hat_gadget(g: Digraph) -> tuple[Digraph, int, int]:
    """Strongly connected supergraph in which (u, v) has two edge-disjoint
    paths exactly when v is plainly reachable from u in the input DAG.

    Adds s (=n) and t (=n+1) with edge (s, t), edges (v, s) and (t, v)
    for every original v."""
    if not scc_decompose(g).is_dag():
        raise PreconditionError("hat_gadget needs an acyclic input graph")
    n = g.n
    s, t = n, n + 1
    edges = [(int(u), int(v)) for u, v in g.edges()]
    edges.append((s, t))
    edges.extend((v, s) for v in range(n))
    edges.extend((t, v) for v in range(n))
    return Digraph(n + 2, edges), s, t
