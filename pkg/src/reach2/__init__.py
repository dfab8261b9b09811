"""All-pairs 2-reachability for directed graphs.

For every ordered vertex pair the closure records whether two
edge-disjoint (or internally vertex-disjoint) paths exist, and if not,
a witness: a separating edge/vertex or plain unreachability.  On top of
the closure sit all-sources dominator trees and O(1) queries for
avoiding an edge or a vertex, junction tests, and criticality reports.
"""

from .algebra import BOT, TOP, Side, bit_width, decode, encode, parallel, project, serial
from .bitmatrix import BitMatrix, bool_multiply, transitive_closure
from .closure import (
    CutEdge,
    CutVertex,
    TwoVertexClosure,
    closure,
    query,
    two_vertex_closure,
)
from .closure_dag import ClosureMatrix, closure_dag, recover
from .closure_scc import AuxGraph, auxiliary_graph, closure_scc
from .dominators import (
    BridgeDecomposition,
    DomTree,
    bridges_of_flowgraph,
    dominator_tree,
    is_ancestor,
)
from .apps import (
    CriticalityReport,
    EdgeDomTree,
    all_edge_dominator_trees,
    all_vertex_dominator_trees,
    avoid_edge_query,
    avoid_vertex_query,
    critical_edge,
    critical_node,
    junction_test,
    junctions_report,
    unreachable_count,
)
from .errors import (
    InternalInvariantError,
    InvalidClosureError,
    ParseError,
    PreconditionError,
    QueryError,
    Reach2Error,
)
from .graph import (
    Digraph,
    EdgeRef,
    SccDecomposition,
    hat_gadget,
    load_graph,
    parse_edge_list,
    parse_json,
    reachable_set,
    scc_decompose,
    split_vertices,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
